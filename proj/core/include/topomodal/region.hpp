// region.hpp - symbolic subsets of Cantor space (2^omega) and Baire
// space (omega^omega)
//
// A Region denotes ((C \ minus) | plus) where C is a clopen set (a
// finite boolean combination of cylinders [s] = {x : x extends s}) and
// plus/minus are finite sets of representable points, i.e. eventually
// periodic sequences.  The class keeps a canonical form:
//
//   - C is a cylinder trie.  Cantor nodes are Full/Empty leaves or
//     branches with both children explicit and not equal leaves of the
//     same kind.  Baire branches list finitely many explicit children
//     plus a default leaf kind covering the co-finitely many remaining
//     symbols; children equal to the default leaf are dropped and
//     childless branches collapse.  Induction on depth shows each
//     clopen set has exactly one such trie, so set equality is
//     structural equality.
//   - minus is inside C, plus is disjoint from C, both sorted.
//
// Both spaces are dense in themselves, T1, and their cylinders are
// clopen, which gives closed forms for the operators:
//
//   <d>R = C        (cylinders accumulate everywhere in themselves,
//                    finite sets accumulate nowhere)
//   cl R = C | plus
//   int R = C \ minus
//
// The tangle set <t>{d1..dk} is the largest S with S included in every
// cl([di] & S).  eval_symbolic computes it by iterating
// S -> intersection of cl([di] & S) starting from the full space.
// The map is monotone and the first iterate already descends, so the
// sequence decreases; every iterate is a union of cells of the joint
// trie refinement of the [di] adjusted by finitely many of their
// exceptional points, a finite lattice, so the sequence stabilises.
// The stable set is the greatest fixpoint over arbitrary subsets, not
// just symbolic ones: any S with S included in F(S) satisfies
// S ⊆ F^k(full) for every k, by induction, hence sits inside the
// stable set.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "topomodal/formula.hpp"
#include "topomodal/ops.hpp"

namespace topomodal {

enum class SpaceId { Cantor, Baire };

using Sym = std::uint32_t;
using Stem = std::vector<Sym>;

// ── points ───────────────────────────────────────────────────────

// Eventually periodic sequence: prefix followed by period forever.
// Always in canonical form: the period is primitive (not a repeated
// shorter word) and cannot be rotated into the prefix.
struct BasePoint {
    SpaceId space = SpaceId::Cantor;
    std::vector<Sym> prefix;
    std::vector<Sym> period;

    friend bool operator==(const BasePoint&, const BasePoint&) = default;
};

// Canonicalizes; throws std::invalid_argument on an empty period,
// symbols > 1 in cantor, or symbol overflow.
BasePoint make_point(SpaceId space, std::vector<Sym> prefix, std::vector<Sym> period);

Sym point_at(const BasePoint& x, std::size_t i);
bool point_extends(const BasePoint& x, const Stem& s);
int point_compare(const BasePoint& a, const BasePoint& b);  // total order, 0 iff equal
bool point_less(const BasePoint& a, const BasePoint& b);

// ── metric ───────────────────────────────────────────────────────

// Value 0 or 2^-exp.
struct Distance {
    bool is_zero = true;
    std::uint32_t exp = 0;

    static Distance zero() { return {true, 0}; }
    static Distance pow2(std::uint32_t e) { return {false, e}; }
    double approx() const;
    std::string str() const;  // "0", "1", "1/2", "1/4", ...
    friend bool operator==(const Distance&, const Distance&);
    friend bool operator<(const Distance&, const Distance&);
};

// d(x,y) = 0 when equal, else 2^-(longest common prefix length).
// Throws std::invalid_argument on a space mismatch.
Distance metric_distance(const BasePoint& x, const BasePoint& y);

// ── regions ──────────────────────────────────────────────────────

namespace detail {
struct TrieNode;
using TriePtr = std::shared_ptr<const TrieNode>;
}  // namespace detail

class Region {
public:
    static Region empty(SpaceId space);
    static Region full(SpaceId space);
    static Region cylinder(SpaceId space, const Stem& stem);
    static Region single_point(const BasePoint& p);
    // (union of cylinders and carved cylinders [outer]\union[inners],
    // minus the minus points, plus the plus points; plus wins conflicts)
    static Region assemble(SpaceId space, const std::vector<Stem>& cylinders,
                           const std::vector<std::pair<Stem, std::vector<Stem>>>& carved,
                           const std::vector<BasePoint>& plus, const std::vector<BasePoint>& minus);

    SpaceId space() const { return space_; }
    bool contains(const BasePoint& x) const;
    bool is_empty() const;
    bool is_full() const;
    bool meets_cylinder(const Stem& s) const;   // [s] & R non-empty
    bool covers_cylinder(const Stem& s) const;  // [s] subset of R
    std::size_t trie_depth() const;
    const std::vector<BasePoint>& plus_points() const { return plus_; }
    const std::vector<BasePoint>& minus_points() const { return minus_; }
    BasePoint some_member() const;  // throws std::domain_error when empty

    // Canonical clopen cells.  excluded empty: the cell is the plain
    // cylinder [stem]; otherwise (baire only) it is the union of
    // [stem j] over the symbols j not listed in excluded.
    struct Cell {
        Stem stem;
        std::vector<Sym> excluded;
    };
    std::vector<Cell> cells() const;

    friend bool operator==(const Region& a, const Region& b);

    friend Region region_combine(const Region& a, const Region& b, SetOp op);
    friend Region region_topo_operator(const Region& r, TopoOp op);
    friend Distance metric_distance(const BasePoint& x, const Region& r);

private:
    Region(SpaceId space, detail::TriePtr trie, std::vector<BasePoint> plus,
           std::vector<BasePoint> minus);

    // Rebuilds the canonical split of exceptional points around a trie:
    // a desired member outside the trie goes to plus, a desired
    // non-member inside it goes to minus.  Later entries for the same
    // point win.
    struct DesiredPoint {
        BasePoint point;
        bool member;
    };
    static Region normalize(SpaceId space, detail::TriePtr trie,
                            std::vector<DesiredPoint> desires);

    SpaceId space_ = SpaceId::Cantor;
    detail::TriePtr trie_;
    std::vector<BasePoint> plus_;   // sorted, disjoint from the trie part
    std::vector<BasePoint> minus_;  // sorted, inside the trie part
};

// Exact set algebra; Complement ignores b.  Throws
// std::invalid_argument on a space mismatch.
Region region_combine(const Region& a, const Region& b, SetOp op);

Region region_topo_operator(const Region& r, TopoOp op);

struct Cardinality {
    enum class Kind { Empty, Finite, Infinite } kind = Kind::Empty;
    std::uint64_t count = 0;  // meaningful for Finite (and 0 for Empty)
};

Cardinality region_cardinality(const Region& r);

// Infimum distance from x to a non-empty region; 0 when x lies in the
// closure (the infimum need not be attained).  Throws
// std::domain_error on the empty region, std::invalid_argument on a
// space mismatch.
Distance metric_distance(const BasePoint& x, const Region& r);

// ── models ───────────────────────────────────────────────────────

struct SymbolicModel {
    // All valuation regions must live in the given space (checked).
    SymbolicModel(SpaceId space, std::map<std::string, Region> h);

    SpaceId space;
    std::map<std::string, Region> h;
};

// Full evaluation; atoms outside h valuate to the empty region.
// Throws std::logic_error if a tangle iteration overruns its budget
// (the generated-subalgebra bound; overrunning signals a bug, it is
// not a user error).
Region eval_symbolic(const SymbolicModel& m, const FormulaPtr& f);

}  // namespace topomodal
