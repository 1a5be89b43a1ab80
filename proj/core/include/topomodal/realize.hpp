// realize.hpp - scheme regions over Baire space and depth-bounded
// realization of finite Kripke models as topological models
//
// A SchemeRegion is a finite description of a (usually infinite) subset
// of Baire space, built so that membership of eventually periodic
// points stays decidable:
//
//   Cylinder(s)        [s], sequences extending the stem s
//   TailRest(j)        union of [<i>] over first symbols i >= j
//   Boundary(G, m)     { u t 0^w : u a member stem of G, |t| = m }
//   Slice(G, m, i, k)  union over member stems u of G, blocks t in w^m
//                      and zero runs r in class i of
//                      [u t 0^r] \ [u t 0^(r+1)]
//   Union              finite union of the above
//
// The open kinds are countable unions of basic cylinders, their member
// stems: Cylinder has the single member s, TailRest the members <i>,
// and a Slice the members u t 0^r a with a != 0 and r allowed for its
// residue class (r = i mod k, or, with modulus 0, r in the diagonal
// pairing class of i, which meets every zero-run depth range so that
// each slice accumulates on all of the boundary set).  Membership of a
// point resolves its unique member stem, so slices of distinct residues
// are disjoint by construction, and the slices for all residues
// together with Boundary(G, m) partition G exactly.
//
// Boundary(G, m) is 2^-(minlen(G)+m)-separated: distinct boundary
// points disagree within their first minlen + m symbols, hence the set
// has empty derivative.  Every point of G sits within 2^-(minlen+m) of
// it, so picking the block depth m minimal with 2^-(minlen+m) < eps
// turns the boundary into an eps-net of G.
//
// realize_model unfolds a finite serial transitive Kripke model into a
// labeled tree of scheme regions: level 0 partitions the space into one
// region per world, and every node at level l < depth is dissected with
// eps = 2^-(l+1) into its boundary plus one slice per successor of the
// node's label.  Labels restricted to the strict-descendant order form
// a p-morphism onto the model wherever children are materialized, and
// eval_realized exploits exactly that: it decides formulas in the
// universal-derivative fragment ([d], A, booleans, atoms) at boundary
// points from the tree topology alone, descending into one boundary
// representative per child slice, and agrees with the relational truth
// value at the node's label whenever modal depth + level fits within
// the unfolding depth.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "topomodal/formula.hpp"
#include "topomodal/kripke.hpp"
#include "topomodal/region.hpp"

namespace topomodal {

// ── dyadic rationals ─────────────────────────────────────────────

// num / 2^exp; num may exceed 2^exp ("1" is {1, 0}).
struct Dyadic {
    std::uint64_t num = 0;
    std::uint32_t exp = 0;

    bool positive() const { return num != 0; }
    friend bool operator==(const Dyadic&, const Dyadic&);
};

// True iff 2^-e < d.
bool pow2_below(std::uint32_t e, const Dyadic& d);

// Accepts "3", "3/8" (power-of-two denominator); throws
// std::invalid_argument otherwise.
Dyadic parse_dyadic(const std::string& text);
std::string dyadic_str(const Dyadic& d);

// ── scheme regions ───────────────────────────────────────────────

class SchemeRegion {
public:
    enum class Kind { Cylinder, TailRest, Boundary, Slice, Union };

    // Defaults to the empty-stem cylinder, the whole space.
    SchemeRegion() = default;

    static SchemeRegion cylinder(Stem s);
    static SchemeRegion tail_rest(Sym first);
    // Throws std::invalid_argument when base is not an open kind.
    static SchemeRegion boundary_of(SchemeRegion base, std::uint32_t block);
    // modulus >= 1: zero runs r = residue (mod modulus); modulus == 0:
    // r ranges over the diagonal pairing class of residue.
    static SchemeRegion slice(SchemeRegion base, std::uint32_t block, std::uint32_t residue,
                              std::uint32_t modulus);
    static SchemeRegion union_of(std::vector<SchemeRegion> parts);

    Kind kind() const { return kind_; }
    const Stem& stem() const { return stem_; }            // Cylinder
    Sym first() const { return first_; }                  // TailRest
    const SchemeRegion& base() const { return *base_; }   // Boundary, Slice
    std::uint32_t block() const { return block_; }        // Boundary, Slice
    std::uint32_t residue() const { return residue_; }    // Slice
    std::uint32_t modulus() const { return modulus_; }    // Slice
    const std::vector<SchemeRegion>& parts() const { return parts_; }  // Union

    bool is_open_kind() const;

    // Throws std::invalid_argument on non-Baire points.
    bool contains(const BasePoint& x) const;
    // The member stem of x, for open kinds; nullopt when x lies
    // outside (in particular on an all-zero tail a slice excludes).
    std::optional<Stem> member_stem(const BasePoint& x) const;

    // Length of the shortest member stem, and one stem realizing it.
    std::size_t min_member_length() const;
    Stem min_member_stem() const;
    // min_member_stem() continued with zeros forever: a canonical
    // inhabitant (of the boundary set, for Boundary kind).
    BasePoint sample_point() const;

private:
    Kind kind_ = Kind::Cylinder;
    Stem stem_;
    Sym first_ = 0;
    std::shared_ptr<const SchemeRegion> base_;
    std::uint32_t block_ = 0;
    std::uint32_t residue_ = 0;
    std::uint32_t modulus_ = 1;
    std::vector<SchemeRegion> parts_;
};

// Diagonal pairing (i, c) -> (i+c)(i+c+1)/2 + i and the class test it
// induces on zero runs.
std::uint64_t diagonal_pair(std::uint32_t i, std::uint64_t c);
bool diagonal_class_contains(std::uint32_t i, std::uint64_t r);

// ── partition and dissection ─────────────────────────────────────

// Pairwise disjoint non-empty clopen regions covering the space:
// [<0>], ..., [<count-2>] and TailRest(count-1).  Throws
// std::invalid_argument on count == 0.
std::vector<SchemeRegion> partition_noncompact(std::size_t count);

// Member j of the countable partition: the cylinder [<j>].
SchemeRegion countable_partition_member(std::size_t j);

// Result of dissecting an open region G with an eps-net boundary.
struct Dissection {
    std::uint32_t block = 0;  // chosen minimal with 2^-(minlen+block) < eps
    SchemeRegion boundary;
    std::uint32_t modulus = 1;  // 0 when the index set is countable

    SchemeRegion piece(std::uint32_t i) const;           // G_i
    std::vector<SchemeRegion> pieces(std::size_t take) const;
};

// pieces == nullopt requests countably many slices (diagonal residue
// classes); otherwise pieces >= 1 slices in round-robin classes.
// Throws std::invalid_argument on eps <= 0, pieces == 0, or a
// non-open base.
Dissection dissect_scheme(const SchemeRegion& base, std::optional<std::uint32_t> pieces,
                          const Dyadic& eps);
Dissection dissect_cylinder(const Stem& s, std::optional<std::uint32_t> pieces,
                            const Dyadic& eps);

// ── realized structures ──────────────────────────────────────────

struct RealizedNode {
    SchemeRegion region;
    int label = 0;   // world index in the underlying model
    int level = 0;
    int parent = -1;
    bool dissected = false;
    // Valid when dissected:
    std::uint32_t block = 0;
    SchemeRegion boundary;
    std::vector<int> children;  // aligned with successors(label)
    // Shortest member stem, a concrete handle on the region.
    Stem rep_stem;
};

class RealizedStructure {
public:
    const KripkeModel& model() const { return *model_; }
    int root_world() const { return root_world_; }
    int depth() const { return depth_; }
    const std::vector<RealizedNode>& nodes() const { return nodes_; }
    const RealizedNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    // Root node index realizing world w.
    int root_of(int w) const { return roots_[static_cast<std::size_t>(w)]; }

    // The node whose materialized boundary x lies on, with the member
    // stem x extends there.  Throws std::invalid_argument when x is
    // not on any materialized boundary (it then sits inside a leaf
    // region, or outside the walk's slices entirely).
    struct Location {
        int node = 0;
        int level = 0;
        Stem member;
    };
    Location locate(const BasePoint& x) const;

private:
    friend RealizedStructure realize_model(const KripkeModel& m, const std::string& root_world,
                                           int depth);
    friend bool eval_realized(const RealizedStructure& rs, const FormulaPtr& f,
                              const BasePoint& x);

    std::shared_ptr<const KripkeModel> model_;
    int root_world_ = 0;
    int depth_ = 0;
    std::vector<RealizedNode> nodes_;
    std::vector<int> roots_;
};

// Unfolds the model to the given depth as described in the header
// comment.  Throws std::invalid_argument when the frame is not serial
// and transitive, the root world is unknown, or depth < 0.
RealizedStructure realize_model(const KripkeModel& m, const std::string& root_world, int depth);

// Structural invariant check: per-node block depths achieve their
// level's eps bound, children align with the label's successors, and
// labels form a p-morphism along strict descendants at every node
// whose children are materialized.  Returns human-readable violation
// descriptions, empty when sound.
std::vector<std::string> verify_realization(const RealizedStructure& rs);

// Truth of f at the boundary point x, computed from the scheme tree:
// atoms hold when the label of x's node satisfies them, A ranges over
// one boundary representative per root, [d] descends to one boundary
// representative per child slice.  Requires f inside the
// universal-derivative fragment and modal_depth(f) + level(x) <=
// depth; throws std::invalid_argument otherwise.
bool eval_realized(const RealizedStructure& rs, const FormulaPtr& f, const BasePoint& x);

}  // namespace topomodal
