// alexandrov.hpp - finite topological spaces on at most 64 points
//
// Point subsets are uint64 bitmasks.  Every finite topology is
// Alexandrov, so each point has a minimal open neighbourhood U_x (the
// intersection of all opens containing x); interior, closure and the
// derivative reduce to scans over the U_x table:
//
//   int A    = {x : U_x subset of A}
//   cl  A    = {x : U_x meets A}
//   <d> A    = {x : U_x minus {x} meets A}
//
// Spaces are built either from an explicit generating family (closed
// under union and intersection, with empty set and X added) or from a
// reflexive-transitive preorder (opens = up-closed sets).

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topomodal/formula.hpp"
#include "topomodal/ops.hpp"

namespace topomodal {

using PointSet = std::uint64_t;

class FiniteSpace {
public:
    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<std::string>& points() const { return points_; }
    const std::string& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    int index_of(const std::string& p) const;  // -1 when absent

    PointSet full() const;
    bool is_open(PointSet a) const;
    const std::vector<PointSet>& opens() const { return opens_; }
    PointSet min_nbhd(int i) const { return nbhd_[static_cast<std::size_t>(i)]; }

    PointSet mask_of(const std::vector<std::string>& pts) const;  // throws on unknown ids
    std::vector<std::string> names_of(PointSet a) const;

    friend FiniteSpace build_space_from_family(std::vector<std::string> points,
                                               const std::vector<std::vector<std::string>>& family);
    friend FiniteSpace build_space_from_preorder(
        std::vector<std::string> points,
        const std::vector<std::pair<std::string, std::string>>& preorder);

private:
    FiniteSpace() = default;
    void finish(std::vector<PointSet> opens);  // sorts, verifies, derives U_x

    std::vector<std::string> points_;
    std::map<std::string, int> index_;
    std::vector<PointSet> opens_;  // sorted, deduplicated
    std::vector<PointSet> nbhd_;   // minimal open neighbourhood per point
};

// Closes the family under pairwise union/intersection, adds the empty
// set and X.  Throws std::invalid_argument on unknown point ids or
// duplicate points, std::length_error past 64 points or 2^20 opens.
FiniteSpace build_space_from_family(std::vector<std::string> points,
                                    const std::vector<std::vector<std::string>>& family);

// Opens are the up-closed sets of the preorder.  Throws
// std::invalid_argument when the relation is not reflexive-transitive.
FiniteSpace build_space_from_preorder(
    std::vector<std::string> points,
    const std::vector<std::pair<std::string, std::string>>& preorder);

PointSet topo_operator(const FiniteSpace& s, PointSet a, TopoOp op);

// Largest S with S contained in every cl(sets[i] & S); iterated from
// the full set, strictly decreasing, so it stabilises within |X| steps.
// Throws std::invalid_argument on an empty list.
PointSet tangled_closure_fixpoint(const FiniteSpace& s, const std::vector<PointSet>& sets);

struct FiniteModel {
    // Valuations must stay inside the point set (checked).
    FiniteModel(FiniteSpace space, const std::map<std::string, std::vector<std::string>>& valuation);

    FiniteSpace space;
    std::map<std::string, PointSet> h;
};

// Full evaluation: [] = interior, [d] via punctured minimal
// neighbourhoods, A / [!=] / <c n> global, <t> via the closure fixpoint.
PointSet eval_finite_topo(const FiniteModel& m, const FormulaPtr& f);

}  // namespace topomodal
