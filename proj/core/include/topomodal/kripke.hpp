// kripke.hpp - finite Kripke frames and models, relational semantics
//
// Worlds are identified by strings and indexed densely; truth sets are
// std::vector<bool> masks over the frame's world order.  The evaluator
// covers the whole language:
//
//   []f and [d]f coincide on frames (every successor satisfies f),
//   A f / [!=]f / <c n>f are global conditions,
//   <t>{d1..dk} holds at w iff an infinite R-path from w makes every di
//   true infinitely often; on a finite frame this is a lasso condition,
//   decided through strongly connected components (tangle_lasso).

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "topomodal/formula.hpp"

namespace topomodal {

using WorldMask = std::vector<bool>;

class KripkeFrame {
public:
    // Throws std::invalid_argument on duplicate ids or edges naming
    // unlisted worlds.
    KripkeFrame(std::vector<std::string> worlds,
                const std::vector<std::pair<std::string, std::string>>& edges);

    int size() const { return static_cast<int>(worlds_.size()); }
    const std::vector<std::string>& worlds() const { return worlds_; }
    const std::string& world(int i) const { return worlds_[static_cast<std::size_t>(i)]; }
    int index_of(const std::string& w) const;  // -1 when absent
    const std::vector<int>& successors(int i) const {
        return succ_[static_cast<std::size_t>(i)];
    }
    bool has_edge(int a, int b) const;
    std::vector<std::pair<std::string, std::string>> edge_list() const;

private:
    std::vector<std::string> worlds_;
    std::map<std::string, int> index_;
    std::vector<std::vector<int>> succ_;  // sorted successor lists
};

struct FrameProperties {
    bool serial = false;
    bool transitive = false;
    bool reflexive = false;
};

FrameProperties frame_properties(const KripkeFrame& fr);

class KripkeModel {
public:
    // Valuation worlds must belong to the frame; atoms absent from the
    // map valuate to the empty set.
    KripkeModel(KripkeFrame frame, const std::map<std::string, std::set<std::string>>& valuation);

    const KripkeFrame& frame() const { return frame_; }
    WorldMask atom_mask(const std::string& atom) const;
    const std::map<std::string, WorldMask>& valuation() const { return val_; }

private:
    KripkeFrame frame_;
    std::map<std::string, WorldMask> val_;
};

// Truth set {w : M,w |= f}.
WorldMask eval_kripke(const KripkeModel& m, const FormulaPtr& f);
bool eval_kripke_at(const KripkeModel& m, const FormulaPtr& f, const std::string& world);

// {w : some infinite R-path from w satisfies each member of delta
// infinitely often}.  Decided via SCCs: w qualifies iff it reaches a
// strongly connected component containing at least one edge in which
// every member of delta is true somewhere.
WorldMask tangle_lasso(const KripkeModel& m, const std::vector<FormulaPtr>& delta);

// True iff f(R(w)) = R'(f(w)) for every world w of src.  Throws
// std::invalid_argument when f is not a total map src -> dst.
bool check_pmorphism(const KripkeFrame& src, const KripkeFrame& dst,
                     const std::map<std::string, std::string>& f);

}  // namespace topomodal
