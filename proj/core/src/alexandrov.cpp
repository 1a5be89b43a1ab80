#include "topomodal/alexandrov.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace topomodal {

namespace {

constexpr std::size_t kMaxOpens = std::size_t{1} << 20;

PointSet bit(int i) { return PointSet{1} << i; }

}  // namespace

int FiniteSpace::index_of(const std::string& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
}

PointSet FiniteSpace::full() const {
    int n = size();
    return n == 64 ? ~PointSet{0} : (PointSet{1} << n) - 1;
}

bool FiniteSpace::is_open(PointSet a) const {
    return std::binary_search(opens_.begin(), opens_.end(), a);
}

PointSet FiniteSpace::mask_of(const std::vector<std::string>& pts) const {
    PointSet m = 0;
    for (const auto& p : pts) {
        int i = index_of(p);
        if (i < 0) throw std::invalid_argument("unknown point id: " + p);
        m |= bit(i);
    }
    return m;
}

std::vector<std::string> FiniteSpace::names_of(PointSet a) const {
    std::vector<std::string> out;
    for (int i = 0; i < size(); ++i) {
        if (a & bit(i)) out.push_back(point(i));
    }
    return out;
}

void FiniteSpace::finish(std::vector<PointSet> opens) {
    opens.push_back(0);
    opens.push_back(full());
    std::sort(opens.begin(), opens.end());
    opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
    opens_ = std::move(opens);

    // Union/intersection closure must already hold; verify loudly
    // rather than trusting the producer.
    std::set<PointSet> have(opens_.begin(), opens_.end());
    for (PointSet a : opens_) {
        for (PointSet b : opens_) {
            if (!have.count(a | b) || !have.count(a & b)) {
                throw std::logic_error("open family is not closed under union/intersection");
            }
        }
    }

    nbhd_.assign(points_.size(), full());
    for (int i = 0; i < size(); ++i) {
        for (PointSet o : opens_) {
            if (o & bit(i)) nbhd_[static_cast<std::size_t>(i)] &= o;
        }
    }
}

namespace {

void init_points(FiniteSpace& s, std::vector<std::string>& points, std::vector<std::string>& dst,
                 std::map<std::string, int>& index) {
    if (points.size() > 64) throw std::length_error("more than 64 points");
    dst = std::move(points);
    for (std::size_t i = 0; i < dst.size(); ++i) {
        if (!index.emplace(dst[i], static_cast<int>(i)).second) {
            throw std::invalid_argument("duplicate point id: " + dst[i]);
        }
    }
    (void)s;
}

}  // namespace

FiniteSpace build_space_from_family(std::vector<std::string> points,
                                    const std::vector<std::vector<std::string>>& family) {
    FiniteSpace s;
    init_points(s, points, s.points_, s.index_);

    std::set<PointSet> opens;
    opens.insert(0);
    opens.insert(s.full());
    for (const auto& o : family) opens.insert(s.mask_of(o));

    // Close under pairwise union and intersection to a fixpoint.
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<PointSet> snapshot(opens.begin(), opens.end());
        for (std::size_t i = 0; i < snapshot.size(); ++i) {
            for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
                grew |= opens.insert(snapshot[i] | snapshot[j]).second;
                grew |= opens.insert(snapshot[i] & snapshot[j]).second;
                if (opens.size() > kMaxOpens) {
                    throw std::length_error("generated topology exceeds the open-family cap");
                }
            }
        }
    }
    s.finish(std::vector<PointSet>(opens.begin(), opens.end()));
    return s;
}

FiniteSpace build_space_from_preorder(
    std::vector<std::string> points,
    const std::vector<std::pair<std::string, std::string>>& preorder) {
    FiniteSpace s;
    init_points(s, points, s.points_, s.index_);
    const int n = s.size();

    std::vector<PointSet> up(static_cast<std::size_t>(n), 0);  // up[i] = {j : i <= j}
    for (const auto& [a, b] : preorder) {
        int ia = s.index_of(a), ib = s.index_of(b);
        if (ia < 0 || ib < 0) {
            throw std::invalid_argument("preorder names unknown point: " + (ia < 0 ? a : b));
        }
        up[static_cast<std::size_t>(ia)] |= bit(ib);
    }
    for (int i = 0; i < n; ++i) {
        if (!(up[static_cast<std::size_t>(i)] & bit(i))) {
            throw std::invalid_argument("relation is not reflexive at " + s.point(i));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!(up[static_cast<std::size_t>(i)] & bit(j))) continue;
            if ((up[static_cast<std::size_t>(j)] & ~up[static_cast<std::size_t>(i)]) != 0) {
                throw std::invalid_argument("relation is not transitive at " + s.point(i));
            }
        }
    }

    if (n > 20) throw std::length_error("up-set enumeration capped at 20 points");
    std::vector<PointSet> opens;
    const PointSet fullm = s.full();
    for (PointSet a = 0;; ++a) {
        bool upclosed = true;
        for (int i = 0; i < n && upclosed; ++i) {
            if (a & bit(i)) upclosed = (up[static_cast<std::size_t>(i)] & ~a) == 0;
        }
        if (upclosed) opens.push_back(a);
        if (a == fullm) break;
    }
    s.finish(std::move(opens));
    return s;
}

PointSet topo_operator(const FiniteSpace& s, PointSet a, TopoOp op) {
    PointSet r = 0;
    for (int i = 0; i < s.size(); ++i) {
        PointSet u = s.min_nbhd(i);
        bool in = false;
        switch (op) {
            case TopoOp::Int:
                in = (u & ~a) == 0;
                break;
            case TopoOp::Cl:
                in = (u & a) != 0;
                break;
            case TopoOp::Deriv:
                in = ((u & ~bit(i)) & a) != 0;
                break;
        }
        if (in) r |= bit(i);
    }
    return r;
}

PointSet tangled_closure_fixpoint(const FiniteSpace& s, const std::vector<PointSet>& sets) {
    if (sets.empty()) throw std::invalid_argument("tangled closure of an empty list");
    PointSet cur = s.full();
    while (true) {
        PointSet next = s.full();
        for (PointSet d : sets) next &= topo_operator(s, d & cur, TopoOp::Cl);
        if (next == cur) return cur;
        cur = next;
    }
}

FiniteModel::FiniteModel(FiniteSpace sp,
                         const std::map<std::string, std::vector<std::string>>& valuation)
    : space(std::move(sp)) {
    for (const auto& [atom, pts] : valuation) h.emplace(atom, space.mask_of(pts));
}

namespace {

struct TopoEval {
    const FiniteModel& m;
    std::unordered_map<const Formula*, PointSet> cache;

    PointSet eval(const FormulaPtr& f) {
        auto it = cache.find(f.get());
        if (it != cache.end()) return it->second;
        PointSet r = compute(f);
        cache.emplace(f.get(), r);
        return r;
    }

    PointSet compute(const FormulaPtr& f) {
        const FiniteSpace& s = m.space;
        const PointSet full = s.full();
        switch (f->op()) {
            case Op::Atom: {
                auto it = m.h.find(f->atom_name());
                return it == m.h.end() ? 0 : it->second;
            }
            case Op::Top:
                return full;
            case Op::Neg:
                return full & ~eval(f->lhs());
            case Op::And:
                return eval(f->lhs()) & eval(f->rhs());
            case Op::Box:
                return topo_operator(s, eval(f->lhs()), TopoOp::Int);
            case Op::CoDeriv:
                // [d]f = ~<d>~f: the punctured minimal neighbourhood
                // stays inside the truth set.
                return full & ~topo_operator(s, full & ~eval(f->lhs()), TopoOp::Deriv);
            case Op::Univ:
                return eval(f->lhs()) == full ? full : 0;
            case Op::DiffBox: {
                PointSet a = eval(f->lhs());
                PointSet r = 0;
                for (int i = 0; i < s.size(); ++i) {
                    if ((~a & full & ~(PointSet{1} << i)) == 0) r |= PointSet{1} << i;
                }
                return r;
            }
            case Op::Count: {
                int cnt = std::popcount(eval(f->lhs()));
                return cnt > static_cast<int>(f->count_bound()) ? full : 0;
            }
            case Op::Tangle: {
                std::vector<PointSet> sets;
                for (const auto& d : f->tangle_set()) sets.push_back(eval(d));
                return tangled_closure_fixpoint(s, sets);
            }
        }
        throw std::logic_error("unreachable formula op");
    }
};

}  // namespace

PointSet eval_finite_topo(const FiniteModel& m, const FormulaPtr& f) {
    TopoEval ev{m, {}};
    return ev.eval(f);
}

}  // namespace topomodal
