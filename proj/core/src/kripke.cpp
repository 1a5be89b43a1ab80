#include "topomodal/kripke.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace topomodal {

KripkeFrame::KripkeFrame(std::vector<std::string> worlds,
                         const std::vector<std::pair<std::string, std::string>>& edges)
    : worlds_(std::move(worlds)) {
    for (std::size_t i = 0; i < worlds_.size(); ++i) {
        if (!index_.emplace(worlds_[i], static_cast<int>(i)).second) {
            throw std::invalid_argument("duplicate world id: " + worlds_[i]);
        }
    }
    succ_.assign(worlds_.size(), {});
    for (const auto& [a, b] : edges) {
        auto ia = index_.find(a), ib = index_.find(b);
        if (ia == index_.end()) throw std::invalid_argument("edge from unknown world: " + a);
        if (ib == index_.end()) throw std::invalid_argument("edge to unknown world: " + b);
        succ_[static_cast<std::size_t>(ia->second)].push_back(ib->second);
    }
    for (auto& s : succ_) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
}

int KripkeFrame::index_of(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? -1 : it->second;
}

bool KripkeFrame::has_edge(int a, int b) const {
    const auto& s = succ_[static_cast<std::size_t>(a)];
    return std::binary_search(s.begin(), s.end(), b);
}

std::vector<std::pair<std::string, std::string>> KripkeFrame::edge_list() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int a = 0; a < size(); ++a) {
        for (int b : successors(a)) out.emplace_back(world(a), world(b));
    }
    return out;
}

FrameProperties frame_properties(const KripkeFrame& fr) {
    FrameProperties p;
    const int n = fr.size();
    p.serial = true;
    p.reflexive = true;
    p.transitive = true;
    for (int a = 0; a < n; ++a) {
        const auto& s = fr.successors(a);
        if (s.empty()) p.serial = false;
        if (!fr.has_edge(a, a)) p.reflexive = false;
        for (int b : s) {
            for (int c : fr.successors(b)) {
                if (!fr.has_edge(a, c)) p.transitive = false;
            }
        }
    }
    return p;
}

KripkeModel::KripkeModel(KripkeFrame frame,
                         const std::map<std::string, std::set<std::string>>& valuation)
    : frame_(std::move(frame)) {
    for (const auto& [atom, worlds] : valuation) {
        WorldMask mask(static_cast<std::size_t>(frame_.size()), false);
        for (const auto& w : worlds) {
            int i = frame_.index_of(w);
            if (i < 0) {
                throw std::invalid_argument("valuation of '" + atom + "' names unknown world: " + w);
            }
            mask[static_cast<std::size_t>(i)] = true;
        }
        val_.emplace(atom, std::move(mask));
    }
}

WorldMask KripkeModel::atom_mask(const std::string& atom) const {
    auto it = val_.find(atom);
    if (it != val_.end()) return it->second;
    return WorldMask(static_cast<std::size_t>(frame_.size()), false);
}

namespace {

int count_true(const WorldMask& m) {
    return static_cast<int>(std::count(m.begin(), m.end(), true));
}

// Tarjan's algorithm; returns component id per world, ids in reverse
// topological order of the condensation.
std::vector<int> scc_ids(const KripkeFrame& fr, int& comp_count) {
    const int n = fr.size();
    std::vector<int> idx(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
        comp(static_cast<std::size_t>(n), -1);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    int next_index = 0;
    comp_count = 0;

    // Iterative DFS to keep deep frames off the call stack.
    struct Frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (idx[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> dfs{{root, 0}};
        idx[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!dfs.empty()) {
            auto& fr_top = dfs.back();
            const auto& succ = fr.successors(fr_top.v);
            if (fr_top.child < succ.size()) {
                int w = succ[fr_top.child++];
                if (idx[static_cast<std::size_t>(w)] == -1) {
                    idx[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    dfs.push_back({w, 0});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(fr_top.v)] =
                        std::min(low[static_cast<std::size_t>(fr_top.v)], idx[static_cast<std::size_t>(w)]);
                }
            } else {
                int v = fr_top.v;
                if (low[static_cast<std::size_t>(v)] == idx[static_cast<std::size_t>(v)]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        comp[static_cast<std::size_t>(w)] = comp_count;
                    } while (w != v);
                    ++comp_count;
                }
                dfs.pop_back();
                if (!dfs.empty()) {
                    int p = dfs.back().v;
                    low[static_cast<std::size_t>(p)] =
                        std::min(low[static_cast<std::size_t>(p)], low[static_cast<std::size_t>(v)]);
                }
            }
        }
    }
    return comp;
}

struct Evaluator {
    const KripkeModel& m;
    std::unordered_map<const Formula*, WorldMask> cache;

    WorldMask eval(const FormulaPtr& f) {
        auto it = cache.find(f.get());
        if (it != cache.end()) return it->second;
        WorldMask r = compute(f);
        cache.emplace(f.get(), r);
        return r;
    }

    WorldMask compute(const FormulaPtr& f) {
        const int n = m.frame().size();
        const std::size_t un = static_cast<std::size_t>(n);
        switch (f->op()) {
            case Op::Atom:
                return m.atom_mask(f->atom_name());
            case Op::Top:
                return WorldMask(un, true);
            case Op::Neg: {
                WorldMask a = eval(f->lhs());
                a.flip();
                return a;
            }
            case Op::And: {
                WorldMask a = eval(f->lhs());
                WorldMask b = eval(f->rhs());
                for (std::size_t i = 0; i < un; ++i) a[i] = a[i] && b[i];
                return a;
            }
            case Op::Box:
            case Op::CoDeriv: {
                // On frames both modalities quantify over all successors.
                WorldMask a = eval(f->lhs());
                WorldMask r(un, true);
                for (int w = 0; w < n; ++w) {
                    for (int v : m.frame().successors(w)) {
                        if (!a[static_cast<std::size_t>(v)]) {
                            r[static_cast<std::size_t>(w)] = false;
                            break;
                        }
                    }
                }
                return r;
            }
            case Op::Univ: {
                WorldMask a = eval(f->lhs());
                bool all = count_true(a) == n;
                return WorldMask(un, all);
            }
            case Op::DiffBox: {
                // True at w iff no other world falsifies the argument.
                WorldMask a = eval(f->lhs());
                int false_total = n - count_true(a);
                WorldMask r(un, false);
                for (std::size_t i = 0; i < un; ++i) {
                    int false_elsewhere = false_total - (a[i] ? 0 : 1);
                    r[i] = false_elsewhere == 0;
                }
                return r;
            }
            case Op::Count: {
                // <c n> f: more than n worlds satisfy f, uniformly at
                // every world.
                WorldMask a = eval(f->lhs());
                bool holds = count_true(a) > static_cast<int>(f->count_bound());
                return WorldMask(un, holds);
            }
            case Op::Tangle:
                return tangle_lasso(m, f->tangle_set());
        }
        throw std::logic_error("unreachable formula op");
    }
};

}  // namespace

WorldMask eval_kripke(const KripkeModel& m, const FormulaPtr& f) {
    Evaluator ev{m, {}};
    return ev.eval(f);
}

bool eval_kripke_at(const KripkeModel& m, const FormulaPtr& f, const std::string& world) {
    int i = m.frame().index_of(world);
    if (i < 0) throw std::invalid_argument("unknown world: " + world);
    return eval_kripke(m, f)[static_cast<std::size_t>(i)];
}

WorldMask tangle_lasso(const KripkeModel& m, const std::vector<FormulaPtr>& delta) {
    const KripkeFrame& fr = m.frame();
    const int n = fr.size();
    const std::size_t un = static_cast<std::size_t>(n);

    std::vector<WorldMask> member_masks;
    member_masks.reserve(delta.size());
    for (const auto& d : delta) member_masks.push_back(eval_kripke(m, d));

    int comp_count = 0;
    std::vector<int> comp = scc_ids(fr, comp_count);

    // A component supports the tangle iff it contains an edge (so an
    // infinite path can stay inside) and meets every member's truth set.
    std::vector<bool> has_edge(static_cast<std::size_t>(comp_count), false);
    for (int a = 0; a < n; ++a) {
        for (int b : fr.successors(a)) {
            if (comp[static_cast<std::size_t>(a)] == comp[static_cast<std::size_t>(b)]) {
                has_edge[static_cast<std::size_t>(comp[static_cast<std::size_t>(a)])] = true;
            }
        }
    }
    std::vector<bool> good(static_cast<std::size_t>(comp_count), false);
    for (int c = 0; c < comp_count; ++c) {
        if (!has_edge[static_cast<std::size_t>(c)]) continue;
        bool ok = true;
        for (const auto& mask : member_masks) {
            bool hit = false;
            for (int w = 0; w < n && !hit; ++w) {
                hit = comp[static_cast<std::size_t>(w)] == c && mask[static_cast<std::size_t>(w)];
            }
            if (!hit) {
                ok = false;
                break;
            }
        }
        good[static_cast<std::size_t>(c)] = ok;
    }

    // Worlds reaching a good component (zero or more steps), via reverse
    // edges from every world already inside one.
    std::vector<std::vector<int>> pred(un);
    for (int a = 0; a < n; ++a) {
        for (int b : fr.successors(a)) pred[static_cast<std::size_t>(b)].push_back(a);
    }
    WorldMask result(un, false);
    std::vector<int> queue;
    for (int w = 0; w < n; ++w) {
        if (good[static_cast<std::size_t>(comp[static_cast<std::size_t>(w)])]) {
            result[static_cast<std::size_t>(w)] = true;
            queue.push_back(w);
        }
    }
    while (!queue.empty()) {
        int w = queue.back();
        queue.pop_back();
        for (int p : pred[static_cast<std::size_t>(w)]) {
            if (!result[static_cast<std::size_t>(p)]) {
                result[static_cast<std::size_t>(p)] = true;
                queue.push_back(p);
            }
        }
    }
    return result;
}

bool check_pmorphism(const KripkeFrame& src, const KripkeFrame& dst,
                     const std::map<std::string, std::string>& f) {
    std::vector<int> image(static_cast<std::size_t>(src.size()), -1);
    for (const auto& [a, b] : f) {
        int ia = src.index_of(a);
        if (ia < 0) throw std::invalid_argument("map names world outside source frame: " + a);
        int ib = dst.index_of(b);
        if (ib < 0) throw std::invalid_argument("map targets world outside destination frame: " + b);
        image[static_cast<std::size_t>(ia)] = ib;
    }
    for (int w = 0; w < src.size(); ++w) {
        if (image[static_cast<std::size_t>(w)] < 0) {
            throw std::invalid_argument("map is not total, missing world: " + src.world(w));
        }
    }
    for (int w = 0; w < src.size(); ++w) {
        std::set<int> forth;
        for (int v : src.successors(w)) forth.insert(image[static_cast<std::size_t>(v)]);
        const auto& back = dst.successors(image[static_cast<std::size_t>(w)]);
        if (forth.size() != back.size()) return false;
        if (!std::equal(forth.begin(), forth.end(), back.begin())) return false;
    }
    return true;
}

}  // namespace topomodal
