// Shared random generators and independent oracles for the test suites.
//
// Oracles deliberately avoid the library's algorithms: the tangle
// oracles enumerate paths / subsets directly, so a bug in the SCC or
// fixpoint route cannot hide behind itself.

#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "topomodal/alexandrov.hpp"
#include "topomodal/formula.hpp"
#include "topomodal/kripke.hpp"
#include "topomodal/region.hpp"

namespace testsupport {

using namespace topomodal;

// ── random formulas ──────────────────────────────────────────────

struct GenOpts {
    std::vector<std::string> atoms{"p", "q", "r"};
    int max_depth = 3;
    bool use_box = true;
    bool use_coderiv = true;
    bool use_univ = true;
    bool use_diff = true;
    bool use_count = true;
    bool use_tangle = true;
};

inline FormulaPtr gen_formula(std::mt19937& rng, const GenOpts& o, int depth = 0) {
    auto pick_atom = [&] {
        return make_atom(o.atoms[std::uniform_int_distribution<std::size_t>(0, o.atoms.size() - 1)(rng)]);
    };
    if (depth >= o.max_depth) {
        return std::uniform_int_distribution<int>(0, 5)(rng) == 0 ? make_top() : pick_atom();
    }
    std::vector<int> ops = {0, 0, 1, 2, 3};  // atom x2, top, neg, and
    if (o.use_box) ops.push_back(4);
    if (o.use_coderiv) ops.push_back(5);
    if (o.use_univ) ops.push_back(6);
    if (o.use_diff) ops.push_back(7);
    if (o.use_count) ops.push_back(8);
    if (o.use_tangle) ops.push_back(9);
    switch (ops[std::uniform_int_distribution<std::size_t>(0, ops.size() - 1)(rng)]) {
        case 0: return pick_atom();
        case 1: return make_top();
        case 2: return make_neg(gen_formula(rng, o, depth + 1));
        case 3: return make_and(gen_formula(rng, o, depth + 1), gen_formula(rng, o, depth + 1));
        case 4: return make_box(gen_formula(rng, o, depth + 1));
        case 5: return make_coderiv(gen_formula(rng, o, depth + 1));
        case 6: return make_univ(gen_formula(rng, o, depth + 1));
        case 7: return make_diffbox(gen_formula(rng, o, depth + 1));
        case 8:
            return make_count(std::uniform_int_distribution<unsigned>(0, 3)(rng),
                              gen_formula(rng, o, depth + 1));
        default: {
            std::vector<FormulaPtr> members;
            int k = std::uniform_int_distribution<int>(1, 2)(rng);
            for (int i = 0; i < k; ++i) members.push_back(gen_formula(rng, o, depth + 1));
            return make_tangle(members);
        }
    }
}

// ── random Kripke models ─────────────────────────────────────────

inline std::vector<std::string> world_names(int n) {
    std::vector<std::string> w;
    for (int i = 0; i < n; ++i) w.push_back("w" + std::to_string(i));
    return w;
}

inline KripkeModel gen_kripke(std::mt19937& rng, int max_worlds,
                              const std::vector<std::string>& atoms, double edge_p,
                              bool force_reflexive = false, bool force_transitive = false,
                              bool force_serial = false) {
    int n = std::uniform_int_distribution<int>(1, max_worlds)(rng);
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
    std::bernoulli_distribution coin(edge_p);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) adj[a][b] = coin(rng);
        if (force_reflexive) adj[a][a] = true;
    }
    if (force_serial) {
        for (int a = 0; a < n; ++a) {
            bool any = false;
            for (int b = 0; b < n; ++b) any = any || adj[a][b];
            if (!any) adj[a][std::uniform_int_distribution<int>(0, n - 1)(rng)] = true;
        }
    }
    if (force_transitive) {
        for (int k = 0; k < n; ++k) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (adj[a][k] && adj[k][b]) adj[a][b] = true;
                }
            }
        }
    }
    auto names = world_names(n);
    std::vector<std::pair<std::string, std::string>> edges;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (adj[a][b]) edges.emplace_back(names[a], names[b]);
        }
    }
    std::map<std::string, std::set<std::string>> val;
    std::bernoulli_distribution half(0.5);
    for (const auto& p : atoms) {
        for (int i = 0; i < n; ++i) {
            if (half(rng)) val[p].insert(names[i]);
        }
    }
    return KripkeModel(KripkeFrame(names, edges), val);
}

// ── random finite spaces ─────────────────────────────────────────

inline std::vector<std::string> point_names(int n) {
    std::vector<std::string> p;
    for (int i = 0; i < n; ++i) p.push_back("x" + std::to_string(i));
    return p;
}

inline FiniteSpace gen_space(std::mt19937& rng, int max_points) {
    int n = std::uniform_int_distribution<int>(1, max_points)(rng);
    auto names = point_names(n);
    int k = std::uniform_int_distribution<int>(0, 4)(rng);
    std::vector<std::vector<std::string>> family;
    std::bernoulli_distribution half(0.5);
    for (int i = 0; i < k; ++i) {
        std::vector<std::string> s;
        for (int j = 0; j < n; ++j) {
            if (half(rng)) s.push_back(names[j]);
        }
        family.push_back(s);
    }
    return build_space_from_family(names, family);
}

inline PointSet gen_subset(std::mt19937& rng, const FiniteSpace& s) {
    std::uniform_int_distribution<PointSet> d(0, s.full());
    return d(rng) & s.full();
}

inline FiniteModel gen_finite_model(std::mt19937& rng, int max_points,
                                    const std::vector<std::string>& atoms) {
    FiniteSpace sp = gen_space(rng, max_points);
    std::map<std::string, std::vector<std::string>> val;
    std::bernoulli_distribution half(0.5);
    for (const auto& a : atoms) {
        std::vector<std::string> pts;
        for (int i = 0; i < sp.size(); ++i) {
            if (half(rng)) pts.push_back(sp.point(i));
        }
        val[a] = pts;
    }
    return FiniteModel(std::move(sp), val);
}

// ── oracle: tangle by bounded path search ────────────────────────
//
// w satisfies the tangle iff some u reachable from w lies on a cycle
// whose worlds jointly cover every member set.  Any such cycle can be
// pumped down to length <= |W| * |members|, so the product-state
// search below (world, covered-subset) decides exactly that.

inline WorldMask tangle_paths_oracle(const KripkeFrame& fr, const std::vector<WorldMask>& members) {
    const int n = fr.size();
    const int k = static_cast<int>(members.size());
    const unsigned full = (1u << k) - 1;
    auto bits_of = [&](int w) {
        unsigned b = 0;
        for (int i = 0; i < k; ++i) {
            if (members[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)]) b |= 1u << i;
        }
        return b;
    };

    std::vector<bool> cycle_ok(static_cast<std::size_t>(n), false);
    for (int u = 0; u < n; ++u) {
        std::vector<bool> seen(static_cast<std::size_t>(n) << k, false);
        std::queue<std::pair<int, unsigned>> q;
        for (int v : fr.successors(u)) {
            unsigned s = bits_of(u) | bits_of(v);
            std::size_t id = (static_cast<std::size_t>(v) << k) | s;
            if (!seen[id]) {
                seen[id] = true;
                q.emplace(v, s);
            }
        }
        bool ok = false;
        while (!q.empty() && !ok) {
            auto [v, s] = q.front();
            q.pop();
            if (v == u && s == full) {
                ok = true;
                break;
            }
            for (int v2 : fr.successors(v)) {
                unsigned s2 = s | bits_of(v2);
                std::size_t id = (static_cast<std::size_t>(v2) << k) | s2;
                if (!seen[id]) {
                    seen[id] = true;
                    q.emplace(v2, s2);
                }
            }
        }
        // success state may still be sitting in the queue
        if (!ok) ok = seen[(static_cast<std::size_t>(u) << k) | full];
        cycle_ok[static_cast<std::size_t>(u)] = ok;
    }

    // reachability closure (zero or more steps)
    WorldMask result(static_cast<std::size_t>(n), false);
    for (int w = 0; w < n; ++w) {
        std::vector<bool> vis(static_cast<std::size_t>(n), false);
        std::queue<int> q;
        q.push(w);
        vis[static_cast<std::size_t>(w)] = true;
        bool hit = false;
        while (!q.empty() && !hit) {
            int v = q.front();
            q.pop();
            if (cycle_ok[static_cast<std::size_t>(v)]) {
                hit = true;
                break;
            }
            for (int v2 : fr.successors(v)) {
                if (!vis[static_cast<std::size_t>(v2)]) {
                    vis[static_cast<std::size_t>(v2)] = true;
                    q.push(v2);
                }
            }
        }
        result[static_cast<std::size_t>(w)] = hit;
    }
    return result;
}

// ── random symbolic regions and points ───────────────────────────

inline Sym gen_sym(std::mt19937& rng, SpaceId sp) {
    return sp == SpaceId::Cantor ? std::uniform_int_distribution<Sym>(0, 1)(rng)
                                 : std::uniform_int_distribution<Sym>(0, 3)(rng);
}

inline Stem gen_stem(std::mt19937& rng, SpaceId sp, int max_len) {
    int len = std::uniform_int_distribution<int>(0, max_len)(rng);
    Stem s;
    for (int i = 0; i < len; ++i) s.push_back(gen_sym(rng, sp));
    return s;
}

inline BasePoint gen_point(std::mt19937& rng, SpaceId sp, int max_prefix = 6, int max_period = 3) {
    std::vector<Sym> prefix = gen_stem(rng, sp, max_prefix);
    int plen = std::uniform_int_distribution<int>(1, max_period)(rng);
    std::vector<Sym> period;
    for (int i = 0; i < plen; ++i) period.push_back(gen_sym(rng, sp));
    return make_point(sp, prefix, period);
}

inline Region gen_region(std::mt19937& rng, SpaceId sp) {
    std::vector<Stem> cyls;
    int nc = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < nc; ++i) cyls.push_back(gen_stem(rng, sp, 4));
    std::vector<std::pair<Stem, std::vector<Stem>>> carved;
    if (std::bernoulli_distribution(0.4)(rng)) {
        Stem outer = gen_stem(rng, sp, 2);
        Stem inner = outer;
        inner.push_back(gen_sym(rng, sp));
        carved.push_back({outer, {inner}});
    }
    std::vector<BasePoint> plus, minus;
    int np = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < np; ++i) plus.push_back(gen_point(rng, sp));
    int nm = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < nm; ++i) minus.push_back(gen_point(rng, sp));
    return Region::assemble(sp, cyls, carved, plus, minus);
}

// Sample points related to a region's structure plus random noise;
// depth stays <= 10.
inline std::vector<BasePoint> sample_points(std::mt19937& rng, const Region& r, int extra_random) {
    std::vector<BasePoint> out;
    const SpaceId sp = r.space();
    for (const auto& p : r.plus_points()) out.push_back(p);
    for (const auto& p : r.minus_points()) out.push_back(p);
    for (const auto& cell : r.cells()) {
        Stem s = cell.stem;
        if (!cell.excluded.empty()) {
            Sym mex = 0;
            while (std::find(cell.excluded.begin(), cell.excluded.end(), mex) !=
                   cell.excluded.end())
                ++mex;
            s.push_back(mex);
        }
        out.push_back(make_point(sp, s, {0}));
        Stem s2 = s;
        s2.push_back(1);
        out.push_back(make_point(sp, s2, {0}));
        if (!s.empty()) {
            Stem s3 = s;
            s3.back() = s3.back() == 0 ? 1 : 0;  // sibling cylinder
            out.push_back(make_point(sp, s3, {0}));
        }
    }
    for (int i = 0; i < extra_random; ++i) out.push_back(gen_point(rng, sp));
    return out;
}

// ── oracles: closure and derivative membership by cylinder probes ──
//
// Members of r inside [within], built from the canonical cells and the
// plus points.  Enough distinct candidates are generated that, when
// r & [within] is non-empty, at least `spare` + 1 of them survive the
// finitely many removed points.

inline std::vector<BasePoint> candidate_members(const Region& r, const Stem& within, int spare) {
    const SpaceId sp = r.space();
    std::vector<BasePoint> out;
    auto compatible = [&](const Stem& stem) {
        for (std::size_t i = 0; i < std::min(stem.size(), within.size()); ++i) {
            if (stem[i] != within[i]) return false;
        }
        return true;
    };
    int per_cell = static_cast<int>(r.minus_points().size()) + spare + 2;
    for (const auto& cell : r.cells()) {
        if (!compatible(cell.stem)) continue;
        Stem base;
        if (within.size() <= cell.stem.size()) {
            base = cell.stem;
            if (!cell.excluded.empty()) {
                Sym mex = 0;
                while (std::find(cell.excluded.begin(), cell.excluded.end(), mex) !=
                       cell.excluded.end())
                    ++mex;
                base.push_back(mex);
            }
        } else {
            if (!cell.excluded.empty()) {
                Sym next = within[cell.stem.size()];
                if (std::find(cell.excluded.begin(), cell.excluded.end(), next) !=
                    cell.excluded.end())
                    continue;  // [within] dives into an excluded child
            }
            base = within;
        }
        for (int j = 0; j < per_cell; ++j) {
            Stem prefix = base;
            if (sp == SpaceId::Cantor) {
                prefix.insert(prefix.end(), static_cast<std::size_t>(j), 1);
            } else if (j > 0) {
                prefix.push_back(static_cast<Sym>(j));
            }
            BasePoint cand = make_point(sp, prefix, {0});
            if (r.contains(cand)) out.push_back(cand);
        }
    }
    for (const auto& p : r.plus_points()) {
        if (point_extends(p, within)) out.push_back(p);
    }
    return out;
}

// Probe radius past which cylinder probes become exact for r at x.
inline std::size_t probe_bound(const Region& r, const BasePoint& x) {
    std::size_t k = r.trie_depth() + 1;
    for (const auto& lst : {r.plus_points(), r.minus_points()}) {
        for (const auto& p : lst) {
            Distance d = metric_distance(x, p);
            if (!d.is_zero) k = std::max<std::size_t>(k, d.exp + 2);
        }
    }
    return k;
}

inline Stem truncate_point(const BasePoint& x, std::size_t k) {
    Stem s;
    for (std::size_t i = 0; i < k; ++i) s.push_back(point_at(x, i));
    return s;
}

// x in cl r iff every cylinder around x meets r.
inline bool in_closure_oracle(const Region& r, const BasePoint& x) {
    for (std::size_t k = 0; k <= probe_bound(r, x); ++k) {
        if (candidate_members(r, truncate_point(x, k), 0).empty()) return false;
    }
    return true;
}

// x in <d> r iff every cylinder around x meets r somewhere other than x.
inline bool in_deriv_oracle(const Region& r, const BasePoint& x) {
    for (std::size_t k = 0; k <= probe_bound(r, x); ++k) {
        bool found = false;
        for (const auto& y : candidate_members(r, truncate_point(x, k), 1)) {
            if (!(y == x)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

// ── oracle: tangled closure by subset enumeration ────────────────
//
// The union of all post-fixpoints S (subsets with S inside every
// cl(sets[i] & S)) is itself a post-fixpoint, hence the largest one.

inline PointSet tangle_subsets_oracle(const FiniteSpace& sp, const std::vector<PointSet>& sets) {
    const int n = sp.size();
    PointSet best = 0;
    const PointSet full = sp.full();
    (void)n;
    for (PointSet s = 0;; ++s) {
        bool post = true;
        for (PointSet d : sets) {
            if ((s & ~topo_operator(sp, d & s, TopoOp::Cl)) != 0) {
                post = false;
                break;
            }
        }
        if (post) best |= s;
        if (s == full) break;
    }
    return best;
}

}  // namespace testsupport
