#include "topomodal/region.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace topomodal {

namespace detail {

struct TrieNode {
    enum class K { Full, Empty, Branch };
    K k = K::Empty;
    bool default_full = false;   // baire branches: leaf kind of unlisted symbols
    std::map<Sym, TriePtr> kids;  // cantor branches: exactly {0, 1}
};

}  // namespace detail

namespace {

using detail::TrieNode;
using detail::TriePtr;
using K = TrieNode::K;

const TriePtr& leaf_full() {
    static const TriePtr n = std::make_shared<TrieNode>(TrieNode{K::Full, false, {}});
    return n;
}

const TriePtr& leaf_empty() {
    static const TriePtr n = std::make_shared<TrieNode>(TrieNode{K::Empty, false, {}});
    return n;
}

const TriePtr& leaf_of(bool full) { return full ? leaf_full() : leaf_empty(); }

bool is_leaf(const TriePtr& n) { return n->k != K::Branch; }

// Canonical branch constructors: constant subtrees collapse to leaves,
// so a surviving branch never denotes the empty or the full set.

TriePtr branch_cantor(TriePtr a, TriePtr b) {
    if (is_leaf(a) && is_leaf(b) && a->k == b->k) return a;
    TrieNode n;
    n.k = K::Branch;
    n.kids.emplace(0, std::move(a));
    n.kids.emplace(1, std::move(b));
    return std::make_shared<TrieNode>(std::move(n));
}

TriePtr branch_baire(bool default_full, std::map<Sym, TriePtr> kids) {
    for (auto it = kids.begin(); it != kids.end();) {
        if (is_leaf(it->second) && (it->second->k == K::Full) == default_full) {
            it = kids.erase(it);
        } else {
            ++it;
        }
    }
    if (kids.empty()) return leaf_of(default_full);
    TrieNode n;
    n.k = K::Branch;
    n.default_full = default_full;
    n.kids = std::move(kids);
    return std::make_shared<TrieNode>(std::move(n));
}

// Restriction of a node to one more symbol; constants restrict to
// themselves.
const TriePtr& child_of(const TriePtr& n, Sym s) {
    if (is_leaf(n)) return n;
    auto it = n->kids.find(s);
    if (it != n->kids.end()) return it->second;
    return leaf_of(n->default_full);
}

bool t_equal(const TriePtr& a, const TriePtr& b) {
    if (a.get() == b.get()) return true;
    if (a->k != b->k) return false;
    if (a->k != K::Branch) return true;
    if (a->default_full != b->default_full) return false;
    if (a->kids.size() != b->kids.size()) return false;
    auto ia = a->kids.begin(), ib = b->kids.begin();
    for (; ia != a->kids.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !t_equal(ia->second, ib->second)) return false;
    }
    return true;
}

TriePtr t_union(SpaceId sp, const TriePtr& a, const TriePtr& b) {
    if (a->k == K::Full || b->k == K::Full) return leaf_full();
    if (a->k == K::Empty) return b;
    if (b->k == K::Empty) return a;
    if (sp == SpaceId::Cantor) {
        return branch_cantor(t_union(sp, child_of(a, 0), child_of(b, 0)),
                             t_union(sp, child_of(a, 1), child_of(b, 1)));
    }
    std::map<Sym, TriePtr> kids;
    for (const auto& [s, _] : a->kids) kids[s] = t_union(sp, child_of(a, s), child_of(b, s));
    for (const auto& [s, _] : b->kids) {
        if (!kids.count(s)) kids[s] = t_union(sp, child_of(a, s), child_of(b, s));
    }
    return branch_baire(a->default_full || b->default_full, std::move(kids));
}

TriePtr t_inter(SpaceId sp, const TriePtr& a, const TriePtr& b) {
    if (a->k == K::Empty || b->k == K::Empty) return leaf_empty();
    if (a->k == K::Full) return b;
    if (b->k == K::Full) return a;
    if (sp == SpaceId::Cantor) {
        return branch_cantor(t_inter(sp, child_of(a, 0), child_of(b, 0)),
                             t_inter(sp, child_of(a, 1), child_of(b, 1)));
    }
    std::map<Sym, TriePtr> kids;
    for (const auto& [s, _] : a->kids) kids[s] = t_inter(sp, child_of(a, s), child_of(b, s));
    for (const auto& [s, _] : b->kids) {
        if (!kids.count(s)) kids[s] = t_inter(sp, child_of(a, s), child_of(b, s));
    }
    return branch_baire(a->default_full && b->default_full, std::move(kids));
}

TriePtr t_compl(SpaceId sp, const TriePtr& a) {
    if (a->k == K::Full) return leaf_empty();
    if (a->k == K::Empty) return leaf_full();
    if (sp == SpaceId::Cantor) {
        return branch_cantor(t_compl(sp, child_of(a, 0)), t_compl(sp, child_of(a, 1)));
    }
    std::map<Sym, TriePtr> kids;
    for (const auto& [s, c] : a->kids) kids[s] = t_compl(sp, c);
    return branch_baire(!a->default_full, std::move(kids));
}

bool t_contains(const TriePtr& n, const BasePoint& x) {
    TriePtr cur = n;
    std::size_t i = 0;
    while (cur->k == K::Branch) cur = child_of(cur, point_at(x, i++));
    return cur->k == K::Full;
}

TriePtr t_restrict(const TriePtr& n, const Stem& stem) {
    TriePtr cur = n;
    for (Sym s : stem) {
        if (is_leaf(cur)) break;
        cur = child_of(cur, s);
    }
    return cur;
}

std::size_t t_depth(const TriePtr& n) {
    if (is_leaf(n)) return 0;
    std::size_t d = 0;
    for (const auto& [_, c] : n->kids) d = std::max(d, t_depth(c));
    return d + 1;
}

// Stem of some cylinder wholly inside the set (requires non-empty).
void t_first_stem(SpaceId sp, const TriePtr& n, Stem& out) {
    if (n->k == K::Full) return;
    if (sp == SpaceId::Baire && n->default_full) {
        Sym mex = 0;
        while (n->kids.count(mex)) ++mex;
        out.push_back(mex);
        return;
    }
    for (const auto& [s, c] : n->kids) {
        if (c->k != K::Empty) {
            out.push_back(s);
            t_first_stem(sp, c, out);
            return;
        }
    }
    throw std::logic_error("empty trie has no member stem");
}

void t_cells(const TriePtr& n, Stem& stem, std::vector<Region::Cell>& out) {
    if (n->k == K::Full) {
        out.push_back({stem, {}});
        return;
    }
    if (n->k == K::Empty) return;
    if (n->default_full) {
        Region::Cell c;
        c.stem = stem;
        for (const auto& [s, _] : n->kids) c.excluded.push_back(s);
        out.push_back(std::move(c));
    }
    for (const auto& [s, c] : n->kids) {
        stem.push_back(s);
        t_cells(c, stem, out);
        stem.pop_back();
    }
}

void check_stem(SpaceId sp, const Stem& stem) {
    if (sp == SpaceId::Cantor) {
        for (Sym s : stem) {
            if (s > 1) throw std::invalid_argument("cantor stems use symbols 0 and 1 only");
        }
    }
}

TriePtr cylinder_trie(SpaceId sp, const Stem& stem) {
    check_stem(sp, stem);
    TriePtr n = leaf_full();
    for (auto it = stem.rbegin(); it != stem.rend(); ++it) {
        if (sp == SpaceId::Cantor) {
            n = branch_cantor(*it == 0 ? n : leaf_empty(), *it == 1 ? n : leaf_empty());
        } else {
            std::map<Sym, TriePtr> kids;
            kids.emplace(*it, n);
            n = branch_baire(false, std::move(kids));
        }
    }
    return n;
}

struct PointLess {
    bool operator()(const BasePoint& a, const BasePoint& b) const { return point_less(a, b); }
};

}  // namespace

// ── points ───────────────────────────────────────────────────────

namespace {

// Shortest word whose repetition gives v.
std::vector<Sym> primitive_root(const std::vector<Sym>& v) {
    const std::size_t n = v.size();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = v[i] == v[i - d];
        if (ok) return std::vector<Sym>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d));
    }
    return v;
}

}  // namespace

BasePoint make_point(SpaceId space, std::vector<Sym> prefix, std::vector<Sym> period) {
    if (period.empty()) throw std::invalid_argument("point period must be non-empty");
    if (space == SpaceId::Cantor) {
        for (Sym s : prefix) {
            if (s > 1) throw std::invalid_argument("cantor points use symbols 0 and 1 only");
        }
        for (Sym s : period) {
            if (s > 1) throw std::invalid_argument("cantor points use symbols 0 and 1 only");
        }
    }
    period = primitive_root(period);
    // Absorb trailing prefix symbols into the cycle: rotating the
    // period right once per absorbed symbol reaches the unique shortest
    // prefix.  Rotations of a primitive word stay primitive.
    while (!prefix.empty() && prefix.back() == period.back()) {
        period.pop_back();
        period.insert(period.begin(), prefix.back());
        prefix.pop_back();
    }
    BasePoint p;
    p.space = space;
    p.prefix = std::move(prefix);
    p.period = std::move(period);
    return p;
}

Sym point_at(const BasePoint& x, std::size_t i) {
    if (i < x.prefix.size()) return x.prefix[i];
    return x.period[(i - x.prefix.size()) % x.period.size()];
}

bool point_extends(const BasePoint& x, const Stem& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (point_at(x, i) != s[i]) return false;
    }
    return true;
}

namespace {

// Index of the first disagreement, or nullopt when the points are
// equal.  Two eventually periodic sequences agreeing past
// max prefix length + lcm of periods are equal everywhere.
std::optional<std::size_t> first_mismatch(const BasePoint& a, const BasePoint& b) {
    std::size_t bound = std::max(a.prefix.size(), b.prefix.size()) +
                        std::lcm(a.period.size(), b.period.size()) + 1;
    for (std::size_t i = 0; i < bound; ++i) {
        if (point_at(a, i) != point_at(b, i)) return i;
    }
    return std::nullopt;
}

}  // namespace

int point_compare(const BasePoint& a, const BasePoint& b) {
    if (a.space != b.space) throw std::invalid_argument("comparing points of different spaces");
    auto m = first_mismatch(a, b);
    if (!m) return 0;
    return point_at(a, *m) < point_at(b, *m) ? -1 : 1;
}

bool point_less(const BasePoint& a, const BasePoint& b) { return point_compare(a, b) < 0; }

// ── metric ───────────────────────────────────────────────────────

double Distance::approx() const { return is_zero ? 0.0 : std::ldexp(1.0, -static_cast<int>(exp)); }

std::string Distance::str() const {
    if (is_zero) return "0";
    if (exp == 0) return "1";
    if (exp < 64) return "1/" + std::to_string(std::uint64_t{1} << exp);
    return "2^-" + std::to_string(exp);
}

bool operator==(const Distance& a, const Distance& b) {
    if (a.is_zero != b.is_zero) return false;
    return a.is_zero || a.exp == b.exp;
}

bool operator<(const Distance& a, const Distance& b) {
    if (a.is_zero) return !b.is_zero;
    if (b.is_zero) return false;
    return a.exp > b.exp;
}

Distance metric_distance(const BasePoint& x, const BasePoint& y) {
    if (x.space != y.space) throw std::invalid_argument("distance across different spaces");
    auto m = first_mismatch(x, y);
    if (!m) return Distance::zero();
    return Distance::pow2(static_cast<std::uint32_t>(*m));
}

// ── regions ──────────────────────────────────────────────────────

Region::Region(SpaceId space, detail::TriePtr trie, std::vector<BasePoint> plus,
               std::vector<BasePoint> minus)
    : space_(space), trie_(std::move(trie)), plus_(std::move(plus)), minus_(std::move(minus)) {}

Region Region::normalize(SpaceId space, detail::TriePtr trie, std::vector<DesiredPoint> desires) {
    std::map<BasePoint, bool, PointLess> want;
    for (auto& d : desires) want[std::move(d.point)] = d.member;
    std::vector<BasePoint> plus, minus;
    for (auto& [p, member] : want) {
        bool in_trie = t_contains(trie, p);
        if (member && !in_trie) plus.push_back(p);
        if (!member && in_trie) minus.push_back(p);
    }
    return Region(space, std::move(trie), std::move(plus), std::move(minus));
}

Region Region::empty(SpaceId space) { return Region(space, leaf_empty(), {}, {}); }

Region Region::full(SpaceId space) { return Region(space, leaf_full(), {}, {}); }

Region Region::cylinder(SpaceId space, const Stem& stem) {
    return Region(space, cylinder_trie(space, stem), {}, {});
}

Region Region::single_point(const BasePoint& p) {
    return Region(p.space, leaf_empty(), {p}, {});
}

Region Region::assemble(SpaceId space, const std::vector<Stem>& cylinders,
                        const std::vector<std::pair<Stem, std::vector<Stem>>>& carved,
                        const std::vector<BasePoint>& plus, const std::vector<BasePoint>& minus) {
    TriePtr acc = leaf_empty();
    for (const Stem& s : cylinders) acc = t_union(space, acc, cylinder_trie(space, s));
    for (const auto& [outer, inners] : carved) {
        TriePtr part = cylinder_trie(space, outer);
        for (const Stem& inner : inners) {
            part = t_inter(space, part, t_compl(space, cylinder_trie(space, inner)));
        }
        acc = t_union(space, acc, part);
    }
    std::vector<DesiredPoint> desires;
    for (const BasePoint& p : minus) {
        if (p.space != space) throw std::invalid_argument("minus point from the wrong space");
        desires.push_back({p, false});
    }
    // plus entries after minus entries: plus wins conflicts
    for (const BasePoint& p : plus) {
        if (p.space != space) throw std::invalid_argument("plus point from the wrong space");
        desires.push_back({p, true});
    }
    return normalize(space, std::move(acc), std::move(desires));
}

bool Region::contains(const BasePoint& x) const {
    if (x.space != space_) throw std::invalid_argument("membership across different spaces");
    if (t_contains(trie_, x)) {
        return !std::binary_search(minus_.begin(), minus_.end(), x, PointLess{});
    }
    return std::binary_search(plus_.begin(), plus_.end(), x, PointLess{});
}

bool Region::is_empty() const { return trie_->k == K::Empty && plus_.empty(); }

bool Region::is_full() const { return trie_->k == K::Full && minus_.empty(); }

bool Region::meets_cylinder(const Stem& s) const {
    check_stem(space_, s);
    // a non-empty restriction meets the cylinder in infinitely many
    // points, so finitely many removals cannot kill it
    if (t_restrict(trie_, s)->k != K::Empty) return true;
    for (const BasePoint& p : plus_) {
        if (point_extends(p, s)) return true;
    }
    return false;
}

bool Region::covers_cylinder(const Stem& s) const {
    check_stem(space_, s);
    // finitely many plus points never cover the infinite remainder of
    // a cylinder, so the trie must cover it and no removal may hit it
    if (t_restrict(trie_, s)->k != K::Full) return false;
    for (const BasePoint& p : minus_) {
        if (point_extends(p, s)) return false;
    }
    return true;
}

std::size_t Region::trie_depth() const { return t_depth(trie_); }

BasePoint Region::some_member() const {
    if (trie_->k != K::Empty) {
        Stem stem;
        t_first_stem(space_, trie_, stem);
        // dodge the finitely many removed points inside the cylinder
        for (std::size_t j = 0;; ++j) {
            Stem prefix = stem;
            if (space_ == SpaceId::Cantor) {
                prefix.insert(prefix.end(), j, 1);
            } else if (j > 0) {
                prefix.push_back(static_cast<Sym>(j));
            }
            BasePoint cand = make_point(space_, prefix, {0});
            if (contains(cand)) return cand;
        }
    }
    if (!plus_.empty()) return plus_.front();
    throw std::domain_error("empty region has no member");
}

std::vector<Region::Cell> Region::cells() const {
    std::vector<Cell> out;
    Stem stem;
    t_cells(trie_, stem, out);
    return out;
}

bool operator==(const Region& a, const Region& b) {
    return a.space_ == b.space_ && a.plus_ == b.plus_ && a.minus_ == b.minus_ &&
           t_equal(a.trie_, b.trie_);
}

Region region_combine(const Region& a, const Region& b, SetOp op) {
    if (op != SetOp::Complement && a.space_ != b.space_) {
        throw std::invalid_argument("combining regions of different spaces");
    }
    const SpaceId sp = a.space_;
    std::vector<Region::DesiredPoint> desires;
    auto collect = [&desires](const Region& r) {
        for (const BasePoint& p : r.plus_) desires.push_back({p, false});
        for (const BasePoint& p : r.minus_) desires.push_back({p, false});
    };
    switch (op) {
        case SetOp::Union: {
            TriePtr t = t_union(sp, a.trie_, b.trie_);
            collect(a);
            collect(b);
            for (auto& d : desires) d.member = a.contains(d.point) || b.contains(d.point);
            return Region::normalize(sp, std::move(t), std::move(desires));
        }
        case SetOp::Intersect: {
            TriePtr t = t_inter(sp, a.trie_, b.trie_);
            collect(a);
            collect(b);
            for (auto& d : desires) d.member = a.contains(d.point) && b.contains(d.point);
            return Region::normalize(sp, std::move(t), std::move(desires));
        }
        case SetOp::Complement: {
            TriePtr t = t_compl(sp, a.trie_);
            collect(a);
            for (auto& d : desires) d.member = !a.contains(d.point);
            return Region::normalize(sp, std::move(t), std::move(desires));
        }
    }
    throw std::logic_error("unreachable set op");
}

Region region_topo_operator(const Region& r, TopoOp op) {
    switch (op) {
        case TopoOp::Deriv:
            // cylinders accumulate everywhere in themselves (both
            // spaces are dense in themselves and cylinders are open);
            // finite sets accumulate nowhere (T1); removing finitely
            // many points never removes an accumulation point
            return Region(r.space_, r.trie_, {}, {});
        case TopoOp::Cl:
            return Region(r.space_, r.trie_, r.plus_, {});
        case TopoOp::Int:
            // no finite plus set can absorb a neighbourhood, and every
            // removed point punches a hole in the open core
            return Region(r.space_, r.trie_, {}, r.minus_);
    }
    throw std::logic_error("unreachable topo op");
}

Cardinality region_cardinality(const Region& r) {
    if (r.cells().empty()) {
        std::uint64_t n = r.plus_points().size();
        if (n == 0) return {Cardinality::Kind::Empty, 0};
        return {Cardinality::Kind::Finite, n};
    }
    // a cylinder minus finitely many points stays infinite
    return {Cardinality::Kind::Infinite, 0};
}

Distance metric_distance(const BasePoint& x, const Region& r) {
    if (x.space != r.space_) throw std::invalid_argument("distance across different spaces");
    if (r.is_empty()) throw std::domain_error("distance to the empty region is undefined");
    std::optional<Distance> best;
    if (r.trie_->k != K::Empty) {
        if (t_contains(r.trie_, x)) {
            // even when x itself was removed, the surrounding
            // cylinder keeps members arbitrarily close
            return Distance::zero();
        }
        TriePtr cur = r.trie_;
        std::uint32_t k = 0;
        while (cur->k == K::Branch) {
            cur = child_of(cur, point_at(x, k));
            if (cur->k == K::Empty) break;
            ++k;
        }
        // members sharing exactly k symbols with x exist, none share
        // more
        best = Distance::pow2(k);
    }
    for (const BasePoint& p : r.plus_) {
        Distance d = metric_distance(x, p);
        if (!best || d < *best) best = d;
        if (best->is_zero) break;
    }
    return *best;
}

// ── models and evaluation ────────────────────────────────────────

SymbolicModel::SymbolicModel(SpaceId space_, std::map<std::string, Region> h_)
    : space(space_), h(std::move(h_)) {
    for (const auto& [atom, r] : h) {
        if (r.space() != space) {
            throw std::invalid_argument("valuation of '" + atom + "' lives in the wrong space");
        }
    }
}

namespace {

struct SymbolicEval {
    const SymbolicModel& m;
    std::unordered_map<const Formula*, Region> cache;

    Region eval(const FormulaPtr& f) {
        auto it = cache.find(f.get());
        if (it != cache.end()) return it->second;
        Region r = compute(f);
        cache.emplace(f.get(), r);
        return r;
    }

    Region compute(const FormulaPtr& f) {
        const SpaceId sp = m.space;
        switch (f->op()) {
            case Op::Atom: {
                auto it = m.h.find(f->atom_name());
                return it == m.h.end() ? Region::empty(sp) : it->second;
            }
            case Op::Top:
                return Region::full(sp);
            case Op::Neg:
                return region_combine(eval(f->lhs()), eval(f->lhs()), SetOp::Complement);
            case Op::And:
                return region_combine(eval(f->lhs()), eval(f->rhs()), SetOp::Intersect);
            case Op::Box:
                return region_topo_operator(eval(f->lhs()), TopoOp::Int);
            case Op::CoDeriv: {
                Region notf = region_combine(eval(f->lhs()), eval(f->lhs()), SetOp::Complement);
                Region d = region_topo_operator(notf, TopoOp::Deriv);
                return region_combine(d, d, SetOp::Complement);
            }
            case Op::Univ:
                return eval(f->lhs()).is_full() ? Region::full(sp) : Region::empty(sp);
            case Op::DiffBox: {
                Region fails = region_combine(eval(f->lhs()), eval(f->lhs()), SetOp::Complement);
                Cardinality c = region_cardinality(fails);
                if (c.kind == Cardinality::Kind::Empty) return Region::full(sp);
                if (c.kind == Cardinality::Kind::Finite && c.count == 1) {
                    return Region::single_point(fails.plus_points().front());
                }
                return Region::empty(sp);
            }
            case Op::Count: {
                Cardinality c = region_cardinality(eval(f->lhs()));
                bool holds = c.kind == Cardinality::Kind::Infinite || c.count > f->count_bound();
                return holds ? Region::full(sp) : Region::empty(sp);
            }
            case Op::Tangle: {
                std::vector<Region> sets;
                std::size_t weight = 0;
                for (const auto& d : f->tangle_set()) {
                    Region r = eval(d);
                    weight += r.cells().size() + r.plus_points().size() + r.minus_points().size();
                    sets.push_back(std::move(r));
                }
                // every iterate lives in the finite algebra generated
                // by the members' cells and exceptional points
                std::size_t budget = (std::size_t{1} << std::min<std::size_t>(weight, 20)) + 1;
                Region cur = Region::full(sp);
                for (std::size_t step = 0; step <= budget; ++step) {
                    Region next = Region::full(sp);
                    for (const Region& dr : sets) {
                        Region cut = region_combine(dr, cur, SetOp::Intersect);
                        next = region_combine(next, region_topo_operator(cut, TopoOp::Cl),
                                              SetOp::Intersect);
                    }
                    if (next == cur) return cur;
                    cur = std::move(next);
                }
                throw std::logic_error("tangle iteration exceeded its subalgebra budget");
            }
        }
        throw std::logic_error("unreachable formula op");
    }
};

}  // namespace

Region eval_symbolic(const SymbolicModel& m, const FormulaPtr& f) {
    SymbolicEval ev{m, {}};
    return ev.eval(f);
}

}  // namespace topomodal
