#include "topomodal/realize.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace topomodal {

namespace {

// All symbols of x from position k on are zero.  Canonical points make
// this cheap: an eventually-zero point has period {0}, and its prefix
// never ends in 0, so everything after the prefix is the zero tail.
bool all_zero_from(const BasePoint& x, std::size_t k) {
    if (x.period.size() != 1 || x.period[0] != 0) return false;
    for (std::size_t i = k; i < x.prefix.size(); ++i) {
        if (x.prefix[i] != 0) return false;
    }
    return true;
}

// Number of zeros at positions k, k+1, ... before the first non-zero
// symbol.  Pre: not all_zero_from(x, k).
std::size_t zero_run_after(const BasePoint& x, std::size_t k) {
    std::size_t i = k;
    while (point_at(x, i) == 0) ++i;
    return i - k;
}

Stem point_take(const BasePoint& x, std::size_t n) {
    Stem s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(point_at(x, i));
    return s;
}

void require_baire(const BasePoint& x) {
    if (x.space != SpaceId::Baire) {
        throw std::invalid_argument("scheme regions live in baire space");
    }
}

}  // namespace

// ── dyadic rationals ─────────────────────────────────────────────

namespace {

Dyadic reduced(std::uint64_t num, std::uint32_t exp) {
    while (exp > 0 && num % 2 == 0) {
        num /= 2;
        --exp;
    }
    return {num, exp};
}

}  // namespace

bool operator==(const Dyadic& a, const Dyadic& b) {
    Dyadic ra = reduced(a.num, a.exp), rb = reduced(b.num, b.exp);
    return ra.num == rb.num && ra.exp == rb.exp;
}

bool pow2_below(std::uint32_t e, const Dyadic& d) {
    // 2^-e < num/2^exp  iff  2^(exp-e) < num
    if (d.num == 0) return false;
    if (d.exp <= e) return d.exp < e || d.num > 1;
    std::uint32_t s = d.exp - e;
    if (s >= 64) return false;
    return d.num > (std::uint64_t{1} << s);
}

Dyadic parse_dyadic(const std::string& text) {
    std::size_t slash = text.find('/');
    std::string num_part = text.substr(0, slash == std::string::npos ? text.size() : slash);
    std::uint64_t num = 0;
    if (num_part.empty() || num_part.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("dyadic numerator must be a decimal number");
    }
    num = std::stoull(num_part);
    std::uint32_t exp = 0;
    if (slash != std::string::npos) {
        std::string den_part = text.substr(slash + 1);
        if (den_part.empty() || den_part.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("dyadic denominator must be a decimal number");
        }
        std::uint64_t den = std::stoull(den_part);
        if (den == 0 || (den & (den - 1)) != 0) {
            throw std::invalid_argument("dyadic denominator must be a power of two");
        }
        while (den > 1) {
            den /= 2;
            ++exp;
        }
    }
    return reduced(num, exp);
}

std::string dyadic_str(const Dyadic& d) {
    Dyadic r = reduced(d.num, d.exp);
    std::ostringstream out;
    out << r.num;
    if (r.exp > 0) out << '/' << (std::uint64_t{1} << r.exp);
    return out.str();
}

// ── scheme regions ───────────────────────────────────────────────

SchemeRegion SchemeRegion::cylinder(Stem s) {
    SchemeRegion r;
    r.kind_ = Kind::Cylinder;
    r.stem_ = std::move(s);
    return r;
}

SchemeRegion SchemeRegion::tail_rest(Sym first) {
    SchemeRegion r;
    r.kind_ = Kind::TailRest;
    r.first_ = first;
    return r;
}

SchemeRegion SchemeRegion::boundary_of(SchemeRegion base, std::uint32_t block) {
    if (!base.is_open_kind()) {
        throw std::invalid_argument("boundary requires an open base region");
    }
    SchemeRegion r;
    r.kind_ = Kind::Boundary;
    r.base_ = std::make_shared<const SchemeRegion>(std::move(base));
    r.block_ = block;
    return r;
}

SchemeRegion SchemeRegion::slice(SchemeRegion base, std::uint32_t block, std::uint32_t residue,
                                 std::uint32_t modulus) {
    if (!base.is_open_kind()) {
        throw std::invalid_argument("slice requires an open base region");
    }
    if (modulus >= 1 && residue >= modulus) {
        throw std::invalid_argument("slice residue must lie below the modulus");
    }
    SchemeRegion r;
    r.kind_ = Kind::Slice;
    r.base_ = std::make_shared<const SchemeRegion>(std::move(base));
    r.block_ = block;
    r.residue_ = residue;
    r.modulus_ = modulus;
    return r;
}

SchemeRegion SchemeRegion::union_of(std::vector<SchemeRegion> parts) {
    SchemeRegion r;
    r.kind_ = Kind::Union;
    r.parts_ = std::move(parts);
    return r;
}

bool SchemeRegion::is_open_kind() const {
    switch (kind_) {
        case Kind::Cylinder:
        case Kind::TailRest:
        case Kind::Slice:
            return true;
        case Kind::Boundary:
            return false;
        case Kind::Union:
            return std::all_of(parts_.begin(), parts_.end(),
                               [](const SchemeRegion& p) { return p.is_open_kind(); });
    }
    return false;
}

std::optional<Stem> SchemeRegion::member_stem(const BasePoint& x) const {
    require_baire(x);
    switch (kind_) {
        case Kind::Cylinder:
            if (point_extends(x, stem_)) return stem_;
            return std::nullopt;
        case Kind::TailRest: {
            Sym s0 = point_at(x, 0);
            if (s0 >= first_) return Stem{s0};
            return std::nullopt;
        }
        case Kind::Slice: {
            std::optional<Stem> u = base_->member_stem(x);
            if (!u) return std::nullopt;
            std::size_t p = u->size() + block_;
            if (all_zero_from(x, p)) return std::nullopt;
            std::size_t r = zero_run_after(x, p);
            bool ok = modulus_ >= 1 ? (r % modulus_ == residue_)
                                    : diagonal_class_contains(residue_, r);
            if (!ok) return std::nullopt;
            return point_take(x, p + r + 1);
        }
        case Kind::Boundary:
            return std::nullopt;
        case Kind::Union:
            for (const SchemeRegion& part : parts_) {
                if (std::optional<Stem> u = part.member_stem(x)) return u;
            }
            return std::nullopt;
    }
    return std::nullopt;
}

bool SchemeRegion::contains(const BasePoint& x) const {
    require_baire(x);
    switch (kind_) {
        case Kind::Boundary: {
            std::optional<Stem> u = base_->member_stem(x);
            return u && all_zero_from(x, u->size() + block_);
        }
        case Kind::Union:
            return std::any_of(parts_.begin(), parts_.end(),
                               [&](const SchemeRegion& p) { return p.contains(x); });
        default:
            return member_stem(x).has_value();
    }
}

std::size_t SchemeRegion::min_member_length() const {
    return min_member_stem().size();
}

Stem SchemeRegion::min_member_stem() const {
    switch (kind_) {
        case Kind::Cylinder:
            return stem_;
        case Kind::TailRest:
            return Stem{first_};
        case Kind::Boundary: {
            Stem s = base_->min_member_stem();
            s.insert(s.end(), block_, 0);
            return s;
        }
        case Kind::Slice: {
            Stem s = base_->min_member_stem();
            std::uint64_t min_r = modulus_ >= 1 ? residue_ : diagonal_pair(residue_, 0);
            s.insert(s.end(), block_ + static_cast<std::size_t>(min_r), 0);
            s.push_back(1);
            return s;
        }
        case Kind::Union: {
            if (parts_.empty()) {
                throw std::domain_error("empty union has no member stem");
            }
            Stem best = parts_.front().min_member_stem();
            for (std::size_t i = 1; i < parts_.size(); ++i) {
                Stem cand = parts_[i].min_member_stem();
                if (cand.size() < best.size()) best = std::move(cand);
            }
            return best;
        }
    }
    throw std::logic_error("unhandled scheme region kind");
}

BasePoint SchemeRegion::sample_point() const {
    return make_point(SpaceId::Baire, min_member_stem(), {0});
}

std::uint64_t diagonal_pair(std::uint32_t i, std::uint64_t c) {
    std::uint64_t d = i + c;
    return d * (d + 1) / 2 + i;
}

bool diagonal_class_contains(std::uint32_t i, std::uint64_t r) {
    // invert the pairing: the diagonal d is maximal with d(d+1)/2 <= r
    std::uint64_t d = 0;
    while ((d + 1) * (d + 2) / 2 <= r) ++d;
    return r - d * (d + 1) / 2 == i;
}

// ── partition and dissection ─────────────────────────────────────

std::vector<SchemeRegion> partition_noncompact(std::size_t count) {
    if (count == 0) throw std::invalid_argument("a partition needs at least one piece");
    std::vector<SchemeRegion> out;
    out.reserve(count);
    for (std::size_t j = 0; j + 1 < count; ++j) {
        out.push_back(SchemeRegion::cylinder({static_cast<Sym>(j)}));
    }
    out.push_back(SchemeRegion::tail_rest(static_cast<Sym>(count - 1)));
    return out;
}

SchemeRegion countable_partition_member(std::size_t j) {
    return SchemeRegion::cylinder({static_cast<Sym>(j)});
}

SchemeRegion Dissection::piece(std::uint32_t i) const {
    if (modulus >= 1 && i >= modulus) {
        throw std::invalid_argument("dissection has fewer pieces than requested");
    }
    return SchemeRegion::slice(boundary.base(), block, i, modulus);
}

std::vector<SchemeRegion> Dissection::pieces(std::size_t take) const {
    if (modulus >= 1) take = std::min<std::size_t>(take, modulus);
    std::vector<SchemeRegion> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(piece(static_cast<std::uint32_t>(i)));
    return out;
}

Dissection dissect_scheme(const SchemeRegion& base, std::optional<std::uint32_t> pieces,
                          const Dyadic& eps) {
    if (!base.is_open_kind()) {
        throw std::invalid_argument("dissection requires an open base region");
    }
    if (!eps.positive()) throw std::invalid_argument("dissection tolerance must be positive");
    if (pieces && *pieces == 0) throw std::invalid_argument("dissection needs at least one piece");
    std::size_t minlen = base.min_member_length();
    std::uint32_t m = 0;
    while (!pow2_below(static_cast<std::uint32_t>(minlen) + m, eps)) {
        if (m > 4096) throw std::logic_error("dissection block depth ran away");
        ++m;
    }
    Dissection d;
    d.block = m;
    d.boundary = SchemeRegion::boundary_of(base, m);
    d.modulus = pieces ? *pieces : 0;
    return d;
}

Dissection dissect_cylinder(const Stem& s, std::optional<std::uint32_t> pieces,
                            const Dyadic& eps) {
    return dissect_scheme(SchemeRegion::cylinder(s), pieces, eps);
}

// ── realized structures ──────────────────────────────────────────

RealizedStructure realize_model(const KripkeModel& m, const std::string& root_world, int depth) {
    FrameProperties props = frame_properties(m.frame());
    if (!props.serial || !props.transitive) {
        throw std::invalid_argument("realization requires a serial transitive frame");
    }
    int w0 = m.frame().index_of(root_world);
    if (w0 < 0) throw std::invalid_argument("unknown root world '" + root_world + "'");
    if (depth < 0) throw std::invalid_argument("realization depth must be non-negative");

    RealizedStructure rs;
    rs.model_ = std::make_shared<const KripkeModel>(m);
    rs.root_world_ = w0;
    rs.depth_ = depth;

    const int world_count = m.frame().size();
    std::vector<SchemeRegion> level0 = partition_noncompact(static_cast<std::size_t>(world_count));
    for (int w = 0; w < world_count; ++w) {
        RealizedNode node;
        node.region = level0[static_cast<std::size_t>(w)];
        node.label = w;
        node.level = 0;
        node.rep_stem = node.region.min_member_stem();
        rs.roots_.push_back(static_cast<int>(rs.nodes_.size()));
        rs.nodes_.push_back(std::move(node));
    }

    std::queue<int> todo;
    for (int r : rs.roots_) todo.push(r);
    while (!todo.empty()) {
        int id = todo.front();
        todo.pop();
        int level = rs.nodes_[static_cast<std::size_t>(id)].level;
        if (level >= depth) continue;
        const std::vector<int>& succ = m.frame().successors(rs.nodes_[static_cast<std::size_t>(id)].label);
        Dissection d = dissect_scheme(rs.nodes_[static_cast<std::size_t>(id)].region,
                                      static_cast<std::uint32_t>(succ.size()),
                                      Dyadic{1, static_cast<std::uint32_t>(level) + 1});
        {
            RealizedNode& n = rs.nodes_[static_cast<std::size_t>(id)];
            n.dissected = true;
            n.block = d.block;
            n.boundary = d.boundary;
        }
        for (std::size_t c = 0; c < succ.size(); ++c) {
            RealizedNode child;
            child.region = d.piece(static_cast<std::uint32_t>(c));
            child.label = succ[c];
            child.level = level + 1;
            child.parent = id;
            child.rep_stem = child.region.min_member_stem();
            int child_id = static_cast<int>(rs.nodes_.size());
            rs.nodes_[static_cast<std::size_t>(id)].children.push_back(child_id);
            rs.nodes_.push_back(std::move(child));
            todo.push(child_id);
        }
    }
    return rs;
}

RealizedStructure::Location RealizedStructure::locate(const BasePoint& x) const {
    require_baire(x);
    Sym s0 = point_at(x, 0);
    std::size_t w = std::min<std::size_t>(s0, roots_.size() - 1);
    int cur = roots_[w];
    Stem member{s0};
    for (;;) {
        const RealizedNode& n = nodes_[static_cast<std::size_t>(cur)];
        if (!n.dissected) {
            throw std::invalid_argument("point is not on a materialized boundary");
        }
        std::size_t p = member.size() + n.block;
        if (all_zero_from(x, p)) return {cur, n.level, member};
        std::size_t r = zero_run_after(x, p);
        std::size_t c = r % n.children.size();
        member = point_take(x, p + r + 1);
        cur = n.children[c];
    }
}

std::vector<std::string> verify_realization(const RealizedStructure& rs) {
    std::vector<std::string> bad;
    auto note = [&bad](int id, const std::string& what) {
        bad.push_back("node " + std::to_string(id) + ": " + what);
    };

    const KripkeFrame& fr = rs.model().frame();
    if (static_cast<int>(rs.nodes().size()) < fr.size()) {
        bad.push_back("fewer nodes than worlds");
        return bad;
    }
    for (int w = 0; w < fr.size(); ++w) {
        if (rs.node(rs.root_of(w)).label != w) note(rs.root_of(w), "root label mismatch");
    }

    std::vector<std::set<int>> desc(rs.nodes().size());
    for (int id = static_cast<int>(rs.nodes().size()) - 1; id >= 0; --id) {
        const RealizedNode& n = rs.node(id);
        if (n.rep_stem != n.region.min_member_stem()) note(id, "stale representative stem");
        for (int c : n.children) {
            const RealizedNode& ch = rs.node(c);
            if (ch.parent != id) note(id, "child parent link broken");
            if (ch.level != n.level + 1) note(id, "child level mismatch");
            desc[static_cast<std::size_t>(id)].insert(ch.label);
            desc[static_cast<std::size_t>(id)].insert(desc[static_cast<std::size_t>(c)].begin(),
                                                      desc[static_cast<std::size_t>(c)].end());
        }
        if (!n.dissected) {
            if (n.level != rs.depth()) note(id, "undissected node above the leaf level");
            continue;
        }
        // eps bound 2^-(minlen+block) < 2^-(level+1), with minimal block
        std::size_t minlen = n.region.min_member_length();
        std::size_t need = static_cast<std::size_t>(n.level) + 2;
        if (minlen + n.block < need) note(id, "boundary misses its eps bound");
        std::size_t minimal = minlen >= need ? 0 : need - minlen;
        if (n.block != minimal) note(id, "block depth not minimal");
        const std::vector<int>& succ = fr.successors(n.label);
        if (n.children.size() != succ.size()) {
            note(id, "child count differs from successor count");
            continue;
        }
        for (std::size_t c = 0; c < succ.size(); ++c) {
            if (rs.node(n.children[c]).label != succ[c]) note(id, "child labels out of order");
        }
        // labels along strict descendants realize exactly the
        // successor set: the p-morphism equation at this node
        std::set<int> want(succ.begin(), succ.end());
        if (desc[static_cast<std::size_t>(id)] != want) note(id, "descendant labels break the p-morphism");
    }
    return bad;
}

namespace {

class RealizedEval {
public:
    explicit RealizedEval(const RealizedStructure& rs) : rs_(rs) {}

    bool at(int node, const Stem& member, const BasePoint& x, const FormulaPtr& f) {
        const RealizedNode& n = rs_.node(node);
        switch (f->op()) {
            case Op::Atom: {
                WorldMask mask = rs_.model().atom_mask(f->atom_name());
                return mask[static_cast<std::size_t>(n.label)];
            }
            case Op::Top:
                return true;
            case Op::Neg:
                return !at(node, member, x, f->lhs());
            case Op::And:
                return at(node, member, x, f->lhs()) && at(node, member, x, f->rhs());
            case Op::Univ: {
                for (int w = 0; w < rs_.model().frame().size(); ++w) {
                    int root = rs_.root_of(w);
                    const Stem& rep = rs_.node(root).rep_stem;
                    BasePoint y = make_point(SpaceId::Baire, rep, {0});
                    if (!at(root, rep, y, f->lhs())) return false;
                }
                return true;
            }
            case Op::CoDeriv: {
                if (!n.dissected) {
                    throw std::logic_error("derivative evaluation reached an unfolded leaf");
                }
                // x = member ^ t ^ 0^w; the c-th child slice reaches
                // into every neighborhood of x through the boundary
                // points member ^ t ^ 0^c ^ 1 ^ 0^w
                Stem u = member;
                for (std::size_t j = 0; j < n.block; ++j) u.push_back(point_at(x, member.size() + j));
                for (std::size_t c = 0; c < n.children.size(); ++c) {
                    Stem uc = u;
                    uc.insert(uc.end(), c, 0);
                    uc.push_back(1);
                    BasePoint y = make_point(SpaceId::Baire, uc, {0});
                    if (!at(n.children[c], uc, y, f->lhs())) return false;
                }
                return true;
            }
            default:
                throw std::invalid_argument(
                    "formula outside the universal-derivative fragment");
        }
    }

private:
    const RealizedStructure& rs_;
};

}  // namespace

bool eval_realized(const RealizedStructure& rs, const FormulaPtr& f, const BasePoint& x) {
    Fragment frag = classify(f);
    if (frag.uses_box || frag.uses_diff || frag.uses_count || frag.uses_tangle) {
        throw std::invalid_argument("formula outside the universal-derivative fragment");
    }
    RealizedStructure::Location loc = rs.locate(x);
    if (frag.modal_depth + loc.level > rs.depth()) {
        throw std::invalid_argument("modal depth exceeds the unfolding budget");
    }
    return RealizedEval(rs).at(loc.node, loc.member, x, f);
}

}  // namespace topomodal
