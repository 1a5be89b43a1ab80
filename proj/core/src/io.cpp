#include "topomodal/io.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace topomodal {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("json: " + msg);
}

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("malformed document");
    return j;
}

const json& field(const json& j, const char* key) {
    if (!j.is_object()) fail(std::string("expected an object carrying \"") + key + "\"");
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
    return *it;
}

std::string as_string(const json& j, const char* what) {
    if (!j.is_string()) fail(std::string(what) + " must be a string");
    return j.get<std::string>();
}

int as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
    return j.get<int>();
}

std::vector<std::string> as_string_list(const json& j, const char* what) {
    if (!j.is_array()) fail(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const json& e : j) out.push_back(as_string(e, what));
    return out;
}

std::vector<std::pair<std::string, std::string>> as_pair_list(const json& j, const char* what) {
    if (!j.is_array()) fail(std::string(what) + " must be an array of pairs");
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(j.size());
    for (const json& e : j) {
        if (!e.is_array() || e.size() != 2)
            fail(std::string("each ") + what + " entry must be a two-element array");
        out.emplace_back(as_string(e[0], what), as_string(e[1], what));
    }
    return out;
}

std::map<std::string, std::set<std::string>> valuation_sets(const json& j) {
    std::map<std::string, std::set<std::string>> out;
    if (!j.is_object()) fail("\"valuation\" must be an object");
    for (const auto& [atom, names] : j.items()) {
        auto list = as_string_list(names, "\"valuation\"");
        out.emplace(atom, std::set<std::string>(list.begin(), list.end()));
    }
    return out;
}

// ── stems and points ─────────────────────────────────────────────

const char* space_name(SpaceId s) { return s == SpaceId::Cantor ? "cantor" : "baire"; }

SpaceId space_from_json(const json& j) {
    std::string s = as_string(j, "\"space\"");
    if (s == "cantor") return SpaceId::Cantor;
    if (s == "baire") return SpaceId::Baire;
    fail("\"space\" must be \"cantor\" or \"baire\"");
}

Stem stem_from_json(const json& j, SpaceId space) {
    Stem out;
    if (j.is_string()) {
        for (char c : j.get<std::string>()) {
            if (c < '0' || c > '9') fail("stem strings may contain digits only");
            out.push_back(static_cast<Sym>(c - '0'));
        }
    } else if (j.is_array()) {
        for (const json& e : j) {
            if (!e.is_number_integer()) fail("stem entries must be integers");
            auto v = e.get<long long>();
            if (v < 0 || v > 0xffffffffLL) fail("stem symbol out of range");
            out.push_back(static_cast<Sym>(v));
        }
    } else {
        fail("a stem must be a digit string or an array of symbols");
    }
    if (space == SpaceId::Cantor)
        for (Sym s : out)
            if (s > 1) fail("cantor stems use symbols 0 and 1 only");
    return out;
}

json stem_to_json(const Stem& s, SpaceId space) {
    if (space == SpaceId::Cantor) {
        std::string bits;
        for (Sym x : s) bits.push_back(static_cast<char>('0' + x));
        return json(bits);
    }
    json arr = json::array();
    for (Sym x : s) arr.push_back(x);
    return arr;
}

BasePoint point_from_json(const json& j, SpaceId space) {
    return make_point(space, stem_from_json(field(j, "prefix"), space),
                      stem_from_json(field(j, "period"), space));
}

json point_to_json(const BasePoint& p) {
    json j;
    j["prefix"] = stem_to_json(p.prefix, p.space);
    j["period"] = stem_to_json(p.period, p.space);
    return j;
}

// Region payload without the "space" key; used both standalone and
// inside symbolic-model valuations (which fix the space externally).
Region region_from_body(const json& j, SpaceId space) {
    std::vector<Stem> cylinders;
    if (j.contains("cylinders")) {
        const json& jc = j.at("cylinders");
        if (!jc.is_array()) fail("\"cylinders\" must be an array of stems");
        for (const json& e : jc) cylinders.push_back(stem_from_json(e, space));
    }
    std::vector<std::pair<Stem, std::vector<Stem>>> carved;
    if (j.contains("carved")) {
        const json& jc = j.at("carved");
        if (!jc.is_array()) fail("\"carved\" must be an array");
        for (const json& e : jc) {
            if (!e.is_array() || e.size() != 2)
                fail("each carved entry must be [outer, inner] or [outer, [inners]]");
            Stem outer = stem_from_json(e[0], space);
            std::vector<Stem> inners;
            const json& in = e[1];
            // Second slot: one stem, or a list of stems.  An array
            // whose first element is an integer is a single baire
            // stem; an empty array is an empty list (no carving).
            if (in.is_string()) {
                inners.push_back(stem_from_json(in, space));
            } else if (in.is_array()) {
                if (!in.empty() && in[0].is_number_integer()) {
                    inners.push_back(stem_from_json(in, space));
                } else {
                    for (const json& s : in) inners.push_back(stem_from_json(s, space));
                }
            } else {
                fail("carved inners must be a stem or an array of stems");
            }
            carved.emplace_back(std::move(outer), std::move(inners));
        }
    }
    std::vector<BasePoint> plus, minus;
    if (j.contains("plus")) {
        const json& jp = j.at("plus");
        if (!jp.is_array()) fail("\"plus\" must be an array of points");
        for (const json& e : jp) plus.push_back(point_from_json(e, space));
    }
    if (j.contains("minus")) {
        const json& jm = j.at("minus");
        if (!jm.is_array()) fail("\"minus\" must be an array of points");
        for (const json& e : jm) minus.push_back(point_from_json(e, space));
    }
    return Region::assemble(space, cylinders, carved, plus, minus);
}

json region_body_to_json(const Region& r) {
    json j = json::object();
    json cylinders = json::array();
    json carved = json::array();
    for (const Region::Cell& c : r.cells()) {
        if (c.excluded.empty()) {
            cylinders.push_back(stem_to_json(c.stem, r.space()));
        } else {
            json inners = json::array();
            for (Sym s : c.excluded) {
                Stem t = c.stem;
                t.push_back(s);
                inners.push_back(stem_to_json(t, r.space()));
            }
            carved.push_back(json::array({stem_to_json(c.stem, r.space()), inners}));
        }
    }
    if (!cylinders.empty()) j["cylinders"] = cylinders;
    if (!carved.empty()) j["carved"] = carved;
    if (!r.plus_points().empty()) {
        json jp = json::array();
        for (const BasePoint& p : r.plus_points()) jp.push_back(point_to_json(p));
        j["plus"] = jp;
    }
    if (!r.minus_points().empty()) {
        json jm = json::array();
        for (const BasePoint& p : r.minus_points()) jm.push_back(point_to_json(p));
        j["minus"] = jm;
    }
    return j;
}

FormulaPtr formula_from_json(const json& j, const char* what) {
    std::string text = as_string(j, what);
    try {
        return parse(text);
    } catch (const ParseError& e) {
        fail(std::string(what) + " holds an unparsable formula: " + e.what());
    }
}

std::map<std::string, FormulaPtr> formula_map_from_json(const json& j, const char* what) {
    if (!j.is_object()) fail(std::string(what) + " must map atoms to formula strings");
    std::map<std::string, FormulaPtr> out;
    for (const auto& [atom, text] : j.items()) out.emplace(atom, formula_from_json(text, what));
    return out;
}

std::uint64_t mask_from_indices(const json& j, int limit, const char* what) {
    if (!j.is_array()) fail(std::string(what) + " must be an array of indices");
    std::uint64_t mask = 0;
    for (const json& e : j) {
        int i = as_int(e, what);
        if (i < 0 || i >= limit) fail(std::string(what) + " index out of range");
        mask |= std::uint64_t{1} << i;
    }
    return mask;
}

json indices_from_mask(std::uint64_t mask) {
    json arr = json::array();
    for (int i = 0; i < 64; ++i)
        if (mask >> i & 1) arr.push_back(i);
    return arr;
}

}  // namespace

// ── kripke models ────────────────────────────────────────────────

KripkeModel kripke_model_from_json(const std::string& text) {
    json j = parse_text(text);
    auto worlds = as_string_list(field(j, "worlds"), "\"worlds\"");
    auto edges = as_pair_list(field(j, "edges"), "\"edges\"");
    std::map<std::string, std::set<std::string>> val;
    if (j.contains("valuation")) val = valuation_sets(j.at("valuation"));
    return KripkeModel(KripkeFrame(std::move(worlds), edges), val);
}

std::string kripke_model_to_json(const KripkeModel& m) {
    json j;
    j["worlds"] = m.frame().worlds();
    json edges = json::array();
    for (const auto& [a, b] : m.frame().edge_list()) edges.push_back(json::array({a, b}));
    j["edges"] = edges;
    json val = json::object();
    for (const auto& [atom, mask] : m.valuation()) {
        json names = json::array();
        for (int i = 0; i < m.frame().size(); ++i)
            if (mask[static_cast<std::size_t>(i)]) names.push_back(m.frame().world(i));
        val[atom] = names;
    }
    j["valuation"] = val;
    return j.dump();
}

// ── finite topological models ────────────────────────────────────

FiniteModel finite_model_from_json(const std::string& text) {
    json j = parse_text(text);
    auto points = as_string_list(field(j, "points"), "\"points\"");
    FiniteSpace space = [&] {
        if (j.contains("opens")) {
            const json& jo = j.at("opens");
            if (!jo.is_array()) fail("\"opens\" must be an array of point lists");
            std::vector<std::vector<std::string>> family;
            for (const json& o : jo) family.push_back(as_string_list(o, "\"opens\""));
            return build_space_from_family(points, family);
        }
        if (j.contains("preorder"))
            return build_space_from_preorder(points, as_pair_list(j.at("preorder"), "\"preorder\""));
        fail("expected an \"opens\" or \"preorder\" field");
    }();
    std::map<std::string, std::vector<std::string>> val;
    if (j.contains("valuation")) {
        for (const auto& [atom, names] : valuation_sets(j.at("valuation")))
            val.emplace(atom, std::vector<std::string>(names.begin(), names.end()));
    }
    return FiniteModel(std::move(space), val);
}

std::string finite_model_to_json(const FiniteModel& m) {
    json j;
    j["points"] = m.space.points();
    json opens = json::array();
    for (PointSet o : m.space.opens()) opens.push_back(m.space.names_of(o));
    j["opens"] = opens;
    json val = json::object();
    for (const auto& [atom, mask] : m.h) val[atom] = m.space.names_of(mask);
    j["valuation"] = val;
    return j.dump();
}

// ── regions and symbolic models ──────────────────────────────────

Region region_from_json(const std::string& text) {
    json j = parse_text(text);
    return region_from_body(j, space_from_json(field(j, "space")));
}

std::string region_to_json(const Region& r) {
    json j = region_body_to_json(r);
    j["space"] = space_name(r.space());
    return j.dump();
}

SymbolicModel symbolic_model_from_json(const std::string& text) {
    json j = parse_text(text);
    SpaceId space = space_from_json(field(j, "space"));
    std::map<std::string, Region> h;
    if (j.contains("valuation")) {
        const json& jv = j.at("valuation");
        if (!jv.is_object()) fail("\"valuation\" must be an object");
        for (const auto& [atom, body] : jv.items()) {
            if (!body.is_object()) fail("valuation entries must be region objects");
            if (body.contains("space") && space_from_json(body.at("space")) != space)
                fail("valuation region disagrees with the model space");
            h.emplace(atom, region_from_body(body, space));
        }
    }
    return SymbolicModel(space, std::move(h));
}

std::string symbolic_model_to_json(const SymbolicModel& m) {
    json j;
    j["space"] = space_name(m.space);
    json val = json::object();
    for (const auto& [atom, region] : m.h) val[atom] = region_body_to_json(region);
    j["valuation"] = val;
    return j.dump();
}

// ── proofs ───────────────────────────────────────────────────────

Proof proof_from_json(const std::string& text) {
    json j = parse_text(text);
    if (!j.is_array()) fail("a proof must be an array of steps");
    Proof pf;
    for (const json& js : j) {
        ProofStep st;
        st.formula = formula_from_json(field(js, "formula"), "\"formula\"");
        const json& by = field(js, "by");
        if (!by.is_object()) fail("\"by\" must be an object");
        if (by.contains("axiom")) {
            st.by = ProofStep::By::Axiom;
            st.axiom = as_string(by.at("axiom"), "\"axiom\"");
            if (by.contains("subst")) st.subst_map = formula_map_from_json(by.at("subst"), "\"subst\"");
        } else if (by.contains("premise")) {
            st.by = ProofStep::By::Premise;
            st.premise_index = as_int(by.at("premise"), "\"premise\"");
        } else if (by.contains("mp")) {
            const json& mp = by.at("mp");
            if (!mp.is_array() || mp.size() != 2) fail("\"mp\" must be [antecedent, implication]");
            st.by = ProofStep::By::MP;
            st.from = as_int(mp[0], "\"mp\"");
            st.from_imp = as_int(mp[1], "\"mp\"");
        } else if (by.contains("gen")) {
            st.by = ProofStep::By::Gen;
            st.from = as_int(by.at("gen"), "\"gen\"");
            auto mode = gen_mode_by_name(as_string(field(by, "mode"), "\"mode\""));
            if (!mode) fail("unknown generalisation mode");
            st.mode = *mode;
        } else if (by.contains("sub")) {
            st.by = ProofStep::By::Subst;
            st.from = as_int(by.at("sub"), "\"sub\"");
            st.subst_map = formula_map_from_json(field(by, "map"), "\"map\"");
        } else {
            fail("\"by\" must carry one of \"axiom\", \"premise\", \"mp\", \"gen\", \"sub\"");
        }
        pf.steps.push_back(std::move(st));
    }
    return pf;
}

std::string proof_to_json(const Proof& p) {
    json arr = json::array();
    for (const ProofStep& st : p.steps) {
        json js;
        js["formula"] = render(st.formula);
        json by = json::object();
        switch (st.by) {
            case ProofStep::By::Axiom: {
                by["axiom"] = st.axiom;
                if (st.subst_map) {
                    json sub = json::object();
                    for (const auto& [atom, f] : *st.subst_map) sub[atom] = render(f);
                    by["subst"] = sub;
                }
                break;
            }
            case ProofStep::By::Premise:
                by["premise"] = st.premise_index;
                break;
            case ProofStep::By::MP:
                by["mp"] = json::array({st.from, st.from_imp});
                break;
            case ProofStep::By::Gen:
                by["gen"] = st.from;
                by["mode"] = gen_mode_name(st.mode);
                break;
            case ProofStep::By::Subst: {
                by["sub"] = st.from;
                json sub = json::object();
                if (st.subst_map)
                    for (const auto& [atom, f] : *st.subst_map) sub[atom] = render(f);
                by["map"] = sub;
                break;
            }
        }
        js["by"] = by;
        arr.push_back(js);
    }
    return arr.dump();
}

// ── two-sorted structures ────────────────────────────────────────

LStructure lstructure_from_json(const std::string& text) {
    json j = parse_text(text);
    LStructure s;
    s.points = as_int(field(j, "points"), "\"points\"");
    if (s.points < 0 || s.points > 64) fail("\"points\" must lie in 0..64");
    const json& sets = field(j, "sets");
    if (!sets.is_array()) fail("\"sets\" must be an array of index arrays");
    for (const json& el : sets) s.membership.push_back(mask_from_indices(el, s.points, "\"sets\""));
    const int nb = s.size_sets();
    const json& plus = field(j, "plus");
    if (!plus.is_array() || static_cast<int>(plus.size()) != nb)
        fail("\"plus\" must be an array with one row per set element");
    for (const json& row : plus) {
        if (!row.is_array() || static_cast<int>(row.size()) != nb)
            fail("each \"plus\" row must list one entry per set element");
        std::vector<int> r;
        for (const json& e : row) {
            int v = as_int(e, "\"plus\"");
            if (v < 0 || v >= nb) fail("\"plus\" entry out of range");
            r.push_back(v);
        }
        s.plus_table.push_back(std::move(r));
    }
    const json& minus = field(j, "minus");
    if (!minus.is_array() || static_cast<int>(minus.size()) != nb)
        fail("\"minus\" must list one entry per set element");
    for (const json& e : minus) {
        int v = as_int(e, "\"minus\"");
        if (v < 0 || v >= nb) fail("\"minus\" entry out of range");
        s.minus_table.push_back(v);
    }
    s.zero = as_int(field(j, "zero"), "\"zero\"");
    s.one = as_int(field(j, "one"), "\"one\"");
    if (s.zero < 0 || s.zero >= nb || s.one < 0 || s.one >= nb)
        fail("\"zero\"/\"one\" out of range");
    if (j.contains("preds")) {
        const json& jp = j.at("preds");
        if (!jp.is_object()) fail("\"preds\" must map atoms to index arrays");
        for (const auto& [atom, el] : jp.items())
            s.preds.emplace(atom, mask_from_indices(el, s.points, "\"preds\""));
    }
    s.k = as_int(field(j, "k"), "\"k\"");
    if (s.k < 0 || (s.points > 0 && s.k >= s.points)) fail("\"k\" out of range");
    validate_lstructure(s);
    return s;
}

std::string lstructure_to_json(const LStructure& s) {
    json j;
    j["points"] = s.points;
    json sets = json::array();
    for (std::uint64_t mask : s.membership) sets.push_back(indices_from_mask(mask));
    j["sets"] = sets;
    j["plus"] = s.plus_table;
    j["minus"] = s.minus_table;
    j["zero"] = s.zero;
    j["one"] = s.one;
    json preds = json::object();
    for (const auto& [atom, mask] : s.preds) preds[atom] = indices_from_mask(mask);
    j["preds"] = preds;
    j["k"] = s.k;
    return j.dump();
}

// ── realized structures ──────────────────────────────────────────

std::string realized_to_json(const RealizedStructure& rs) {
    const KripkeFrame& fr = rs.model().frame();
    json j;
    j["root_world"] = fr.world(rs.root_world());
    j["depth"] = rs.depth();
    json roots = json::array();
    for (int w = 0; w < fr.size(); ++w) roots.push_back(rs.root_of(w));
    j["roots"] = roots;
    json nodes = json::array();
    for (const RealizedNode& n : rs.nodes()) {
        json jn;
        jn["stem"] = stem_to_json(n.rep_stem, SpaceId::Baire);
        jn["label"] = fr.world(n.label);
        jn["level"] = n.level;
        jn["parent"] = n.parent;
        jn["children"] = n.children;
        if (n.dissected) {
            json jb;
            jb["stem"] = stem_to_json(n.boundary.min_member_stem(), SpaceId::Baire);
            jb["depth"] = n.region.min_member_length() + n.block;
            jn["boundary"] = jb;
        }
        nodes.push_back(jn);
    }
    j["nodes"] = nodes;
    return j.dump();
}

}  // namespace topomodal
