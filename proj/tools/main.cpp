// Command-line front end.  Every subcommand is a thin wrapper over the
// library: files are read through the JSON layer, results go to stdout
// either as short human-readable lines or, with --json, as a single
// JSON document.
//
// Exit codes: 0 success (and "true" for membership/satisfaction
// queries), 1 a checked property failed or a queried truth value is
// false, 2 usage errors or malformed input.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "topomodal/alexandrov.hpp"
#include "topomodal/foltrans.hpp"
#include "topomodal/formula.hpp"
#include "topomodal/hilbert.hpp"
#include "topomodal/io.hpp"
#include "topomodal/kripke.hpp"
#include "topomodal/realize.hpp"
#include "topomodal/region.hpp"
#include "topomodal/witness.hpp"

using namespace topomodal;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "010" (one digit per symbol) or "0,1,12" (comma separated).
Stem parse_stem_text(const std::string& text) {
    Stem out;
    if (text.empty()) return out;
    if (text.find(',') != std::string::npos) {
        std::istringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            unsigned long v = std::stoul(item, &used);
            if (used != item.size()) throw std::invalid_argument("bad stem symbol: " + item);
            out.push_back(static_cast<Sym>(v));
        }
    } else {
        for (char c : text) {
            if (c < '0' || c > '9') throw std::invalid_argument("bad stem digit: " + text);
            out.push_back(static_cast<Sym>(c - '0'));
        }
    }
    return out;
}

// "PREFIX:PERIOD", each side a stem literal; ":1" is the all-ones point.
BasePoint parse_point_text(SpaceId space, const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("point literal must look like PREFIX:PERIOD");
    return make_point(space, parse_stem_text(text.substr(0, colon)),
                      parse_stem_text(text.substr(colon + 1)));
}

SpaceId parse_space_name(const std::string& s) {
    if (s == "cantor") return SpaceId::Cantor;
    if (s == "baire") return SpaceId::Baire;
    throw std::invalid_argument("space must be cantor or baire");
}

json stem_json(const Stem& s) {
    json arr = json::array();
    for (Sym x : s) arr.push_back(x);
    return arr;
}

std::string stem_text(const Stem& s) {
    bool wide = false;
    for (Sym x : s) wide = wide || x > 9;
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (wide && i) out.push_back(',');
        out += std::to_string(s[i]);
    }
    return out.empty() ? "(empty)" : out;
}

void print_doc(const json& j) { std::cout << j.dump(2) << "\n"; }

// ── parse ────────────────────────────────────────────────────────

int run_parse(const std::string& formula, bool as_json) {
    FormulaPtr f = parse(formula);
    Fragment fr = classify(f);
    if (as_json) {
        json j;
        j["formula"] = render(f);
        j["modal_depth"] = fr.modal_depth;
        j["uses"] = {{"box", fr.uses_box},     {"coderiv", fr.uses_coderiv},
                     {"tangle", fr.uses_tangle}, {"univ", fr.uses_univ},
                     {"diff", fr.uses_diff},   {"count", fr.uses_count}};
        j["tree"] = dump_tree(f);
        print_doc(j);
    } else {
        std::cout << render(f) << "\n" << dump_tree(f);
    }
    return 0;
}

// ── model evaluation ─────────────────────────────────────────────

int run_eval_kripke(const std::string& model_path, const std::string& formula,
                    const std::string& world, bool as_json) {
    KripkeModel m = kripke_model_from_json(slurp(model_path));
    WorldMask mask = eval_kripke(m, parse(formula));
    std::vector<std::string> names;
    for (int i = 0; i < m.frame().size(); ++i)
        if (mask[static_cast<std::size_t>(i)]) names.push_back(m.frame().world(i));
    if (!world.empty()) {
        int wi = m.frame().index_of(world);
        if (wi < 0) throw std::invalid_argument("unknown world " + world);
        bool t = mask[static_cast<std::size_t>(wi)];
        if (as_json)
            print_doc(json{{"world", world}, {"true", t}});
        else
            std::cout << (t ? "true" : "false") << "\n";
        return t ? 0 : 1;
    }
    if (as_json) {
        print_doc(json{{"true_at", names}});
    } else {
        std::cout << "true at:";
        for (const auto& n : names) std::cout << " " << n;
        if (names.empty()) std::cout << " (none)";
        std::cout << "\n";
    }
    return 0;
}

int run_eval_topo(const std::string& model_path, const std::string& formula,
                  const std::string& point, bool as_json) {
    FiniteModel m = finite_model_from_json(slurp(model_path));
    PointSet mask = eval_finite_topo(m, parse(formula));
    auto names = m.space.names_of(mask);
    if (!point.empty()) {
        int pi = m.space.index_of(point);
        if (pi < 0) throw std::invalid_argument("unknown point " + point);
        bool t = (mask >> pi) & 1;
        if (as_json)
            print_doc(json{{"point", point}, {"true", t}});
        else
            std::cout << (t ? "true" : "false") << "\n";
        return t ? 0 : 1;
    }
    if (as_json) {
        print_doc(json{{"true_at", names}});
    } else {
        std::cout << "true at:";
        for (const auto& n : names) std::cout << " " << n;
        if (names.empty()) std::cout << " (none)";
        std::cout << "\n";
    }
    return 0;
}

int run_eval_region(const std::string& model_path, const std::string& space_flag,
                    const std::string& formula, const std::string& point, bool as_json) {
    SymbolicModel m = symbolic_model_from_json(slurp(model_path));
    if (!space_flag.empty() && parse_space_name(space_flag) != m.space)
        throw std::invalid_argument("--space disagrees with the model file");
    Region r = eval_symbolic(m, parse(formula));
    if (!point.empty()) {
        BasePoint x = parse_point_text(m.space, point);
        bool t = r.contains(x);
        if (as_json)
            print_doc(json{{"point", point}, {"true", t}});
        else
            std::cout << (t ? "true" : "false") << "\n";
        return t ? 0 : 1;
    }
    Cardinality card = region_cardinality(r);
    json jc;
    switch (card.kind) {
        case Cardinality::Kind::Empty: jc = {{"kind", "empty"}}; break;
        case Cardinality::Kind::Finite: jc = {{"kind", "finite"}, {"count", card.count}}; break;
        case Cardinality::Kind::Infinite: jc = {{"kind", "infinite"}}; break;
    }
    if (as_json) {
        json j;
        j["region"] = json::parse(region_to_json(r));
        j["empty"] = r.is_empty();
        j["full"] = r.is_full();
        j["cardinality"] = jc;
        print_doc(j);
    } else {
        std::cout << "region: " << region_to_json(r) << "\n";
        std::cout << "empty: " << (r.is_empty() ? "yes" : "no")
                  << "  full: " << (r.is_full() ? "yes" : "no") << "  cardinality: ";
        if (card.kind == Cardinality::Kind::Finite)
            std::cout << card.count << "\n";
        else
            std::cout << (card.kind == Cardinality::Kind::Empty ? "0" : "infinite") << "\n";
    }
    return 0;
}

// ── realization and dissection ───────────────────────────────────

int run_realize(const std::string& model_path, const std::string& root, int depth,
                const std::string& out_path, bool as_json) {
    KripkeModel m = kripke_model_from_json(slurp(model_path));
    RealizedStructure rs = realize_model(m, root, depth);
    std::vector<std::string> issues = verify_realization(rs);
    std::string dump = realized_to_json(rs);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write " + out_path);
        out << dump << "\n";
    }
    if (as_json) {
        json j;
        j["nodes"] = rs.nodes().size();
        j["depth"] = rs.depth();
        j["issues"] = issues;
        j["structure"] = json::parse(dump);
        print_doc(j);
    } else {
        std::cout << "realized " << rs.nodes().size() << " nodes to depth " << rs.depth()
                  << " (root " << root << ")\n";
        for (const auto& s : issues) std::cout << "issue: " << s << "\n";
        std::cout << "verification: " << (issues.empty() ? "clean" : "violated") << "\n";
    }
    return issues.empty() ? 0 : 1;
}

int run_dissect(const std::string& stem, int pieces, bool countable, const std::string& eps,
                bool as_json) {
    if (countable && pieces > 0)
        throw std::invalid_argument("--pieces and --countable exclude each other");
    std::optional<std::uint32_t> want;
    if (!countable) want = static_cast<std::uint32_t>(pieces > 0 ? pieces : 2);
    Stem s = parse_stem_text(stem);
    Dissection d = dissect_cylinder(s, want, parse_dyadic(eps));
    std::size_t shown = want ? std::min<std::size_t>(*want, 8) : 5;
    SchemeRegion base = SchemeRegion::cylinder(s);
    std::uint32_t sep = static_cast<std::uint32_t>(base.min_member_length()) + d.block;
    if (as_json) {
        json j;
        j["block"] = d.block;
        j["modulus"] = d.modulus;
        j["separation_exponent"] = sep;
        j["boundary_stem"] = stem_json(d.boundary.min_member_stem());
        json jp = json::array();
        for (std::size_t i = 0; i < shown; ++i)
            jp.push_back(stem_json(d.piece(static_cast<std::uint32_t>(i)).min_member_stem()));
        j["piece_stems"] = jp;
        print_doc(j);
    } else {
        std::cout << "block: " << d.block << "  modulus: " << d.modulus
                  << (d.modulus == 0 ? " (countably many pieces)" : "") << "\n";
        std::cout << "boundary stem: " << stem_text(d.boundary.min_member_stem())
                  << "  (points 2^-" << sep << " apart)\n";
        for (std::size_t i = 0; i < shown; ++i)
            std::cout << "piece " << i << " stem: "
                      << stem_text(d.piece(static_cast<std::uint32_t>(i)).min_member_stem()) << "\n";
    }
    return 0;
}

// ── witness families ─────────────────────────────────────────────

int run_witness_tangle(int n, bool as_json) {
    TangleWitness w = witness_tangle(n);
    bool ok = true;
    for (const FormulaPtr& f : w.sigma) ok = ok && eval_kripke_at(w.model, f, w.designated);
    if (as_json) {
        json j;
        j["n"] = n;
        json sig = json::array();
        for (const FormulaPtr& f : w.sigma) sig.push_back(render(f));
        j["sigma"] = sig;
        j["model"] = json::parse(kripke_model_to_json(w.model));
        j["designated"] = w.designated;
        j["satisfied"] = ok;
        print_doc(j);
    } else {
        for (const FormulaPtr& f : w.sigma) std::cout << render(f) << "\n";
        std::cout << "model: " << kripke_model_to_json(w.model) << "\n";
        std::cout << "satisfied at " << w.designated << ": " << (ok ? "true" : "false") << "\n";
    }
    return ok ? 0 : 1;
}

int run_witness_deriv(int n, bool as_json) {
    DerivativeWitness w = witness_derivative(n);
    bool ok = true;
    for (const FormulaPtr& f : w.sigma) ok = ok && eval_symbolic(w.model, f).is_full();
    if (as_json) {
        json j;
        j["n"] = n;
        json sig = json::array();
        for (const FormulaPtr& f : w.sigma) sig.push_back(render(f));
        j["sigma"] = sig;
        j["model"] = json::parse(symbolic_model_to_json(w.model));
        j["globally_true"] = ok;
        print_doc(j);
    } else {
        for (const FormulaPtr& f : w.sigma) std::cout << render(f) << "\n";
        std::cout << "model: " << symbolic_model_to_json(w.model) << "\n";
        std::cout << "globally true: " << (ok ? "yes" : "no") << "\n";
    }
    return ok ? 0 : 1;
}

// ── proof checking ───────────────────────────────────────────────

int run_check_proof(const std::string& file, const std::string& system_flag, bool as_json) {
    json j = json::parse(slurp(file), nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("malformed JSON in " + file);

    std::string sys_name = system_flag;
    if (sys_name.empty() && j.is_object() && j.contains("system"))
        sys_name = j.at("system").get<std::string>();
    if (sys_name.empty())
        throw std::invalid_argument("no \"system\" in the file and no --system flag");
    auto sid = system_by_name(sys_name);
    if (!sid) throw std::invalid_argument("unknown system " + sys_name);
    const System& sys = system(*sid);

    struct Item {
        std::string name;
        std::vector<FormulaPtr> premises;
        Proof proof;
    };
    auto load_item = [](const json& e, const std::string& fallback) {
        Item it;
        it.name = e.contains("name") ? e.at("name").get<std::string>() : fallback;
        if (e.contains("premises"))
            for (const json& p : e.at("premises")) it.premises.push_back(parse(p.get<std::string>()));
        if (!e.contains("proof")) throw std::invalid_argument("entry lacks a \"proof\" array");
        it.proof = proof_from_json(e.at("proof").dump());
        return it;
    };

    std::vector<Item> items;
    if (j.is_array()) {
        Item it;
        it.name = "proof";
        it.proof = proof_from_json(j.dump());
        items.push_back(std::move(it));
    } else if (j.contains("proofs")) {
        int i = 0;
        for (const json& e : j.at("proofs"))
            items.push_back(load_item(e, "proof-" + std::to_string(++i)));
    } else {
        items.push_back(load_item(j, "proof"));
    }

    bool all_ok = true;
    json report = json::array();
    for (const Item& it : items) {
        Verdict v = check_proof(sys, it.premises, it.proof);
        all_ok = all_ok && v.accepted;
        if (as_json) {
            json r;
            r["name"] = it.name;
            r["accepted"] = v.accepted;
            if (!v.accepted) {
                r["step"] = v.step;
                r["reason"] = v.reason;
            }
            report.push_back(r);
        } else if (v.accepted) {
            std::cout << it.name << ": accepted\n";
        } else {
            std::cout << it.name << ": rejected at step " << v.step << ": " << v.reason << "\n";
        }
    }
    if (as_json) print_doc(json{{"system", sys.name}, {"results", report}, {"all_accepted", all_ok}});
    return all_ok ? 0 : 1;
}

// ── first-order side ─────────────────────────────────────────────

int run_translate(const std::string& formula, const std::string& var, bool as_json) {
    FormulaPtr f = parse(formula);
    FOLPtr g = standard_translate(f, var);
    if (as_json) {
        json j;
        j["formula"] = render(f);
        j["variable"] = var;
        j["translation"] = fol_str(g);
        j["free_points"] = fol_free_points(g);
        print_doc(j);
    } else {
        std::cout << fol_str(g) << "\n";
    }
    return 0;
}

std::vector<std::vector<FormulaPtr>> psi_from_flags(const std::vector<std::string>& groups,
                                                    const std::string& file) {
    std::vector<std::vector<FormulaPtr>> out;
    if (!file.empty()) {
        json j = json::parse(slurp(file), nullptr, false);
        if (j.is_discarded() || !j.is_array())
            throw std::invalid_argument("--psi-file must hold an array of formula-string arrays");
        for (const json& fam : j) {
            std::vector<FormulaPtr> fs;
            for (const json& s : fam) fs.push_back(parse(s.get<std::string>()));
            out.push_back(std::move(fs));
        }
    }
    for (const std::string& g : groups) {
        std::vector<FormulaPtr> fs;
        std::istringstream ss(g);
        std::string item;
        while (std::getline(ss, item, ';'))
            if (!item.empty()) fs.push_back(parse(item));
        out.push_back(std::move(fs));
    }
    return out;
}

int run_emit_tgood(const std::vector<std::string>& psi_groups, const std::string& psi_file,
                   const std::vector<std::string>& sigma_texts, bool as_json) {
    auto psi = psi_from_flags(psi_groups, psi_file);
    std::vector<FormulaPtr> sigma;
    for (const std::string& s : sigma_texts) sigma.push_back(parse(s));
    std::string text = emit_tgood(psi, sigma);
    if (as_json) {
        json sentences = json::array();
        for (const FOLPtr& g : parse_theory(text)) sentences.push_back(fol_str(g));
        print_doc(json{{"sentences", sentences}});
    } else {
        std::cout << text;
    }
    return 0;
}

int run_check_goodness(const std::string& structure_path, const std::string& model_path,
                       const std::vector<std::string>& psi_groups, const std::string& psi_file,
                       int samples, unsigned seed, bool as_json) {
    if (structure_path.empty() == model_path.empty())
        throw std::invalid_argument("provide exactly one of --structure or --model");
    auto psi = psi_from_flags(psi_groups, psi_file);
    GoodnessReport rep;
    if (!structure_path.empty()) {
        rep = check_goodness(lstructure_from_json(slurp(structure_path)), psi);
    } else {
        std::mt19937 rng(seed);
        rep = check_goodness(symbolic_model_from_json(slurp(model_path)), psi, samples, rng);
    }
    auto clause_json = [](const ClauseCheck& c) {
        json j{{"holds", c.holds}, {"checked", c.checked}};
        if (!c.note.empty()) j["note"] = c.note;
        return j;
    };
    auto clause_line = [](const std::string& name, const ClauseCheck& c) {
        std::cout << name << ": " << (c.holds ? "ok" : "FAILED") << " (" << c.checked
                  << " checked)";
        if (!c.note.empty()) std::cout << "  [" << c.note << "]";
        std::cout << "\n";
    };
    if (as_json) {
        json j;
        j["atomless"] = clause_json(rep.atomless);
        j["representation"] = clause_json(rep.representation);
        j["extensionality"] = clause_json(rep.extensionality);
        j["separation"] = clause_json(rep.separation);
        json refs = json::array();
        for (const ClauseCheck& c : rep.refinement) refs.push_back(clause_json(c));
        j["refinement"] = refs;
        j["good"] = rep.good();
        print_doc(j);
    } else {
        clause_line("atomless", rep.atomless);
        clause_line("representation", rep.representation);
        clause_line("extensionality", rep.extensionality);
        clause_line("separation", rep.separation);
        for (std::size_t i = 0; i < rep.refinement.size(); ++i)
            clause_line("refinement[" + std::to_string(i) + "]", rep.refinement[i]);
        std::cout << "good: " << (rep.good() ? "yes" : "no") << "\n";
    }
    return rep.good() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modal-logic workbench: Kripke and topological semantics, symbolic regions,"
                 " realization, Hilbert proofs, first-order translation"};
    app.require_subcommand(1);
    int rc = 0;

    std::string formula, model, world, point, space, out_path, var = "x";
    std::string proof_file, system_flag, structure_path, stem, eps = "1/2";
    std::vector<std::string> psi_groups, sigma_texts;
    std::string psi_file;
    int depth = 0, pieces = 0, n = 0, samples = 50;
    unsigned seed = 12345;
    bool as_json = false, countable = false;
    app.add_flag("--json", as_json, "emit a JSON document instead of text lines");

    auto* c_parse = app.add_subcommand("parse", "parse a formula and dump its tree");
    c_parse->add_option("--formula", formula, "formula text")->required();
    c_parse->callback([&] { rc = run_parse(formula, as_json); });

    auto* c_ek = app.add_subcommand("eval-kripke", "evaluate a formula on a Kripke model");
    c_ek->add_option("--model", model, "model JSON file")->required();
    c_ek->add_option("--formula", formula, "formula text")->required();
    c_ek->add_option("--world", world, "query truth at this world (exit 0/1)");
    c_ek->callback([&] { rc = run_eval_kripke(model, formula, world, as_json); });

    auto* c_et = app.add_subcommand("eval-topo", "evaluate a formula on a finite space");
    c_et->add_option("--model", model, "model JSON file")->required();
    c_et->add_option("--formula", formula, "formula text")->required();
    c_et->add_option("--point", point, "query truth at this point (exit 0/1)");
    c_et->callback([&] { rc = run_eval_topo(model, formula, point, as_json); });

    auto* c_er = app.add_subcommand("eval-region", "evaluate a formula on a symbolic model");
    c_er->add_option("--model", model, "model JSON file")->required();
    c_er->add_option("--formula", formula, "formula text")->required();
    c_er->add_option("--space", space, "cantor|baire, checked against the model");
    c_er->add_option("--point", point, "PREFIX:PERIOD membership query (exit 0/1)");
    c_er->callback([&] { rc = run_eval_region(model, space, formula, point, as_json); });

    auto* c_rz = app.add_subcommand("realize", "unfold a Kripke model into scheme regions");
    c_rz->add_option("--model", model, "model JSON file")->required();
    c_rz->add_option("--root", world, "root world")->required();
    c_rz->add_option("--depth", depth, "unfolding depth")->required();
    c_rz->add_option("--out", out_path, "write the structure dump to this file");
    c_rz->callback([&] { rc = run_realize(model, world, depth, out_path, as_json); });

    auto* c_ds = app.add_subcommand("dissect", "dissect a cylinder into slices and a boundary");
    c_ds->add_option("--stem", stem, "cylinder stem, digits or comma separated");
    c_ds->add_option("--pieces", pieces, "number of slices (default 2)");
    c_ds->add_flag("--countable", countable, "countably many slices instead");
    c_ds->add_option("--eps", eps, "net fineness, a dyadic like 1/8");
    c_ds->callback([&] { rc = run_dissect(stem, pieces, countable, eps, as_json); });

    auto* c_wit = app.add_subcommand("witness", "parametric witness families");
    c_wit->require_subcommand(1);
    auto* c_wt = c_wit->add_subcommand("tangle", "finite satisfiability stage against tangle");
    c_wt->add_option("-n,--n", n, "stage index")->required();
    c_wt->callback([&] { rc = run_witness_tangle(n, as_json); });
    auto* c_wd = c_wit->add_subcommand("deriv", "cantor-space stage against the derivative");
    c_wd->add_option("-n,--n", n, "stage index")->required();
    c_wd->callback([&] { rc = run_witness_deriv(n, as_json); });

    auto* c_cp = app.add_subcommand("check-proof", "check Hilbert proofs from a JSON file");
    c_cp->add_option("--file", proof_file, "proof JSON file")->required();
    c_cp->add_option("--system", system_flag, "system name, overrides the file");
    c_cp->callback([&] { rc = run_check_proof(proof_file, system_flag, as_json); });

    auto* c_tr = app.add_subcommand("translate", "standard translation to two-sorted FOL");
    c_tr->add_option("--formula", formula, "formula text")->required();
    c_tr->add_option("--var", var, "free point variable (default x)");
    c_tr->callback([&] { rc = run_translate(formula, var, as_json); });

    auto* c_eg = app.add_subcommand("emit-tgood", "emit the theory of good structures");
    c_eg->add_option("--psi", psi_groups, "formula family, members separated by ;");
    c_eg->add_option("--psi-file", psi_file, "JSON array of formula-string arrays");
    c_eg->add_option("--sigma", sigma_texts, "formula to assert at the point constant");
    c_eg->callback([&] { rc = run_emit_tgood(psi_groups, psi_file, sigma_texts, as_json); });

    auto* c_cg = app.add_subcommand("check-goodness", "check the goodness clauses");
    c_cg->add_option("--structure", structure_path, "L-structure JSON file");
    c_cg->add_option("--model", model, "symbolic cantor model JSON file");
    c_cg->add_option("--psi", psi_groups, "formula family, members separated by ;");
    c_cg->add_option("--psi-file", psi_file, "JSON array of formula-string arrays");
    c_cg->add_option("--samples", samples, "random instances per clause (default 50)");
    c_cg->add_option("--seed", seed, "seed for the randomized sweeps");
    c_cg->callback([&] {
        rc = run_check_goodness(structure_path, model, psi_groups, psi_file, samples, seed,
                                as_json);
    });

    // Let trailing global flags (--json) reach the parent parser.
    for (CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; })) {
        s->fallthrough();
        for (CLI::App* t : s->get_subcommands([](const CLI::App*) { return true; }))
            t->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
