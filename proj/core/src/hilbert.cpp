#include "topomodal/hilbert.hpp"

#include <algorithm>
#include <stdexcept>

namespace topomodal {

namespace {

std::set<Op> bool_ops() { return {Op::Atom, Op::Top, Op::Neg, Op::And}; }

std::set<Op> with(std::set<Op> base, std::initializer_list<Op> extra) {
    base.insert(extra.begin(), extra.end());
    return base;
}

System make_system(SystemId id, std::string name,
                   std::vector<std::pair<std::string, std::string>> axioms,
                   std::set<GenMode> gens, bool subst, std::set<Op> ops) {
    System s;
    s.id = id;
    s.name = std::move(name);
    for (auto& [axiom_name, text] : axioms) {
        s.axioms.push_back({axiom_name, parse(text)});
    }
    s.gen_modes = std::move(gens);
    s.allows_substitution = subst;
    s.ops = std::move(ops);
    return s;
}

std::vector<System> build_systems() {
    std::vector<System> out;
    out.push_back(make_system(
        SystemId::S4, "S4",
        {{"K", "[](phi -> psi) -> ([]phi -> []psi)"},
         {"T", "[]phi -> phi"},
         {"4", "[]phi -> [][]phi"}},
        {GenMode::Box}, false, with(bool_ops(), {Op::Box})));
    out.push_back(make_system(
        SystemId::KD4, "KD4",
        {{"K", "[d](phi -> psi) -> ([d]phi -> [d]psi)"},
         {"D", "<d>true"},
         {"4", "[d]phi -> [d][d]phi"}},
        {GenMode::D}, false, with(bool_ops(), {Op::CoDeriv})));
    out.push_back(make_system(
        SystemId::S4U, "S4U",
        {{"K", "[](phi -> psi) -> ([]phi -> []psi)"},
         {"T", "[]phi -> phi"},
         {"4", "[]phi -> [][]phi"},
         {"KA", "A(phi -> psi) -> (A phi -> A psi)"},
         {"U1", "A phi -> phi"},
         {"U2", "phi -> A E phi"},
         {"U3", "A phi -> A A phi"},
         {"U4", "A phi -> []phi"}},
        {GenMode::A, GenMode::Box}, false, with(bool_ops(), {Op::Box, Op::Univ})));
    out.push_back(make_system(
        SystemId::KD4U, "KD4U",
        {{"K", "[d](phi -> psi) -> ([d]phi -> [d]psi)"},
         {"D", "<d>true"},
         {"4", "[d]phi -> [d][d]phi"},
         {"KA", "A(phi -> psi) -> (A phi -> A psi)"},
         {"U1", "A phi -> phi"},
         {"U2", "phi -> A E phi"},
         {"U3", "A phi -> A A phi"},
         {"U4", "A phi -> [d]phi"}},
        {GenMode::A, GenMode::D}, false, with(bool_ops(), {Op::CoDeriv, Op::Univ})));
    out.push_back(make_system(
        SystemId::S4DT1S, "S4DT1S",
        {{"K", "[](phi -> psi) -> ([]phi -> []psi)"},
         {"T", "[]phi -> phi"},
         {"4", "[]phi -> [][]phi"},
         {"Kdiff", "[!=](phi -> psi) -> ([!=]phi -> [!=]psi)"},
         {"B", "phi -> [!=]<!=>phi"},
         {"A2", "(phi & [!=]phi) -> ([]phi & [!=][!=]phi)"},
         {"A3", "[!=]phi -> (<>phi & [!=][]phi)"}},
        {GenMode::Box, GenMode::Diff}, true, with(bool_ops(), {Op::Box, Op::DiffBox})));
    out.push_back(make_system(
        SystemId::DT1, "DT1",
        {{"K", "[d](phi -> psi) -> ([d]phi -> [d]psi)"},
         {"D", "<d>true"},
         {"4", "[d]phi -> [d][d]phi"},
         {"Kdiff", "[!=](phi -> psi) -> ([!=]phi -> [!=]psi)"},
         {"Ddiff", "<!=>true"},
         {"B", "phi -> [!=]<!=>phi"},
         {"P4", "<!=><!=>phi -> (phi | <!=>phi)"},
         {"Conn", "[!=]phi -> ([d]phi & [!=][d]phi)"}},
        {GenMode::D, GenMode::Diff}, false, with(bool_ops(), {Op::CoDeriv, Op::DiffBox})));
    return out;
}

// φ→ψ is stored as ~(φ & ~ψ); expose the two sides when f has that shape.
std::optional<std::pair<FormulaPtr, FormulaPtr>> imp_parts(const FormulaPtr& f) {
    if (f->op() != Op::Neg || f->lhs()->op() != Op::And) return std::nullopt;
    FormulaPtr conj = f->lhs();
    if (conj->rhs()->op() != Op::Neg) return std::nullopt;
    return std::make_pair(conj->lhs(), conj->rhs()->lhs());
}

bool op_allowed(const FormulaPtr& f, const std::set<Op>& ops) {
    if (!ops.count(f->op())) return false;
    switch (f->op()) {
        case Op::Atom:
        case Op::Top:
            return true;
        case Op::And:
            return op_allowed(f->lhs(), ops) && op_allowed(f->rhs(), ops);
        case Op::Tangle: {
            for (const auto& m : f->tangle_set()) {
                if (!op_allowed(m, ops)) return false;
            }
            return true;
        }
        default:
            return op_allowed(f->lhs(), ops);
    }
}

void collect_leaves(const FormulaPtr& f, std::vector<FormulaPtr>& leaves) {
    switch (f->op()) {
        case Op::Top:
            return;
        case Op::Neg:
            collect_leaves(f->lhs(), leaves);
            return;
        case Op::And:
            collect_leaves(f->lhs(), leaves);
            collect_leaves(f->rhs(), leaves);
            return;
        default:
            for (const auto& seen : leaves) {
                if (struct_eq(seen, f)) return;
            }
            leaves.push_back(f);
    }
}

bool eval_boolean(const FormulaPtr& f, const std::vector<FormulaPtr>& leaves,
                  std::uint32_t assignment) {
    switch (f->op()) {
        case Op::Top:
            return true;
        case Op::Neg:
            return !eval_boolean(f->lhs(), leaves, assignment);
        case Op::And:
            return eval_boolean(f->lhs(), leaves, assignment) &&
                   eval_boolean(f->rhs(), leaves, assignment);
        default:
            for (std::size_t i = 0; i < leaves.size(); ++i) {
                if (struct_eq(leaves[i], f)) return assignment & (1u << i);
            }
            throw std::logic_error("boolean leaf vanished");
    }
}

bool match_into(const FormulaPtr& schema, const FormulaPtr& f,
                std::map<std::string, FormulaPtr>& binding) {
    if (schema->op() == Op::Atom) {
        auto [it, fresh] = binding.emplace(schema->atom_name(), f);
        return fresh || struct_eq(it->second, f);
    }
    if (schema->op() != f->op()) return false;
    switch (schema->op()) {
        case Op::Top:
            return true;
        case Op::And:
            return match_into(schema->lhs(), f->lhs(), binding) &&
                   match_into(schema->rhs(), f->rhs(), binding);
        case Op::Count:
            return schema->count_bound() == f->count_bound() &&
                   match_into(schema->lhs(), f->lhs(), binding);
        case Op::Tangle: {
            const auto& ss = schema->tangle_set();
            const auto& fs = f->tangle_set();
            if (ss.size() != fs.size()) return false;
            for (std::size_t i = 0; i < ss.size(); ++i) {
                if (!match_into(ss[i], fs[i], binding)) return false;
            }
            return true;
        }
        default:
            return match_into(schema->lhs(), f->lhs(), binding);
    }
}

}  // namespace

std::string gen_mode_name(GenMode m) {
    switch (m) {
        case GenMode::A: return "A";
        case GenMode::Box: return "box";
        case GenMode::D: return "d";
        case GenMode::Diff: return "diff";
    }
    return "?";
}

std::optional<GenMode> gen_mode_by_name(const std::string& s) {
    if (s == "A") return GenMode::A;
    if (s == "box") return GenMode::Box;
    if (s == "d") return GenMode::D;
    if (s == "diff") return GenMode::Diff;
    return std::nullopt;
}

const std::vector<System>& all_systems() {
    static const std::vector<System> systems = build_systems();
    return systems;
}

const System& system(SystemId id) {
    for (const System& s : all_systems()) {
        if (s.id == id) return s;
    }
    throw std::logic_error("unknown system id");
}

std::optional<SystemId> system_by_name(const std::string& name) {
    for (const System& s : all_systems()) {
        if (s.name == name) return s.id;
    }
    return std::nullopt;
}

bool is_tautology(const FormulaPtr& f) {
    std::vector<FormulaPtr> leaves;
    collect_leaves(f, leaves);
    if (leaves.size() > 20) {
        throw std::length_error("too many distinct leaves for a truth table");
    }
    std::uint32_t total = std::uint32_t{1} << leaves.size();
    for (std::uint32_t a = 0; a < total; ++a) {
        if (!eval_boolean(f, leaves, a)) return false;
    }
    return true;
}

std::optional<std::map<std::string, FormulaPtr>> match_schema(const FormulaPtr& schema,
                                                              const FormulaPtr& f) {
    std::map<std::string, FormulaPtr> binding;
    if (match_into(schema, f, binding)) return binding;
    return std::nullopt;
}

std::optional<AxiomMatch> match_axiom(const System& sys, const FormulaPtr& f) {
    for (const AxiomSchema& ax : sys.axioms) {
        if (auto binding = match_schema(ax.schema, f)) {
            return AxiomMatch{ax.name, std::move(*binding)};
        }
    }
    try {
        if (is_tautology(f)) return AxiomMatch{"Taut", {}};
    } catch (const std::length_error&) {
        // too wide for the table; fall through to no-match
    }
    return std::nullopt;
}

Verdict check_proof(const System& sys, const std::vector<FormulaPtr>& premises, const Proof& pf) {
    auto fail = [](int step, std::string reason) {
        return Verdict{false, step, std::move(reason)};
    };
    if (pf.steps.empty()) return fail(0, "empty proof");

    std::vector<bool> tainted(pf.steps.size(), false);
    for (std::size_t i = 0; i < pf.steps.size(); ++i) {
        const ProofStep& st = pf.steps[i];
        int n = static_cast<int>(i) + 1;
        if (!st.formula) return fail(n, "missing formula");
        if (!op_allowed(st.formula, sys.ops)) {
            return fail(n, "operator outside the system's language");
        }
        auto earlier = [&](int ref) { return ref >= 1 && ref <= static_cast<int>(i); };
        switch (st.by) {
            case ProofStep::By::Premise: {
                if (st.premise_index < 1 ||
                    st.premise_index > static_cast<int>(premises.size())) {
                    return fail(n, "premise index out of range");
                }
                if (!struct_eq(st.formula,
                               premises[static_cast<std::size_t>(st.premise_index - 1)])) {
                    return fail(n, "premise mismatch");
                }
                tainted[i] = true;
                break;
            }
            case ProofStep::By::Axiom: {
                if (st.axiom == "Taut") {
                    bool ok = false;
                    try {
                        ok = is_tautology(st.formula);
                    } catch (const std::length_error&) {
                        return fail(n, "tautology check exceeds the table bound");
                    }
                    if (!ok) return fail(n, "not a tautology");
                    break;
                }
                const AxiomSchema* found = nullptr;
                for (const AxiomSchema& ax : sys.axioms) {
                    if (ax.name == st.axiom) {
                        found = &ax;
                        break;
                    }
                }
                if (!found) return fail(n, "unknown axiom '" + st.axiom + "'");
                if (st.subst_map) {
                    if (!struct_eq(substitute(found->schema, *st.subst_map), st.formula)) {
                        return fail(n, "axiom instance mismatch");
                    }
                } else if (!match_schema(found->schema, st.formula)) {
                    return fail(n, "axiom instance mismatch");
                }
                break;
            }
            case ProofStep::By::MP: {
                if (!earlier(st.from) || !earlier(st.from_imp)) {
                    return fail(n, "citation must point to an earlier step");
                }
                auto parts = imp_parts(pf.steps[static_cast<std::size_t>(st.from_imp - 1)].formula);
                if (!parts ||
                    !struct_eq(parts->first,
                               pf.steps[static_cast<std::size_t>(st.from - 1)].formula) ||
                    !struct_eq(parts->second, st.formula)) {
                    return fail(n, "modus ponens mismatch");
                }
                tainted[i] = tainted[static_cast<std::size_t>(st.from - 1)] ||
                             tainted[static_cast<std::size_t>(st.from_imp - 1)];
                break;
            }
            case ProofStep::By::Gen: {
                if (!sys.gen_modes.count(st.mode)) {
                    return fail(n, "generalisation mode not available here");
                }
                if (!earlier(st.from)) return fail(n, "citation must point to an earlier step");
                if (tainted[static_cast<std::size_t>(st.from - 1)]) {
                    return fail(n, "generalisation requires a premise-free step");
                }
                FormulaPtr src = pf.steps[static_cast<std::size_t>(st.from - 1)].formula;
                FormulaPtr want;
                switch (st.mode) {
                    case GenMode::A: want = make_univ(src); break;
                    case GenMode::Box: want = make_box(src); break;
                    case GenMode::D: want = make_coderiv(src); break;
                    case GenMode::Diff: want = make_diffbox(src); break;
                }
                if (!struct_eq(want, st.formula)) return fail(n, "generalisation mismatch");
                break;
            }
            case ProofStep::By::Subst: {
                if (!sys.allows_substitution) {
                    return fail(n, "substitution not available here");
                }
                if (!earlier(st.from)) return fail(n, "citation must point to an earlier step");
                if (tainted[static_cast<std::size_t>(st.from - 1)]) {
                    return fail(n, "substitution requires a premise-free step");
                }
                if (!st.subst_map) return fail(n, "substitution needs a map");
                FormulaPtr src = pf.steps[static_cast<std::size_t>(st.from - 1)].formula;
                if (!struct_eq(substitute(src, *st.subst_map), st.formula)) {
                    return fail(n, "substitution mismatch");
                }
                break;
            }
        }
    }
    return {true, 0, ""};
}

Verdict check_entailment_certificate(const System& sys, const std::vector<FormulaPtr>& sigma,
                                     const FormulaPtr& phi, const Proof& pf) {
    for (std::size_t i = 0; i < pf.steps.size(); ++i) {
        if (pf.steps[i].by == ProofStep::By::Premise) {
            return {false, static_cast<int>(i) + 1, "certificate must be premise-free"};
        }
    }
    Verdict base = check_proof(sys, {}, pf);
    if (!base.accepted) return base;

    int last = static_cast<int>(pf.steps.size());
    const FormulaPtr& conclusion = pf.steps.back().formula;
    if (struct_eq(conclusion, phi)) return {true, 0, ""};

    auto flatten = [](const FormulaPtr& f, std::vector<FormulaPtr>& out) {
        auto rec = [&out](auto&& self, const FormulaPtr& g) -> void {
            if (g->op() == Op::And) {
                self(self, g->lhs());
                self(self, g->rhs());
            } else if (g->op() != Op::Top) {
                out.push_back(g);
            }
        };
        rec(rec, f);
    };

    auto parts = imp_parts(conclusion);
    if (!parts || !struct_eq(parts->second, phi)) {
        return {false, last, "conclusion does not certify the entailment"};
    }
    std::vector<FormulaPtr> allowed;
    for (const FormulaPtr& s : sigma) flatten(s, allowed);
    std::vector<FormulaPtr> needed;
    flatten(parts->first, needed);
    for (const FormulaPtr& c : needed) {
        bool found = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const FormulaPtr& a) { return struct_eq(a, c); });
        if (!found) {
            return {false, last, "antecedent conjunct '" + render(c) + "' is not in sigma"};
        }
    }
    return {true, 0, ""};
}

}  // namespace topomodal
