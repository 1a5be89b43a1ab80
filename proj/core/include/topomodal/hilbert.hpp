// hilbert.hpp - axiom-schema matching and Hilbert-style proof checking
//
// Six systems are built in, each with its operator fragment, axiom
// schemas, and rules:
//
//   S4       []: K, T, 4                          gen box
//   KD4      [d]: K, D (<d>true), 4               gen d
//   S4U      S4 + A: KA, U1-U3, U4 (Ap -> []p)    gen A, box
//   KD4U     KD4 + A: KA, U1-U3, U4 (Ap -> [d]p)  gen A, d
//   S4DT1S   S4 + [!=]: Kdiff, B, A2, A3          gen box, diff; substitution
//   DT1      KD4 + [!=]: Kdiff, Ddiff, B, P4, Conn  gen d, diff
//
// In the two difference systems the universal modality is an
// abbreviation, A f = f & [!=]f, and the schemas store its expansion;
// their fragments therefore exclude the A operator itself.  The
// difference block in DT1 uses the sound presentation B (f ->
// [!=]<!=>f) and P4 (<!=><!=>f -> f | <!=>f): the plain transitivity
// schema [!=]f -> [!=][!=]f fails whenever f holds everywhere except
// at a single point, so it cannot be adopted for spaces with at least
// two points.  Conn is [!=]f -> [d]f & [!=][d]f, the expansion of
// [!=]f -> A[d]f.
//
// Proofs are numbered step lists.  Every step carries a justification:
// an axiom instance (schemas match one-way, schematic atoms bind to
// arbitrary formulas, and propositional tautologies over maximal
// modal-rooted subformulas are recognized wholesale), a premise, modus
// ponens, generalisation, or substitution.  Generalisation and
// substitution apply only to steps derived without premises, keeping
// the checked judgment the local one: premises |- conclusion holds
// exactly when some finite conjunction of premises implies the
// conclusion as a theorem.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "topomodal/formula.hpp"

namespace topomodal {

enum class SystemId { S4, KD4, S4U, KD4U, S4DT1S, DT1 };

enum class GenMode { A, Box, D, Diff };

// JSON-facing names: "A", "box", "d", "diff".
std::string gen_mode_name(GenMode m);
std::optional<GenMode> gen_mode_by_name(const std::string& s);

struct AxiomSchema {
    std::string name;
    FormulaPtr schema;  // schematic atoms phi, psi
};

struct System {
    SystemId id;
    std::string name;
    std::vector<AxiomSchema> axioms;
    std::set<GenMode> gen_modes;
    bool allows_substitution = false;
    std::set<Op> ops;  // operator fragment, including Atom/Top/Neg/And
};

const System& system(SystemId id);
const std::vector<System>& all_systems();
std::optional<SystemId> system_by_name(const std::string& name);

// True iff f is a propositional tautology over its maximal non-boolean
// subformulas.  Throws std::length_error beyond 20 distinct leaves.
bool is_tautology(const FormulaPtr& f);

struct AxiomMatch {
    std::string name;  // schema name, or "Taut"
    std::map<std::string, FormulaPtr> subst;
};

// First listed schema with an instantiation equal to f, else "Taut"
// for recognized tautologies, else nullopt.
std::optional<AxiomMatch> match_axiom(const System& sys, const FormulaPtr& f);

// One-way structural match of a single schema against f.
std::optional<std::map<std::string, FormulaPtr>> match_schema(const FormulaPtr& schema,
                                                              const FormulaPtr& f);

struct ProofStep {
    enum class By { Axiom, Premise, MP, Gen, Subst };

    FormulaPtr formula;
    By by = By::Axiom;
    std::string axiom;                                           // Axiom
    std::optional<std::map<std::string, FormulaPtr>> subst_map;  // Axiom (check), Subst (apply)
    int premise_index = 0;                                       // Premise, 1-based
    int from = 0;        // MP antecedent / Gen source / Subst source, 1-based
    int from_imp = 0;    // MP implication step, 1-based
    GenMode mode = GenMode::Box;  // Gen
};

struct Proof {
    std::vector<ProofStep> steps;
};

struct Verdict {
    bool accepted = false;
    int step = 0;  // 1-based offending step when rejected
    std::string reason;
};

// Checks pf as a derivation of premises |- last formula.  Rule
// discipline: citations point strictly backwards; generalisation and
// substitution require the cited step to be premise-free; every step
// formula must stay inside the system's operator fragment.
Verdict check_proof(const System& sys, const std::vector<FormulaPtr>& premises, const Proof& pf);

// Accepts a premise-free pf whose conclusion certifies sigma |- phi:
// either phi itself, or c -> phi where every conjunct of c (flattened,
// order and bracketing free, true as the empty conjunction) appears
// among the sigma members or their flattened conjuncts.
Verdict check_entailment_certificate(const System& sys, const std::vector<FormulaPtr>& sigma,
                                     const FormulaPtr& phi, const Proof& pf);

}  // namespace topomodal
