#pragma once

// First-order view of the box/counting fragment.
//
// The target language is a two-sorted first-order signature: a point
// sort and a set sort, a membership relation `x in b` between them,
// boolean function symbols +, -, 0, 1 on the set sort, a unary
// predicate P_p on points for every modal atom p, and a distinguished
// point constant k.  Structures are pairs (X, B) of a point domain and
// a set domain together with interpretation tables.
//
// standard_translate maps a modal formula to a first-order formula
// with one free point variable.  Boxes become "some set contains x and
// satisfies the body everywhere", counting modalities become blocks of
// distinct existential point witnesses.  When the set domain of a
// structure induces the same topology the modal semantics used (its
// members form a base), the translation evaluates identically to the
// modal evaluation; lift_to_lstructure builds such a structure from a
// finite topological model whenever its clopen sets form a base, and
// falls back to the field of sets generated by the open family (with a
// flag) when they do not.  The fallback keeps every open set in the
// domain but also admits non-open witnesses, so the equivalence with
// the topological box is deliberately not promised there.
//
// emit_tgood prints, in a small line-oriented text syntax, the theory
// of "good" structures: an atomless boolean set domain that represents
// +/- as union/complement, is extensional in both directions, and
// refines every covered set element into per-disjunct witnesses, one
// refinement sentence per supplied finite formula family.
// check_goodness verifies those properties directly: exhaustively on a
// finite structure, and by randomized sampling with constructive
// cylinder refinement on the concrete structure whose set domain is
// the algebra of finite unions of Cantor cylinders.
//
// forces_box decides, for an eventually periodic Cantor point, whether
// some cylinder around the point is contained in a formula's truth
// region.  For such points this agrees with membership in the interior
// of the truth region, and the property tests pin that identity.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "topomodal/alexandrov.hpp"
#include "topomodal/formula.hpp"
#include "topomodal/region.hpp"

namespace topomodal {

// ── terms ───────────────────────────────────────────────────────────

struct PtTerm {
    enum class Kind { Var, K } kind = Kind::K;
    std::string name;  // Var only
};

PtTerm pt_var(std::string name);
PtTerm pt_k();

struct SetTerm;
using SetTermPtr = std::shared_ptr<const SetTerm>;

struct SetTerm {
    enum class Kind { Var, Zero, One, Sum, Comp } kind = Kind::Zero;
    std::string name;   // Var only
    SetTermPtr a, b;    // Sum: a + b; Comp: -a
};

SetTermPtr set_var(std::string name);
SetTermPtr set_zero();
SetTermPtr set_one();
SetTermPtr set_sum(SetTermPtr a, SetTermPtr b);
SetTermPtr set_comp(SetTermPtr a);

// ── formulas ────────────────────────────────────────────────────────

enum class FKind {
    True,
    Mem,     // point in set
    EqPt,    // point = point
    EqSet,   // set = set
    Pred,    // P_name(point)
    Neg,
    And,
    Or,
    Imp,
    Iff,
    AllPt,   // Ap:v body
    ExPt,    // Ep:v body
    AllSet,  // As:v body
    ExSet,   // Es:v body
};

struct FOLNode;
using FOLPtr = std::shared_ptr<const FOLNode>;

struct FOLNode {
    FKind kind = FKind::True;
    PtTerm pa, pb;       // Mem/Pred: pa; EqPt: pa, pb
    SetTermPtr sa, sb;   // Mem: sa; EqSet: sa, sb
    std::string name;    // Pred: atom name; quantifiers: bound variable
    FOLPtr f, g;         // children
};

FOLPtr fol_true();
FOLPtr fol_mem(PtTerm x, SetTermPtr b);
FOLPtr fol_eq_pt(PtTerm a, PtTerm b);
FOLPtr fol_eq_set(SetTermPtr a, SetTermPtr b);
FOLPtr fol_pred(std::string atom, PtTerm x);
FOLPtr fol_neg(FOLPtr f);
FOLPtr fol_and(FOLPtr a, FOLPtr b);
FOLPtr fol_or(FOLPtr a, FOLPtr b);
FOLPtr fol_imp(FOLPtr a, FOLPtr b);
FOLPtr fol_iff(FOLPtr a, FOLPtr b);
FOLPtr fol_all_pt(std::string var, FOLPtr f);
FOLPtr fol_ex_pt(std::string var, FOLPtr f);
FOLPtr fol_all_set(std::string var, FOLPtr f);
FOLPtr fol_ex_set(std::string var, FOLPtr f);

// Left fold of fol_and / fol_or; empty input yields true / ~true.
FOLPtr fol_big_and(const std::vector<FOLPtr>& fs);
FOLPtr fol_big_or(const std::vector<FOLPtr>& fs);

// Free variables, by sort.
std::set<std::string> fol_free_points(const FOLPtr& f);
std::set<std::string> fol_free_sets(const FOLPtr& f);

// Replaces every free occurrence of the point variable x by the
// constant k.
FOLPtr fol_subst_const_k(const FOLPtr& f, const std::string& x);

// ── text syntax ─────────────────────────────────────────────────────
//
// One formula per line.  Quantifiers are the prefixes Ap:x / Ep:x
// (point sort) and As:b / Es:b (set sort), scoping over the next
// unary-level formula, so bodies are normally parenthesized.
// Connectives, loosest first: <->, ->, |, &, ~.  Atomic formulas are
// `true`, `t in u`, `t = u`, and P_p(t).  Set terms use infix + and
// prefix -, with constants 0 and 1; the point constant is k.
// Parenthesized terms are recognized inside term context only; a
// parenthesis in formula position always opens a subformula.  `#`
// starts a comment line.  Every variable must be bound by a
// quantifier, except for point variables declared free by the caller.

std::string pt_term_str(const PtTerm& t);
std::string set_term_str(const SetTermPtr& t);
std::string fol_str(const FOLPtr& f);

// Throws std::invalid_argument with a position on malformed input.
FOLPtr parse_fol(const std::string& text,
                 const std::set<std::string>& free_points = {});

// Splits into lines, skips blanks and # comments, parses each
// remaining line as a sentence.
std::vector<FOLPtr> parse_theory(const std::string& text);

// ── standard translation ────────────────────────────────────────────
//
// Clause by clause:
//
//   p          ~~>  P_p(x)
//   true       ~~>  true
//   ~f, f & g  ~~>  componentwise
//   []f        ~~>  Es:O (x in O & Ap:y (y in O -> f^y))
//   <c n>f     ~~>  Ep:x0 .. Ep:xn (pairwise distinct & each f^xi)
//
// A f and [!=]f are first rewritten into the counting fragment; [d]
// and <t> have no translation here and raise std::invalid_argument.
// The result has at most x free (counting blocks use none).
FOLPtr standard_translate(const FormulaPtr& f, const std::string& x = "x");

// ── finite two-sorted structures ────────────────────────────────────

struct LStructure {
    int points = 0;                            // |X|, at most 64
    std::vector<std::uint64_t> membership;     // per set element, mask over X
    std::vector<std::vector<int>> plus_table;  // indices into the set domain
    std::vector<int> minus_table;
    int zero = -1;
    int one = -1;
    std::map<std::string, std::uint64_t> preds;  // absent atom = empty
    int k = 0;

    int size_sets() const { return static_cast<int>(membership.size()); }
};

// Structural well-formedness plus the boolean-algebra laws for
// (+, -, 0, 1): commutativity, associativity, idempotence, identity,
// bound, involution, complementation, distributivity over the derived
// meet, and 0 != 1.  Throws std::invalid_argument naming the first
// broken law.  Membership is left free; whether it respects the
// boolean structure is exactly what check_goodness reports.
void validate_lstructure(const LStructure& s);

struct Assignment {
    std::map<std::string, int> points;
    std::map<std::string, int> sets;
};

// Tarskian evaluation; quantifiers range over the matching domain.
// Unbound variables raise std::invalid_argument.
bool eval_fol_finite(const LStructure& s, const FOLPtr& g, const Assignment& asg);

// ── lifting finite topological models ───────────────────────────────

struct Lift {
    LStructure structure;
    bool clopen_base = false;        // clopen sets form a base
    std::vector<std::string> notes;  // human-readable caveats
};

// Set domain: all clopen sets when they form a base (equivalently,
// every minimal neighbourhood is clopen); otherwise the field of sets
// generated by the open family.  Throws std::length_error when that
// field would exceed 4096 elements and std::out_of_range on a bad
// k index.
Lift lift_to_lstructure(const FiniteModel& m, int k_point);

// ── the theory of good structures ───────────────────────────────────

// Sentences, one per line with # section comments:
//   1. boolean-algebra laws for the set sort plus atomlessness;
//   2. membership represents + as union and - as complement;
//   3. set elements with the same members are equal;
//   4. points in the same set elements are equal;
//   5. per family Psi: every b whose members all satisfy some
//      ([]psi)^x splits into witnesses c_psi below b's join, each
//      inside its own ([]psi)^x.
// When sigma is non-empty its members are appended as ^x(k/x)
// sentences.  Families must be non-empty (std::invalid_argument).
std::string emit_tgood(const std::vector<std::vector<FormulaPtr>>& psi_list,
                       const std::vector<FormulaPtr>& sigma = {});

struct ClauseCheck {
    bool holds = false;
    int checked = 0;   // instances examined
    std::string note;
};

struct GoodnessReport {
    ClauseCheck atomless;
    ClauseCheck representation;  // membership vs + and -
    ClauseCheck extensionality;  // same members => equal elements
    ClauseCheck separation;      // same memberships => equal points
    std::vector<ClauseCheck> refinement;  // one per supplied family
    bool good() const;
};

// Exhaustive check of a finite structure.  Atomlessness always fails
// here (a finite algebra with 0 != 1 has atoms); the refinement checks
// search for maximal witnesses, which is complete over a finite field.
GoodnessReport check_goodness(const LStructure& s,
                              const std::vector<std::vector<FormulaPtr>>& psi_list);

// Randomized check of the concrete Cantor structure whose set domain
// is the algebra of finite cylinder unions and whose valuation comes
// from the model.  Splitting cylinders witnesses atomlessness; the
// refinement path dissects covered elements into depth-uniform
// cylinders and is only attempted when every ([]psi) truth region is
// free of point adjustments (otherwise that family reports a skip).
// Requires a Cantor-space model.
GoodnessReport check_goodness(const SymbolicModel& m,
                              const std::vector<std::vector<FormulaPtr>>& psi_list,
                              int samples, std::mt19937& rng);

// ── forcing at eventually periodic points ───────────────────────────

// True iff some prefix cylinder of mu is contained in the truth region
// of f.  Searches prefixes up to a bound after which cylinder
// containment can no longer change (the region's trie depth and the
// divergence indices from its removed points).  Same fragment and
// rewriting policy as standard_translate; requires Cantor space on
// both arguments.
bool forces_box(const SymbolicModel& m, const BasePoint& mu, const FormulaPtr& f);

}  // namespace topomodal
