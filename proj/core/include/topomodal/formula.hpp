// formula.hpp - modal formula AST, parser, printer, rewrites
//
// The language has a small core and a layer of derived connectives.
// Core node kinds:
//
//   Atom       propositional variable, lowercase identifier
//   Top        truth constant
//   Neg        ~f
//   And        f & g
//   Box        []f      interior modality
//   CoDeriv    [d]f     coderivative modality (punctured neighbourhoods)
//   Univ       A f      universal modality
//   DiffBox    [!=]f    difference box ("everywhere else")
//   Count      <c n>f   "more than n points satisfy f" (n <= 65535)
//   Tangle     <t>{f1,..,fk}   tangled closure of a non-empty finite set
//
// Everything else (false, |, ->, <->, <>, <d>, E, <!=>, /\{..}, \/{..}) is
// desugared into the core at construction / parse time, so structural
// equality is equality of core shapes.  Tangle argument sets are kept
// sorted in the canonical structural order with duplicates removed, which
// makes <t>{a,b} and <t>{b,a,b} the same node.
//
// Formulas are immutable and shared via FormulaPtr; all builders return
// canonical nodes.  The concrete syntax accepted by parse() is:
//
//   formula := iff
//   iff     := imp ("<->" imp)*
//   imp     := or  ("->" or)*           (right-nested via desugaring)
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~"u | "[]"u | "<>"u | "[d]"u | "<d>"u | "A"u | "E"u
//            | "[!=]"u | "<!=>"u | "<c" NAT ">"u
//            | "<t>" "{" formula ("," formula)* "}"
//            | "/\" "{" [formula ("," formula)*] "}"
//            | "\/" "{" [formula ("," formula)*] "}"
//            | "true" | "false" | IDENT | "(" formula ")"
//   IDENT   := [a-z][a-zA-Z0-9_]*

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace topomodal {

enum class Op : std::uint8_t {
    Atom,
    Top,
    Neg,
    And,
    Box,
    CoDeriv,
    Univ,
    DiffBox,
    Count,
    Tangle,
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Largest admissible bound for the counting modality <c n>.
inline constexpr std::uint32_t kMaxCountBound = 65535;

class Formula {
public:
    Op op() const noexcept { return op_; }
    const std::string& atom_name() const { return atom_; }
    std::uint32_t count_bound() const noexcept { return bound_; }
    const FormulaPtr& lhs() const { return lhs_; }
    const FormulaPtr& rhs() const { return rhs_; }
    // Canonically sorted, duplicate-free argument set of a Tangle node.
    const std::vector<FormulaPtr>& tangle_set() const { return set_; }

    // Total structural order; ties every canonicalisation together.
    static int compare(const Formula& a, const Formula& b);
    bool equals(const Formula& other) const { return compare(*this, other) == 0; }
    std::size_t hash() const;

private:
    friend FormulaPtr make_atom(const std::string&);
    friend FormulaPtr make_top();
    friend FormulaPtr make_neg(FormulaPtr);
    friend FormulaPtr make_and(FormulaPtr, FormulaPtr);
    friend FormulaPtr make_box(FormulaPtr);
    friend FormulaPtr make_coderiv(FormulaPtr);
    friend FormulaPtr make_univ(FormulaPtr);
    friend FormulaPtr make_diffbox(FormulaPtr);
    friend FormulaPtr make_count(std::uint32_t, FormulaPtr);
    friend FormulaPtr make_tangle(std::vector<FormulaPtr>);

    Formula() = default;

    Op op_ = Op::Top;
    std::string atom_;            // Atom only
    std::uint32_t bound_ = 0;     // Count only
    FormulaPtr lhs_, rhs_;        // unary: lhs_; And: both
    std::vector<FormulaPtr> set_; // Tangle only
};

bool struct_eq(const FormulaPtr& a, const FormulaPtr& b);
bool struct_lt(const FormulaPtr& a, const FormulaPtr& b);

struct FormulaPtrLess {
    bool operator()(const FormulaPtr& a, const FormulaPtr& b) const { return struct_lt(a, b); }
};

// ---- core builders --------------------------------------------------------

FormulaPtr make_atom(const std::string& name);   // rejects non-IDENT names
FormulaPtr make_top();
FormulaPtr make_neg(FormulaPtr f);
FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
FormulaPtr make_box(FormulaPtr f);
FormulaPtr make_coderiv(FormulaPtr f);
FormulaPtr make_univ(FormulaPtr f);
FormulaPtr make_diffbox(FormulaPtr f);
FormulaPtr make_count(std::uint32_t n, FormulaPtr f);   // rejects n > kMaxCountBound
FormulaPtr make_tangle(std::vector<FormulaPtr> fs);     // rejects empty set

// ---- derived builders (desugar into the core) -----------------------------

FormulaPtr make_falsum();                           // ~true
FormulaPtr make_or(FormulaPtr a, FormulaPtr b);     // ~(~a & ~b)
FormulaPtr make_imp(FormulaPtr a, FormulaPtr b);    // ~(a & ~b)
FormulaPtr make_iff(FormulaPtr a, FormulaPtr b);    // (a->b) & (b->a)
FormulaPtr make_diamond(FormulaPtr f);              // ~[]~f
FormulaPtr make_deriv(FormulaPtr f);                // ~[d]~f
FormulaPtr make_exists(FormulaPtr f);               // ~A~f
FormulaPtr make_diffdia(FormulaPtr f);              // ~[!=]~f
FormulaPtr make_big_and(const std::vector<FormulaPtr>& fs);  // empty -> true
FormulaPtr make_big_or(const std::vector<FormulaPtr>& fs);   // empty -> false

// Uniform substitution of formulas for atoms (atoms absent from the map are
// left in place).
FormulaPtr substitute(const FormulaPtr& f,
                      const std::map<std::string, FormulaPtr>& map);

// ---- parsing and printing -------------------------------------------------

struct ParseError : std::runtime_error {
    ParseError(std::string msg, std::size_t offset_, std::vector<std::string> expected_);
    std::size_t offset;                  // byte offset into the input
    std::vector<std::string> expected;   // tokens that would have been legal
};

FormulaPtr parse(const std::string& text);   // throws ParseError

// Minimal-parentheses core syntax; parse(render(f)) reproduces f exactly.
std::string render(const FormulaPtr& f);

// Indented node-per-line tree dump (used by the CLI "parse" subcommand).
std::string dump_tree(const FormulaPtr& f);

// ---- fragment classification ---------------------------------------------

struct Fragment {
    bool uses_box = false;
    bool uses_coderiv = false;
    bool uses_tangle = false;
    bool uses_univ = false;
    bool uses_diff = false;
    bool uses_count = false;
    int modal_depth = 0;   // nesting depth of modal operators

    bool purely_propositional() const {
        return !uses_box && !uses_coderiv && !uses_tangle && !uses_univ &&
               !uses_diff && !uses_count;
    }
};

Fragment classify(const FormulaPtr& f);

// ---- connective elimination rewrites --------------------------------------
//
// Each rule replaces every occurrence of its source connective, bottom-up:
//
//   BoxToCoderiv    []f      ~~> f & [d]f
//   BoxToTangle     []f      ~~> ~<t>{~f}
//   UnivToCount     A f      ~~> ~<c 0>~f
//   DiffToUnivCount1  [!=]f  ~~> via <!=>g == (~g -> E g) & (g -> <c 1>g)
//   ExistsToDiff    A f      ~~> via E g == g | <!=>g
//   Count1ToDiff    <c 1>f   ~~> via <c 1>g == E(g & <!=>g), E eliminated too
//
// The rewrites preserve topological truth sets; this is what the property
// tests check.  A formula without the source connective is returned as is.

enum class RewriteRule {
    BoxToCoderiv,
    BoxToTangle,
    UnivToCount,
    DiffToUnivCount1,
    ExistsToDiff,
    Count1ToDiff,
};

FormulaPtr rewrite_eliminate(const FormulaPtr& f, RewriteRule rule);

}  // namespace topomodal
