#include "topomodal/foltrans.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace topomodal {

// ── term and formula builders ───────────────────────────────────────

PtTerm pt_var(std::string name) { return PtTerm{PtTerm::Kind::Var, std::move(name)}; }
PtTerm pt_k() { return PtTerm{PtTerm::Kind::K, {}}; }

namespace {

SetTermPtr set_node(SetTerm::Kind k, std::string name, SetTermPtr a, SetTermPtr b) {
    auto t = std::make_shared<SetTerm>();
    t->kind = k;
    t->name = std::move(name);
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

FOLPtr fol_node(FOLNode n) { return std::make_shared<const FOLNode>(std::move(n)); }

}  // namespace

SetTermPtr set_var(std::string name) {
    return set_node(SetTerm::Kind::Var, std::move(name), nullptr, nullptr);
}
SetTermPtr set_zero() { return set_node(SetTerm::Kind::Zero, {}, nullptr, nullptr); }
SetTermPtr set_one() { return set_node(SetTerm::Kind::One, {}, nullptr, nullptr); }
SetTermPtr set_sum(SetTermPtr a, SetTermPtr b) {
    return set_node(SetTerm::Kind::Sum, {}, std::move(a), std::move(b));
}
SetTermPtr set_comp(SetTermPtr a) {
    return set_node(SetTerm::Kind::Comp, {}, std::move(a), nullptr);
}

FOLPtr fol_true() { return fol_node({}); }

FOLPtr fol_mem(PtTerm x, SetTermPtr b) {
    FOLNode n;
    n.kind = FKind::Mem;
    n.pa = std::move(x);
    n.sa = std::move(b);
    return fol_node(std::move(n));
}

FOLPtr fol_eq_pt(PtTerm a, PtTerm b) {
    FOLNode n;
    n.kind = FKind::EqPt;
    n.pa = std::move(a);
    n.pb = std::move(b);
    return fol_node(std::move(n));
}

FOLPtr fol_eq_set(SetTermPtr a, SetTermPtr b) {
    FOLNode n;
    n.kind = FKind::EqSet;
    n.sa = std::move(a);
    n.sb = std::move(b);
    return fol_node(std::move(n));
}

FOLPtr fol_pred(std::string atom, PtTerm x) {
    FOLNode n;
    n.kind = FKind::Pred;
    n.name = std::move(atom);
    n.pa = std::move(x);
    return fol_node(std::move(n));
}

FOLPtr fol_neg(FOLPtr f) {
    FOLNode n;
    n.kind = FKind::Neg;
    n.f = std::move(f);
    return fol_node(std::move(n));
}

namespace {
FOLPtr binary(FKind k, FOLPtr a, FOLPtr b) {
    FOLNode n;
    n.kind = k;
    n.f = std::move(a);
    n.g = std::move(b);
    return fol_node(std::move(n));
}
FOLPtr quant(FKind k, std::string var, FOLPtr f) {
    FOLNode n;
    n.kind = k;
    n.name = std::move(var);
    n.f = std::move(f);
    return fol_node(std::move(n));
}
}  // namespace

FOLPtr fol_and(FOLPtr a, FOLPtr b) { return binary(FKind::And, std::move(a), std::move(b)); }
FOLPtr fol_or(FOLPtr a, FOLPtr b) { return binary(FKind::Or, std::move(a), std::move(b)); }
FOLPtr fol_imp(FOLPtr a, FOLPtr b) { return binary(FKind::Imp, std::move(a), std::move(b)); }
FOLPtr fol_iff(FOLPtr a, FOLPtr b) { return binary(FKind::Iff, std::move(a), std::move(b)); }

FOLPtr fol_all_pt(std::string var, FOLPtr f) {
    return quant(FKind::AllPt, std::move(var), std::move(f));
}
FOLPtr fol_ex_pt(std::string var, FOLPtr f) {
    return quant(FKind::ExPt, std::move(var), std::move(f));
}
FOLPtr fol_all_set(std::string var, FOLPtr f) {
    return quant(FKind::AllSet, std::move(var), std::move(f));
}
FOLPtr fol_ex_set(std::string var, FOLPtr f) {
    return quant(FKind::ExSet, std::move(var), std::move(f));
}

FOLPtr fol_big_and(const std::vector<FOLPtr>& fs) {
    if (fs.empty()) return fol_true();
    FOLPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = fol_and(acc, fs[i]);
    return acc;
}

FOLPtr fol_big_or(const std::vector<FOLPtr>& fs) {
    if (fs.empty()) return fol_neg(fol_true());
    FOLPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = fol_or(acc, fs[i]);
    return acc;
}

// ── free variables and substitution ─────────────────────────────────

namespace {

void set_term_vars(const SetTermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == SetTerm::Kind::Var) out.insert(t->name);
    set_term_vars(t->a, out);
    set_term_vars(t->b, out);
}

void free_vars(const FOLPtr& f, std::set<std::string>& pts, std::set<std::string>& sets,
               std::set<std::string> bound_p, std::set<std::string> bound_s) {
    switch (f->kind) {
    case FKind::True:
        return;
    case FKind::Mem:
    case FKind::EqPt:
    case FKind::EqSet:
    case FKind::Pred: {
        auto pt = [&](const PtTerm& t) {
            if (t.kind == PtTerm::Kind::Var && !bound_p.count(t.name)) pts.insert(t.name);
        };
        if (f->kind != FKind::EqSet) pt(f->pa);
        if (f->kind == FKind::EqPt) pt(f->pb);
        std::set<std::string> sv;
        set_term_vars(f->sa, sv);
        set_term_vars(f->sb, sv);
        for (const auto& v : sv)
            if (!bound_s.count(v)) sets.insert(v);
        return;
    }
    case FKind::Neg:
        free_vars(f->f, pts, sets, bound_p, bound_s);
        return;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
        free_vars(f->f, pts, sets, bound_p, bound_s);
        free_vars(f->g, pts, sets, bound_p, bound_s);
        return;
    case FKind::AllPt:
    case FKind::ExPt:
        bound_p.insert(f->name);
        free_vars(f->f, pts, sets, bound_p, bound_s);
        return;
    case FKind::AllSet:
    case FKind::ExSet:
        bound_s.insert(f->name);
        free_vars(f->f, pts, sets, bound_p, bound_s);
        return;
    }
}

}  // namespace

std::set<std::string> fol_free_points(const FOLPtr& f) {
    std::set<std::string> p, s;
    free_vars(f, p, s, {}, {});
    return p;
}

std::set<std::string> fol_free_sets(const FOLPtr& f) {
    std::set<std::string> p, s;
    free_vars(f, p, s, {}, {});
    return s;
}

FOLPtr fol_subst_const_k(const FOLPtr& f, const std::string& x) {
    auto sub_pt = [&](const PtTerm& t) {
        return t.kind == PtTerm::Kind::Var && t.name == x ? pt_k() : t;
    };
    switch (f->kind) {
    case FKind::True:
    case FKind::EqSet:
        return f;
    case FKind::Mem:
        return fol_mem(sub_pt(f->pa), f->sa);
    case FKind::EqPt:
        return fol_eq_pt(sub_pt(f->pa), sub_pt(f->pb));
    case FKind::Pred:
        return fol_pred(f->name, sub_pt(f->pa));
    case FKind::Neg:
        return fol_neg(fol_subst_const_k(f->f, x));
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
        return binary(f->kind, fol_subst_const_k(f->f, x), fol_subst_const_k(f->g, x));
    case FKind::AllPt:
    case FKind::ExPt:
        if (f->name == x) return f;  // rebinding shadows x
        return quant(f->kind, f->name, fol_subst_const_k(f->f, x));
    case FKind::AllSet:
    case FKind::ExSet:
        return quant(f->kind, f->name, fol_subst_const_k(f->f, x));
    }
    throw std::logic_error("unreachable");
}

// ── printing ────────────────────────────────────────────────────────

std::string pt_term_str(const PtTerm& t) {
    return t.kind == PtTerm::Kind::K ? "k" : t.name;
}

namespace {

std::string set_str(const SetTermPtr& t, bool parenthesize_sum) {
    switch (t->kind) {
    case SetTerm::Kind::Var:
        return t->name;
    case SetTerm::Kind::Zero:
        return "0";
    case SetTerm::Kind::One:
        return "1";
    case SetTerm::Kind::Comp: {
        // parenthesize compound arguments so -- never appears
        const bool atom = t->a->kind == SetTerm::Kind::Var ||
                          t->a->kind == SetTerm::Kind::Zero || t->a->kind == SetTerm::Kind::One;
        return atom ? "-" + set_str(t->a, false) : "-(" + set_str(t->a, false) + ")";
    }
    case SetTerm::Kind::Sum: {
        std::string s = set_str(t->a, false) + " + " + set_str(t->b, true);
        return parenthesize_sum ? "(" + s + ")" : s;
    }
    }
    throw std::logic_error("unreachable");
}

int fol_prec(const FOLPtr& f) {
    switch (f->kind) {
    case FKind::Iff:
        return 1;
    case FKind::Imp:
        return 2;
    case FKind::Or:
        return 3;
    case FKind::And:
        return 4;
    case FKind::Neg:
    case FKind::AllPt:
    case FKind::ExPt:
    case FKind::AllSet:
    case FKind::ExSet:
        return 5;
    default:
        return 6;
    }
}

std::string print_fol(const FOLPtr& f, int min_prec) {
    std::string s;
    switch (f->kind) {
    case FKind::True:
        return "true";
    case FKind::Mem:
        return pt_term_str(f->pa) + " in " + set_str(f->sa, true);
    case FKind::EqPt:
        return pt_term_str(f->pa) + " = " + pt_term_str(f->pb);
    case FKind::EqSet:
        return set_str(f->sa, false) + " = " + set_str(f->sb, false);
    case FKind::Pred:
        return "P_" + f->name + "(" + pt_term_str(f->pa) + ")";
    case FKind::Neg:
        s = "~" + print_fol(f->f, 5);
        break;
    case FKind::And:
        s = print_fol(f->f, 4) + " & " + print_fol(f->g, 5);
        break;
    case FKind::Or:
        s = print_fol(f->f, 3) + " | " + print_fol(f->g, 4);
        break;
    case FKind::Imp:
        s = print_fol(f->f, 3) + " -> " + print_fol(f->g, 2);
        break;
    case FKind::Iff:
        s = print_fol(f->f, 2) + " <-> " + print_fol(f->g, 2);
        break;
    case FKind::AllPt:
    case FKind::ExPt:
    case FKind::AllSet:
    case FKind::ExSet: {
        // prefix chains stay bare, any other body gets parentheses
        const bool bare = fol_prec(f->f) == 5;
        const char* q = f->kind == FKind::AllPt   ? "Ap:"
                        : f->kind == FKind::ExPt  ? "Ep:"
                        : f->kind == FKind::AllSet ? "As:"
                                                   : "Es:";
        s = q + f->name + " " +
            (bare ? print_fol(f->f, 5) : "(" + print_fol(f->f, 0) + ")");
        break;
    }
    }
    return fol_prec(f) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string set_term_str(const SetTermPtr& t) { return set_str(t, false); }

std::string fol_str(const FOLPtr& f) { return print_fol(f, 0); }

// ── parsing ─────────────────────────────────────────────────────────

namespace {

struct Token {
    enum class Kind { Ident, Sym, End } kind = Kind::End;
    std::string text;
    std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Token::Kind::Ident, text.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            std::string d = text.substr(i, j - i);
            if (d != "0" && d != "1")
                throw std::invalid_argument("fol parse error at " + std::to_string(i) +
                                            ": numeral '" + d + "' (only 0 and 1 exist)");
            out.push_back({Token::Kind::Sym, d, i});
            i = j;
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Kind::Sym, "->", i});
            i += 2;
            continue;
        }
        if (c == '<' && i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
            out.push_back({Token::Kind::Sym, "<->", i});
            i += 3;
            continue;
        }
        if (std::string("()+-=~&|:").find(c) != std::string::npos) {
            out.push_back({Token::Kind::Sym, std::string(1, c), i});
            ++i;
            continue;
        }
        throw std::invalid_argument("fol parse error at " + std::to_string(i) +
                                    ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back({Token::Kind::End, "", text.size()});
    return out;
}

class FolParser {
public:
    FolParser(std::vector<Token> toks, const std::set<std::string>& free_points)
        : toks_(std::move(toks)) {
        for (const auto& v : free_points) env_[v] = 'p';
    }

    FOLPtr run() {
        FOLPtr f = formula();
        expect_end();
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, char> env_;  // variable -> 'p' or 's'

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at_sym(const std::string& s) const {
        return peek().kind == Token::Kind::Sym && peek().text == s;
    }
    bool eat_sym(const std::string& s) {
        if (!at_sym(s)) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("fol parse error at " + std::to_string(peek().pos) + ": " +
                                    msg);
    }
    void require_sym(const std::string& s) {
        if (!eat_sym(s)) fail("expected '" + s + "'");
    }
    void expect_end() {
        if (peek().kind != Token::Kind::End) fail("trailing input '" + peek().text + "'");
    }

    FOLPtr formula() {
        FOLPtr l = imp();
        while (eat_sym("<->")) l = fol_iff(l, imp());
        return l;
    }
    FOLPtr imp() {
        FOLPtr l = disj();
        if (eat_sym("->")) return fol_imp(l, imp());
        return l;
    }
    FOLPtr disj() {
        FOLPtr l = conj();
        while (eat_sym("|")) l = fol_or(l, conj());
        return l;
    }
    FOLPtr conj() {
        FOLPtr l = unary();
        while (eat_sym("&")) l = fol_and(l, unary());
        return l;
    }

    FOLPtr unary() {
        if (eat_sym("~")) return fol_neg(unary());
        if (peek().kind == Token::Kind::Ident && peek(1).kind == Token::Kind::Sym &&
            peek(1).text == ":") {
            const std::string& q = peek().text;
            if (q == "Ap" || q == "Ep" || q == "As" || q == "Es") {
                pos_ += 2;
                if (peek().kind != Token::Kind::Ident) fail("expected a variable after ':'");
                std::string var = peek().text;
                ++pos_;
                char sort = (q == "Ap" || q == "Ep") ? 'p' : 's';
                auto old = env_.find(var) != env_.end() ? std::optional<char>(env_[var])
                                                        : std::nullopt;
                env_[var] = sort;
                FOLPtr body = unary();
                if (old)
                    env_[var] = *old;
                else
                    env_.erase(var);
                if (q == "Ap") return fol_all_pt(var, body);
                if (q == "Ep") return fol_ex_pt(var, body);
                if (q == "As") return fol_all_set(var, body);
                return fol_ex_set(var, body);
            }
        }
        return atomic();
    }

    FOLPtr atomic() {
        if (peek().kind == Token::Kind::Ident && peek().text == "true") {
            ++pos_;
            return fol_true();
        }
        if (eat_sym("(")) {
            FOLPtr f = formula();
            require_sym(")");
            return f;
        }
        if (peek().kind == Token::Kind::Ident && at_sym_ahead(1, "(")) {
            std::string id = peek().text;
            if (id.rfind("P_", 0) != 0 || id.size() <= 2)
                fail("unknown function symbol '" + id + "'");
            pos_ += 2;
            PtTerm t = point_term();
            require_sym(")");
            return fol_pred(id.substr(2), t);
        }
        // a term relation
        TermAny t1 = term();
        bool mem = false;
        if (peek().kind == Token::Kind::Ident && peek().text == "in") {
            ++pos_;
            mem = true;
        } else if (!eat_sym("=")) {
            fail("expected 'in' or '=' after a term");
        }
        TermAny t2 = term();
        if (mem) {
            if (!t1.is_pt) fail("left side of 'in' must be point-sorted");
            if (t2.is_pt) fail("right side of 'in' must be set-sorted");
            return fol_mem(t1.pt, t2.st);
        }
        if (t1.is_pt != t2.is_pt) fail("sort mismatch in '='");
        if (t1.is_pt) return fol_eq_pt(t1.pt, t2.pt);
        return fol_eq_set(t1.st, t2.st);
    }

    bool at_sym_ahead(std::size_t ahead, const std::string& s) const {
        return peek(ahead).kind == Token::Kind::Sym && peek(ahead).text == s;
    }

    struct TermAny {
        bool is_pt = false;
        PtTerm pt;
        SetTermPtr st;
    };

    SetTermPtr as_set(const TermAny& t) {
        if (t.is_pt) fail("point term where a set term is required");
        return t.st;
    }

    PtTerm point_term() {
        TermAny t = factor();
        if (!t.is_pt) fail("expected a point term");
        return t.pt;
    }

    TermAny term() {
        TermAny first = factor();
        if (!at_sym("+")) return first;
        SetTermPtr acc = as_set(first);
        while (eat_sym("+")) acc = set_sum(acc, as_set(factor()));
        TermAny out;
        out.st = acc;
        return out;
    }

    TermAny factor() {
        TermAny out;
        if (eat_sym("-")) {
            out.st = set_comp(as_set(factor()));
            return out;
        }
        if (eat_sym("0")) {
            out.st = set_zero();
            return out;
        }
        if (eat_sym("1")) {
            out.st = set_one();
            return out;
        }
        if (eat_sym("(")) {
            TermAny t = term();
            require_sym(")");
            return t;
        }
        if (peek().kind != Token::Kind::Ident) fail("expected a term");
        std::string id = peek().text;
        ++pos_;
        if (id == "k") {
            out.is_pt = true;
            out.pt = pt_k();
            return out;
        }
        auto it = env_.find(id);
        if (it == env_.end()) fail("unbound variable '" + id + "'");
        if (it->second == 'p') {
            out.is_pt = true;
            out.pt = pt_var(id);
        } else {
            out.st = set_var(id);
        }
        return out;
    }
};

}  // namespace

FOLPtr parse_fol(const std::string& text, const std::set<std::string>& free_points) {
    return FolParser(tokenize(text), free_points).run();
}

std::vector<FOLPtr> parse_theory(const std::string& text) {
    std::vector<FOLPtr> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        out.push_back(parse_fol(line));
    }
    return out;
}

// ── standard translation ────────────────────────────────────────────

namespace {

struct Fresh {
    int counter = 0;
    std::string root;

    std::string next(const char* base) {
        for (;;) {
            std::string n = base + std::to_string(counter++);
            if (n != root) return n;
        }
    }
};

FOLPtr translate(const FormulaPtr& f, const std::string& x, Fresh& fr) {
    switch (f->op()) {
    case Op::Atom:
        return fol_pred(f->atom_name(), pt_var(x));
    case Op::Top:
        return fol_true();
    case Op::Neg:
        return fol_neg(translate(f->lhs(), x, fr));
    case Op::And:
        return fol_and(translate(f->lhs(), x, fr), translate(f->rhs(), x, fr));
    case Op::Box: {
        std::string O = fr.next("O");
        std::string y = fr.next("y");
        return fol_ex_set(
            O, fol_and(fol_mem(pt_var(x), set_var(O)),
                       fol_all_pt(y, fol_imp(fol_mem(pt_var(y), set_var(O)),
                                             translate(f->lhs(), y, fr)))));
    }
    case Op::Count: {
        const std::uint32_t n = f->count_bound();
        std::vector<std::string> vars;
        for (std::uint32_t i = 0; i <= n; ++i) vars.push_back(fr.next("x"));
        std::vector<FOLPtr> parts;
        for (std::uint32_t i = 0; i <= n; ++i)
            for (std::uint32_t j = i + 1; j <= n; ++j)
                parts.push_back(fol_neg(fol_eq_pt(pt_var(vars[i]), pt_var(vars[j]))));
        for (std::uint32_t i = 0; i <= n; ++i)
            parts.push_back(translate(f->lhs(), vars[i], fr));
        FOLPtr body = fol_big_and(parts);
        for (std::uint32_t i = n + 1; i-- > 0;) body = fol_ex_pt(vars[i], body);
        return body;
    }
    default:
        throw std::logic_error("translate: unexpected operator");
    }
}

FormulaPtr to_box_count_fragment(const FormulaPtr& f) {
    FormulaPtr g = rewrite_eliminate(f, RewriteRule::DiffToUnivCount1);
    g = rewrite_eliminate(g, RewriteRule::UnivToCount);
    Fragment fr = classify(g);
    if (fr.uses_coderiv || fr.uses_tangle || fr.uses_univ || fr.uses_diff)
        throw std::invalid_argument("formula outside the box/counting fragment");
    return g;
}

}  // namespace

FOLPtr standard_translate(const FormulaPtr& f, const std::string& x) {
    FormulaPtr g = to_box_count_fragment(f);
    Fresh fr;
    fr.root = x;
    return translate(g, x, fr);
}

// ── finite structures ───────────────────────────────────────────────

namespace {

std::uint64_t domain_mask(int points) {
    return points >= 64 ? ~0ull : (1ull << points) - 1;
}

}  // namespace

void validate_lstructure(const LStructure& s) {
    const int nb = s.size_sets();
    auto bad = [](const std::string& what) {
        throw std::invalid_argument("invalid structure: " + what);
    };
    if (s.points < 1 || s.points > 64) bad("point domain must have 1..64 elements");
    if (nb < 2) bad("set domain must have at least 2 elements");
    if (s.plus_table.size() != static_cast<std::size_t>(nb) ||
        s.minus_table.size() != static_cast<std::size_t>(nb))
        bad("operation tables must match the set domain");
    auto in_range = [&](int i) { return i >= 0 && i < nb; };
    for (const auto& row : s.plus_table) {
        if (row.size() != static_cast<std::size_t>(nb)) bad("ragged + table");
        for (int v : row)
            if (!in_range(v)) bad("+ table entry out of range");
    }
    for (int v : s.minus_table)
        if (!in_range(v)) bad("- table entry out of range");
    if (!in_range(s.zero) || !in_range(s.one)) bad("0/1 out of range");
    if (s.zero == s.one) bad("0 = 1");
    if (s.k < 0 || s.k >= s.points) bad("k out of range");
    const std::uint64_t mask = domain_mask(s.points);
    for (std::uint64_t m : s.membership)
        if ((m & ~mask) != 0) bad("membership mask outside the point domain");
    for (const auto& [name, m] : s.preds)
        if ((m & ~mask) != 0) bad("predicate mask outside the point domain: " + name);

    auto plus = [&](int a, int b) { return s.plus_table[a][b]; };
    auto minus = [&](int a) { return s.minus_table[a]; };
    auto meet = [&](int a, int b) { return minus(plus(minus(a), minus(b))); };
    for (int a = 0; a < nb; ++a) {
        if (plus(a, a) != a) bad("boolean law broken: a + a = a");
        if (plus(a, s.zero) != a) bad("boolean law broken: a + 0 = a");
        if (plus(a, s.one) != s.one) bad("boolean law broken: a + 1 = 1");
        if (minus(minus(a)) != a) bad("boolean law broken: --a = a");
        if (plus(a, minus(a)) != s.one) bad("boolean law broken: a + -a = 1");
        for (int b = 0; b < nb; ++b)
            if (plus(a, b) != plus(b, a)) bad("boolean law broken: a + b = b + a");
    }
    // cubic laws: exhaustive on small domains, sampled beyond
    auto check_triple = [&](int a, int b, int c) {
        if (plus(plus(a, b), c) != plus(a, plus(b, c)))
            bad("boolean law broken: (a + b) + c = a + (b + c)");
        if (meet(a, plus(b, c)) != plus(meet(a, b), meet(a, c)))
            bad("boolean law broken: a * (b + c) = a * b + a * c");
    };
    if (nb <= 128) {
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b)
                for (int c = 0; c < nb; ++c) check_triple(a, b, c);
    } else {
        std::mt19937 rng(0x5eed);
        for (int i = 0; i < 50000; ++i)
            check_triple(static_cast<int>(rng() % nb), static_cast<int>(rng() % nb),
                         static_cast<int>(rng() % nb));
    }
}

namespace {

int eval_set_term(const LStructure& s, const SetTermPtr& t, Assignment& asg) {
    switch (t->kind) {
    case SetTerm::Kind::Var: {
        auto it = asg.sets.find(t->name);
        if (it == asg.sets.end())
            throw std::invalid_argument("unbound set variable '" + t->name + "'");
        return it->second;
    }
    case SetTerm::Kind::Zero:
        return s.zero;
    case SetTerm::Kind::One:
        return s.one;
    case SetTerm::Kind::Sum:
        return s.plus_table[eval_set_term(s, t->a, asg)][eval_set_term(s, t->b, asg)];
    case SetTerm::Kind::Comp:
        return s.minus_table[eval_set_term(s, t->a, asg)];
    }
    throw std::logic_error("unreachable");
}

int eval_pt_term(const LStructure& s, const PtTerm& t, Assignment& asg) {
    if (t.kind == PtTerm::Kind::K) return s.k;
    auto it = asg.points.find(t.name);
    if (it == asg.points.end())
        throw std::invalid_argument("unbound point variable '" + t.name + "'");
    return it->second;
}

bool eval_fol(const LStructure& s, const FOLPtr& g, Assignment& asg) {
    switch (g->kind) {
    case FKind::True:
        return true;
    case FKind::Mem: {
        int p = eval_pt_term(s, g->pa, asg);
        int b = eval_set_term(s, g->sa, asg);
        return (s.membership[b] >> p) & 1u;
    }
    case FKind::EqPt:
        return eval_pt_term(s, g->pa, asg) == eval_pt_term(s, g->pb, asg);
    case FKind::EqSet:
        return eval_set_term(s, g->sa, asg) == eval_set_term(s, g->sb, asg);
    case FKind::Pred: {
        auto it = s.preds.find(g->name);
        if (it == s.preds.end()) return false;
        return (it->second >> eval_pt_term(s, g->pa, asg)) & 1u;
    }
    case FKind::Neg:
        return !eval_fol(s, g->f, asg);
    case FKind::And:
        return eval_fol(s, g->f, asg) && eval_fol(s, g->g, asg);
    case FKind::Or:
        return eval_fol(s, g->f, asg) || eval_fol(s, g->g, asg);
    case FKind::Imp:
        return !eval_fol(s, g->f, asg) || eval_fol(s, g->g, asg);
    case FKind::Iff:
        return eval_fol(s, g->f, asg) == eval_fol(s, g->g, asg);
    case FKind::AllPt:
    case FKind::ExPt: {
        const bool all = g->kind == FKind::AllPt;
        auto old = asg.points.find(g->name) != asg.points.end()
                       ? std::optional<int>(asg.points[g->name])
                       : std::nullopt;
        bool result = all;
        for (int p = 0; p < s.points; ++p) {
            asg.points[g->name] = p;
            bool v = eval_fol(s, g->f, asg);
            if (v != all) {
                result = !all;
                break;
            }
        }
        if (old)
            asg.points[g->name] = *old;
        else
            asg.points.erase(g->name);
        return result;
    }
    case FKind::AllSet:
    case FKind::ExSet: {
        const bool all = g->kind == FKind::AllSet;
        auto old = asg.sets.find(g->name) != asg.sets.end()
                       ? std::optional<int>(asg.sets[g->name])
                       : std::nullopt;
        bool result = all;
        for (int b = 0; b < s.size_sets(); ++b) {
            asg.sets[g->name] = b;
            bool v = eval_fol(s, g->f, asg);
            if (v != all) {
                result = !all;
                break;
            }
        }
        if (old)
            asg.sets[g->name] = *old;
        else
            asg.sets.erase(g->name);
        return result;
    }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

bool eval_fol_finite(const LStructure& s, const FOLPtr& g, const Assignment& asg) {
    Assignment local = asg;
    return eval_fol(s, g, local);
}

// ── lifting ─────────────────────────────────────────────────────────

Lift lift_to_lstructure(const FiniteModel& m, int k_point) {
    const FiniteSpace& sp = m.space;
    const int n = sp.size();
    if (k_point < 0 || k_point >= n) throw std::out_of_range("k index out of range");

    const PointSet full = sp.full();
    bool base = true;
    for (int i = 0; i < n; ++i)
        if (!sp.is_open(full & ~sp.min_nbhd(i))) {
            base = false;
            break;
        }

    std::vector<std::uint64_t> sets;
    if (base) {
        for (PointSet o : sp.opens())
            if (sp.is_open(full & ~o)) sets.push_back(o);
    } else {
        // field generated by the opens: unions of indistinguishability blocks
        std::map<PointSet, PointSet> blocks;  // min nbhd -> block mask
        for (int i = 0; i < n; ++i) blocks[sp.min_nbhd(i)] |= PointSet{1} << i;
        std::vector<PointSet> bl;
        for (const auto& [nb, mask] : blocks) bl.push_back(mask);
        if (bl.size() > 12) throw std::length_error("generated field too large");
        for (std::uint64_t pick = 0; pick < (1ull << bl.size()); ++pick) {
            PointSet u = 0;
            for (std::size_t j = 0; j < bl.size(); ++j)
                if ((pick >> j) & 1u) u |= bl[j];
            sets.push_back(u);
        }
    }
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    if (sets.size() > 4096) throw std::length_error("generated field too large");

    std::map<std::uint64_t, int> index;
    for (std::size_t i = 0; i < sets.size(); ++i) index[sets[i]] = static_cast<int>(i);

    Lift out;
    LStructure& s = out.structure;
    s.points = n;
    s.membership = sets;
    s.plus_table.assign(sets.size(), std::vector<int>(sets.size(), 0));
    s.minus_table.assign(sets.size(), 0);
    for (std::size_t a = 0; a < sets.size(); ++a) {
        s.minus_table[a] = index.at(full & ~sets[a]);
        for (std::size_t b = 0; b < sets.size(); ++b)
            s.plus_table[a][b] = index.at(sets[a] | sets[b]);
    }
    s.zero = index.at(0);
    s.one = index.at(full);
    for (const auto& [name, mask] : m.h) s.preds[name] = mask;
    s.k = k_point;

    out.clopen_base = base;
    if (!base)
        out.notes.push_back(
            "clopen sets are not a base; set domain is the field generated by the opens");
    validate_lstructure(s);
    return out;
}

// ── the theory of good structures ───────────────────────────────────

std::string emit_tgood(const std::vector<std::vector<FormulaPtr>>& psi_list,
                       const std::vector<FormulaPtr>& sigma) {
    for (const auto& psi : psi_list)
        if (psi.empty()) throw std::invalid_argument("empty formula family");

    std::vector<std::string> lines;
    auto emit = [&](const FOLPtr& f) { lines.push_back(fol_str(f)); };
    const SetTermPtr a = set_var("a"), b = set_var("b"), c = set_var("c");
    auto meet = [](SetTermPtr u, SetTermPtr v) {
        return set_comp(set_sum(set_comp(std::move(u)), set_comp(std::move(v))));
    };

    lines.push_back("# boolean algebra, atomless");
    emit(fol_all_set("a", fol_all_set("b", fol_eq_set(set_sum(a, b), set_sum(b, a)))));
    emit(fol_all_set(
        "a", fol_all_set(
                 "b", fol_all_set("c", fol_eq_set(set_sum(set_sum(a, b), c),
                                                  set_sum(a, set_sum(b, c)))))));
    emit(fol_all_set("a", fol_eq_set(set_sum(a, a), a)));
    emit(fol_all_set("a", fol_eq_set(set_sum(a, set_zero()), a)));
    emit(fol_all_set("a", fol_eq_set(set_sum(a, set_one()), set_one())));
    emit(fol_all_set("a", fol_eq_set(set_comp(set_comp(a)), a)));
    emit(fol_all_set("a", fol_eq_set(set_sum(a, set_comp(a)), set_one())));
    emit(fol_neg(fol_eq_set(set_zero(), set_one())));
    emit(fol_all_set(
        "a", fol_all_set(
                 "b", fol_all_set("c", fol_eq_set(meet(a, set_sum(b, c)),
                                                  set_sum(meet(a, b), meet(a, c)))))));
    emit(fol_all_set(
        "b", fol_imp(fol_neg(fol_eq_set(b, set_zero())),
                     fol_ex_set("c", fol_and(fol_and(fol_neg(fol_eq_set(c, set_zero())),
                                                     fol_neg(fol_eq_set(c, b))),
                                             fol_eq_set(set_sum(c, b), b))))));

    const PtTerm x = pt_var("x"), y = pt_var("y");
    lines.push_back("# membership represents + and -");
    emit(fol_all_set(
        "b",
        fol_all_set(
            "c", fol_all_pt("x", fol_and(fol_iff(fol_mem(x, set_sum(b, c)),
                                                 fol_or(fol_mem(x, b), fol_mem(x, c))),
                                         fol_iff(fol_mem(x, set_comp(b)),
                                                 fol_neg(fol_mem(x, b))))))));

    lines.push_back("# extensionality of set elements");
    emit(fol_all_set(
        "b", fol_all_set("c", fol_imp(fol_all_pt("x", fol_iff(fol_mem(x, b), fol_mem(x, c))),
                                      fol_eq_set(b, c)))));

    lines.push_back("# points with the same memberships are equal");
    emit(fol_all_pt(
        "x", fol_all_pt("y", fol_imp(fol_all_set("b", fol_iff(fol_mem(x, b), fol_mem(y, b))),
                                     fol_eq_pt(x, y)))));

    if (!psi_list.empty()) lines.push_back("# refinement of covered elements");
    for (const auto& psi : psi_list) {
        const std::size_t mcount = psi.size();
        std::vector<FOLPtr> boxes;
        for (const auto& f : psi) boxes.push_back(standard_translate(make_box(f), "x"));

        FOLPtr premise = fol_all_pt("x", fol_imp(fol_mem(x, b), fol_big_or(boxes)));
        std::vector<SetTermPtr> cs;
        for (std::size_t i = 0; i < mcount; ++i) cs.push_back(set_var("c" + std::to_string(i)));
        SetTermPtr sum = cs.front();
        for (std::size_t i = 1; i < mcount; ++i) sum = set_sum(sum, cs[i]);

        std::vector<FOLPtr> inside;
        for (std::size_t i = 0; i < mcount; ++i)
            inside.push_back(fol_all_pt("x", fol_imp(fol_mem(x, cs[i]), boxes[i])));
        FOLPtr body = fol_and(fol_eq_set(set_sum(b, sum), sum), fol_big_and(inside));
        for (std::size_t i = mcount; i-- > 0;)
            body = fol_ex_set("c" + std::to_string(i), body);
        emit(fol_all_set("b", fol_imp(premise, body)));
    }

    if (!sigma.empty()) lines.push_back("# designated-point facts");
    for (const auto& f : sigma)
        emit(fol_subst_const_k(standard_translate(f, "x"), "x"));

    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

// ── goodness checking ───────────────────────────────────────────────

bool GoodnessReport::good() const {
    if (!atomless.holds || !representation.holds || !extensionality.holds || !separation.holds)
        return false;
    for (const auto& c : refinement)
        if (!c.holds) return false;
    return true;
}

GoodnessReport check_goodness(const LStructure& s,
                              const std::vector<std::vector<FormulaPtr>>& psi_list) {
    validate_lstructure(s);
    GoodnessReport r;
    const int nb = s.size_sets();
    const std::uint64_t full = domain_mask(s.points);
    auto plus = [&](int a, int b) { return s.plus_table[a][b]; };
    auto le = [&](int a, int b) { return plus(a, b) == b; };

    // a finite algebra with 0 != 1 always has an atom
    for (int c = 0; c < nb && !r.atomless.checked; ++c) {
        if (c == s.zero) continue;
        bool minimal = true;
        for (int d = 0; d < nb; ++d)
            if (d != s.zero && d != c && le(d, c)) {
                minimal = false;
                break;
            }
        if (minimal) {
            r.atomless = {false, nb, "atom found (finite set domain): element " +
                                         std::to_string(c)};
        }
    }

    r.representation.holds = true;
    for (int b = 0; b < nb && r.representation.holds; ++b) {
        for (int c = 0; c < nb && r.representation.holds; ++c) {
            std::uint64_t want = s.membership[b] | s.membership[c];
            if (s.membership[plus(b, c)] != want) {
                r.representation = {false, r.representation.checked,
                                    "x in b + c misrepresented for elements " +
                                        std::to_string(b) + ", " + std::to_string(c)};
                break;
            }
            r.representation.checked += s.points;
        }
        if (r.representation.holds &&
            s.membership[s.minus_table[b]] != (full & ~s.membership[b]))
            r.representation = {false, r.representation.checked,
                                "x in -b misrepresented for element " + std::to_string(b)};
    }

    r.extensionality.holds = true;
    for (int b = 0; b < nb && r.extensionality.holds; ++b)
        for (int c = b + 1; c < nb; ++c) {
            ++r.extensionality.checked;
            if (s.membership[b] == s.membership[c]) {
                r.extensionality = {false, r.extensionality.checked,
                                    "elements " + std::to_string(b) + " and " +
                                        std::to_string(c) + " have the same members"};
                break;
            }
        }

    r.separation.holds = true;
    for (int x = 0; x < s.points && r.separation.holds; ++x)
        for (int y = x + 1; y < s.points; ++y) {
            ++r.separation.checked;
            bool split = false;
            for (int b = 0; b < nb; ++b)
                if (((s.membership[b] >> x) & 1u) != ((s.membership[b] >> y) & 1u)) {
                    split = true;
                    break;
                }
            if (!split) {
                r.separation = {false, r.separation.checked,
                                "points " + std::to_string(x) + " and " + std::to_string(y) +
                                    " lie in the same elements"};
                break;
            }
        }

    for (const auto& psi : psi_list) {
        if (psi.empty()) throw std::invalid_argument("empty formula family");
        ClauseCheck cc;
        std::vector<std::uint64_t> disjunct;  // points satisfying ([]psi_i)^x
        for (const auto& f : psi) {
            FOLPtr tr = standard_translate(make_box(f), "x");
            std::uint64_t mask = 0;
            for (int a = 0; a < s.points; ++a) {
                Assignment asg;
                asg.points["x"] = a;
                if (eval_fol_finite(s, tr, asg)) mask |= 1ull << a;
            }
            disjunct.push_back(mask);
        }
        std::uint64_t covered = 0;
        for (std::uint64_t d : disjunct) covered |= d;

        // maximal witnesses: join of all elements inside each disjunct
        std::vector<int> star(psi.size(), s.zero);
        for (std::size_t i = 0; i < psi.size(); ++i)
            for (int c = 0; c < nb; ++c)
                if ((s.membership[c] & ~disjunct[i] & full) == 0) star[i] = plus(star[i], c);
        int sum_star = s.zero;
        bool star_ok = true;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            if ((s.membership[star[i]] & ~disjunct[i] & full) != 0) star_ok = false;
            sum_star = plus(sum_star, star[i]);
        }

        cc.holds = true;
        for (int b = 0; b < nb; ++b) {
            if ((s.membership[b] & ~covered & full) != 0) continue;  // premise fails
            ++cc.checked;
            if (!star_ok) {
                cc = {false, cc.checked,
                      "witness search inconclusive (membership does not represent +)"};
                break;
            }
            if (!le(b, sum_star)) {
                cc = {false, cc.checked,
                      "no refinement for element " + std::to_string(b)};
                break;
            }
        }
        if (cc.holds) cc.note = "all covered elements refine";
        r.refinement.push_back(cc);
    }
    return r;
}

// ── goodness of the cylinder algebra over the Cantor space ──────────

namespace {

Region region_complement(const Region& r) {
    return region_combine(r, r, SetOp::Complement);
}

Region region_diff(const Region& a, const Region& b) {
    return region_combine(a, region_complement(b), SetOp::Intersect);
}

bool region_subset(const Region& a, const Region& b) { return region_diff(a, b).is_empty(); }

Stem point_prefix(const BasePoint& x, std::size_t len) {
    Stem s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(point_at(x, i));
    return s;
}

Region random_cylinder_union(std::mt19937& rng) {
    Region r = Region::empty(SpaceId::Cantor);
    const int pieces = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < pieces; ++i) {
        Stem s;
        const int len = static_cast<int>(rng() % 5);
        for (int j = 0; j < len; ++j) s.push_back(static_cast<Sym>(rng() % 2));
        r = region_combine(r, Region::cylinder(SpaceId::Cantor, s), SetOp::Union);
    }
    if (rng() % 4 == 0) r = region_complement(r);
    return r;
}

BasePoint random_cantor_point(std::mt19937& rng) {
    Stem pre;
    const int np = static_cast<int>(rng() % 5);
    for (int i = 0; i < np; ++i) pre.push_back(static_cast<Sym>(rng() % 2));
    Stem per;
    const int pp = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < pp; ++i) per.push_back(static_cast<Sym>(rng() % 2));
    return make_point(SpaceId::Cantor, pre, per);
}

// first index where two distinct eventually periodic points differ
std::size_t divergence_index(const BasePoint& a, const BasePoint& b) {
    const std::size_t cap = a.prefix.size() + b.prefix.size() +
                            a.period.size() * b.period.size() + 2;
    for (std::size_t i = 0; i < cap; ++i)
        if (point_at(a, i) != point_at(b, i)) return i;
    throw std::logic_error("divergence_index: points are equal");
}

}  // namespace

GoodnessReport check_goodness(const SymbolicModel& m,
                              const std::vector<std::vector<FormulaPtr>>& psi_list,
                              int samples, std::mt19937& rng) {
    if (m.space != SpaceId::Cantor)
        throw std::invalid_argument("cantor-space model required");
    GoodnessReport r;

    r.atomless.holds = true;
    for (int i = 0; i < samples; ++i) {
        Region u = random_cylinder_union(rng);
        if (u.is_empty()) u = Region::full(SpaceId::Cantor);
        BasePoint w = u.some_member();
        Stem s = point_prefix(w, u.trie_depth() + 1);
        s.push_back(0);
        Region c = Region::cylinder(SpaceId::Cantor, s);
        ++r.atomless.checked;
        if (c.is_empty() || !region_subset(c, u) || region_diff(u, c).is_empty()) {
            r.atomless = {false, r.atomless.checked, "sampled element failed to split"};
            break;
        }
    }
    if (r.atomless.holds) r.atomless.note = "every sampled element splits";

    r.representation.holds = true;
    for (int i = 0; i < samples && r.representation.holds; ++i) {
        Region b = random_cylinder_union(rng);
        Region c = random_cylinder_union(rng);
        BasePoint x = random_cantor_point(rng);
        bool ok = region_combine(b, c, SetOp::Union).contains(x) ==
                      (b.contains(x) || c.contains(x)) &&
                  region_complement(b).contains(x) == !b.contains(x);
        ++r.representation.checked;
        if (!ok) r.representation = {false, r.representation.checked, "membership law failed"};
    }

    r.extensionality.holds = true;
    for (int i = 0; i < samples && r.extensionality.holds; ++i) {
        Region b = random_cylinder_union(rng);
        Region c = random_cylinder_union(rng);
        ++r.extensionality.checked;
        if (b == c) continue;  // extensionally equal, nothing to witness
        Region d = region_diff(b, c);
        if (d.is_empty()) d = region_diff(c, b);
        BasePoint w = d.some_member();
        if (b.contains(w) == c.contains(w)) {
            r.extensionality = {false, r.extensionality.checked, "no separating member"};
        }
    }

    r.separation.holds = true;
    for (int i = 0; i < samples && r.separation.holds; ++i) {
        BasePoint x = random_cantor_point(rng);
        BasePoint y = random_cantor_point(rng);
        if (point_compare(x, y) == 0) continue;
        std::size_t d = divergence_index(x, y);
        Region b = Region::cylinder(SpaceId::Cantor, point_prefix(x, d + 1));
        ++r.separation.checked;
        if (!b.contains(x) || b.contains(y))
            r.separation = {false, r.separation.checked, "prefix cylinder failed to separate"};
    }

    for (const auto& psi : psi_list) {
        if (psi.empty()) throw std::invalid_argument("empty formula family");
        ClauseCheck cc;
        std::vector<Region> disjunct;
        bool clopen = true;
        for (const auto& f : psi) {
            Region s = eval_symbolic(m, make_box(f));
            if (!s.plus_points().empty() || !s.minus_points().empty()) clopen = false;
            disjunct.push_back(s);
        }
        if (!clopen) {
            cc.note = "skipped: non-clopen truth set";
            r.refinement.push_back(cc);
            continue;
        }
        Region cover = Region::empty(SpaceId::Cantor);
        std::size_t depth = 0;
        for (const Region& s : disjunct) {
            cover = region_combine(cover, s, SetOp::Union);
            depth = std::max(depth, s.trie_depth());
        }

        cc.holds = true;
        std::size_t max_depth = 0;
        for (int i = 0; i < samples && cc.holds; ++i) {
            Region b = Region::empty(SpaceId::Cantor);
            switch (rng() % 3) {
            case 0:
                b = cover;
                break;
            case 1:
                b = region_combine(random_cylinder_union(rng), cover, SetOp::Intersect);
                break;
            default:
                b = region_combine(
                    region_combine(random_cylinder_union(rng), random_cylinder_union(rng),
                                   SetOp::Intersect),
                    cover, SetOp::Intersect);
                break;
            }
            const std::size_t d = std::max(depth, b.trie_depth());
            if (d > 14) continue;  // keep the dissection bounded
            max_depth = std::max(max_depth, d);

            std::vector<std::vector<Stem>> groups(psi.size());
            bool assigned_all = true;
            for (std::uint64_t bits = 0; bits < (1ull << d); ++bits) {
                Stem stem;
                for (std::size_t j = 0; j < d; ++j)
                    stem.push_back(static_cast<Sym>((bits >> j) & 1u));
                if (!b.covers_cylinder(stem)) continue;
                bool placed = false;
                for (std::size_t gi = 0; gi < disjunct.size(); ++gi)
                    if (disjunct[gi].covers_cylinder(stem)) {
                        groups[gi].push_back(stem);
                        placed = true;
                        break;
                    }
                if (!placed) {
                    assigned_all = false;
                    break;
                }
            }
            ++cc.checked;
            if (!assigned_all) {
                cc = {false, cc.checked, "a covered cylinder lies in no disjunct"};
                break;
            }
            Region joined = Region::empty(SpaceId::Cantor);
            for (std::size_t gi = 0; gi < groups.size(); ++gi) {
                Region cg = Region::assemble(SpaceId::Cantor, groups[gi], {}, {}, {});
                if (!region_subset(cg, disjunct[gi])) {
                    cc = {false, cc.checked, "witness escaped its disjunct"};
                    break;
                }
                joined = region_combine(joined, cg, SetOp::Union);
            }
            if (cc.holds && !region_subset(b, joined))
                cc = {false, cc.checked, "witnesses do not cover the element"};
        }
        if (cc.holds)
            cc.note = "refined " + std::to_string(cc.checked) + " sampled elements (depth <= " +
                      std::to_string(max_depth) + ")";
        r.refinement.push_back(cc);
    }
    return r;
}

// ── forcing ─────────────────────────────────────────────────────────

bool forces_box(const SymbolicModel& m, const BasePoint& mu, const FormulaPtr& f) {
    if (m.space != SpaceId::Cantor || mu.space != SpaceId::Cantor)
        throw std::invalid_argument("cantor-space model and point required");
    FormulaPtr g = to_box_count_fragment(f);
    Region r = eval_symbolic(m, g);

    // beyond this depth, cylinder containment can no longer change:
    // the trie structure is constant and all removed points distinct
    // from mu have diverged from it
    std::size_t bound = r.trie_depth();
    for (const BasePoint& q : r.minus_points())
        if (point_compare(q, mu) != 0)
            bound = std::max(bound, divergence_index(q, mu) + 1);

    for (std::size_t len = 0; len <= bound; ++len)
        if (r.covers_cylinder(point_prefix(mu, len))) return true;
    return false;
}

}  // namespace topomodal
