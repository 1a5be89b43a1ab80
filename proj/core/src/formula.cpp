#include "topomodal/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace topomodal {

namespace {

bool is_ident(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return s != "true" && s != "false";
}

std::size_t hash_mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

// ---- structural order, equality, hashing ----------------------------------

int Formula::compare(const Formula& a, const Formula& b) {
    if (a.op_ != b.op_) return static_cast<int>(a.op_) < static_cast<int>(b.op_) ? -1 : 1;
    switch (a.op_) {
        case Op::Top:
            return 0;
        case Op::Atom:
            return a.atom_.compare(b.atom_) < 0 ? -1 : (a.atom_ == b.atom_ ? 0 : 1);
        case Op::Count:
            if (a.bound_ != b.bound_) return a.bound_ < b.bound_ ? -1 : 1;
            return compare(*a.lhs_, *b.lhs_);
        case Op::Neg:
        case Op::Box:
        case Op::CoDeriv:
        case Op::Univ:
        case Op::DiffBox:
            return compare(*a.lhs_, *b.lhs_);
        case Op::And: {
            int c = compare(*a.lhs_, *b.lhs_);
            return c != 0 ? c : compare(*a.rhs_, *b.rhs_);
        }
        case Op::Tangle: {
            std::size_t n = std::min(a.set_.size(), b.set_.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = compare(*a.set_[i], *b.set_[i]);
                if (c != 0) return c;
            }
            if (a.set_.size() != b.set_.size()) return a.set_.size() < b.set_.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

std::size_t Formula::hash() const {
    std::size_t h = static_cast<std::size_t>(op_);
    switch (op_) {
        case Op::Top: break;
        case Op::Atom: h = hash_mix(h, std::hash<std::string>{}(atom_)); break;
        case Op::Count:
            h = hash_mix(h, bound_);
            h = hash_mix(h, lhs_->hash());
            break;
        case Op::Neg:
        case Op::Box:
        case Op::CoDeriv:
        case Op::Univ:
        case Op::DiffBox:
            h = hash_mix(h, lhs_->hash());
            break;
        case Op::And:
            h = hash_mix(h, lhs_->hash());
            h = hash_mix(h, rhs_->hash());
            break;
        case Op::Tangle:
            for (const auto& f : set_) h = hash_mix(h, f->hash());
            break;
    }
    return h;
}

bool struct_eq(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return Formula::compare(*a, *b) == 0;
}

bool struct_lt(const FormulaPtr& a, const FormulaPtr& b) {
    return Formula::compare(*a, *b) < 0;
}

// ---- core builders --------------------------------------------------------

FormulaPtr make_atom(const std::string& name) {
    if (!is_ident(name))
        throw std::invalid_argument("atom name must match [a-z][a-zA-Z0-9_]*: '" + name + "'");
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::Atom;
    f->atom_ = name;
    return f;
}

FormulaPtr make_top() {
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::Top;
    return f;
}

FormulaPtr make_neg(FormulaPtr c) {
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::Neg;
    f->lhs_ = std::move(c);
    return f;
}

FormulaPtr make_and(FormulaPtr a, FormulaPtr b) {
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::And;
    f->lhs_ = std::move(a);
    f->rhs_ = std::move(b);
    return f;
}

FormulaPtr make_box(FormulaPtr c) {
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::Box;
    f->lhs_ = std::move(c);
    return f;
}

FormulaPtr make_coderiv(FormulaPtr c) {
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::CoDeriv;
    f->lhs_ = std::move(c);
    return f;
}

FormulaPtr make_univ(FormulaPtr c) {
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::Univ;
    f->lhs_ = std::move(c);
    return f;
}

FormulaPtr make_diffbox(FormulaPtr c) {
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::DiffBox;
    f->lhs_ = std::move(c);
    return f;
}

FormulaPtr make_count(std::uint32_t n, FormulaPtr c) {
    if (n > kMaxCountBound)
        throw std::invalid_argument("count bound exceeds " + std::to_string(kMaxCountBound));
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::Count;
    f->bound_ = n;
    f->lhs_ = std::move(c);
    return f;
}

FormulaPtr make_tangle(std::vector<FormulaPtr> fs) {
    if (fs.empty()) throw std::invalid_argument("tangle requires a non-empty formula set");
    std::sort(fs.begin(), fs.end(), FormulaPtrLess{});
    fs.erase(std::unique(fs.begin(), fs.end(),
                         [](const FormulaPtr& a, const FormulaPtr& b) { return struct_eq(a, b); }),
             fs.end());
    std::shared_ptr<Formula> f(new Formula());
    f->op_ = Op::Tangle;
    f->set_ = std::move(fs);
    return f;
}

// ---- derived builders -----------------------------------------------------

FormulaPtr make_falsum() { return make_neg(make_top()); }

FormulaPtr make_or(FormulaPtr a, FormulaPtr b) {
    return make_neg(make_and(make_neg(std::move(a)), make_neg(std::move(b))));
}

FormulaPtr make_imp(FormulaPtr a, FormulaPtr b) {
    return make_neg(make_and(std::move(a), make_neg(std::move(b))));
}

FormulaPtr make_iff(FormulaPtr a, FormulaPtr b) {
    return make_and(make_imp(a, b), make_imp(b, a));
}

FormulaPtr make_diamond(FormulaPtr f) { return make_neg(make_box(make_neg(std::move(f)))); }
FormulaPtr make_deriv(FormulaPtr f) { return make_neg(make_coderiv(make_neg(std::move(f)))); }
FormulaPtr make_exists(FormulaPtr f) { return make_neg(make_univ(make_neg(std::move(f)))); }
FormulaPtr make_diffdia(FormulaPtr f) { return make_neg(make_diffbox(make_neg(std::move(f)))); }

FormulaPtr make_big_and(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return make_top();
    FormulaPtr acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = make_and(acc, fs[i]);
    return acc;
}

FormulaPtr make_big_or(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return make_falsum();
    FormulaPtr acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = make_or(acc, fs[i]);
    return acc;
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, FormulaPtr>& map) {
    switch (f->op()) {
        case Op::Atom: {
            auto it = map.find(f->atom_name());
            return it == map.end() ? f : it->second;
        }
        case Op::Top: return f;
        case Op::Neg: return make_neg(substitute(f->lhs(), map));
        case Op::And: return make_and(substitute(f->lhs(), map), substitute(f->rhs(), map));
        case Op::Box: return make_box(substitute(f->lhs(), map));
        case Op::CoDeriv: return make_coderiv(substitute(f->lhs(), map));
        case Op::Univ: return make_univ(substitute(f->lhs(), map));
        case Op::DiffBox: return make_diffbox(substitute(f->lhs(), map));
        case Op::Count: return make_count(f->count_bound(), substitute(f->lhs(), map));
        case Op::Tangle: {
            std::vector<FormulaPtr> fs;
            fs.reserve(f->tangle_set().size());
            for (const auto& g : f->tangle_set()) fs.push_back(substitute(g, map));
            return make_tangle(std::move(fs));
        }
    }
    throw std::logic_error("unreachable");
}

// ---- lexer ---------------------------------------------------------------

namespace {

enum class Tok {
    End, Ident, Nat, True, False, Not, Amp, Bar, Arrow, Iff, LPar, RPar,
    BoxT, Dia, CoDerivT, Deriv, UnivT, ExistsT, DiffBoxT, DiffDia,
    CountOpen, Gt, TangleT, LBrace, RBrace, Comma, BigAnd, BigOr,
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "IDENT";
        case Tok::Nat: return "NAT";
        case Tok::True: return "'true'";
        case Tok::False: return "'false'";
        case Tok::Not: return "'~'";
        case Tok::Amp: return "'&'";
        case Tok::Bar: return "'|'";
        case Tok::Arrow: return "'->'";
        case Tok::Iff: return "'<->'";
        case Tok::LPar: return "'('";
        case Tok::RPar: return "')'";
        case Tok::BoxT: return "'[]'";
        case Tok::Dia: return "'<>'";
        case Tok::CoDerivT: return "'[d]'";
        case Tok::Deriv: return "'<d>'";
        case Tok::UnivT: return "'A'";
        case Tok::ExistsT: return "'E'";
        case Tok::DiffBoxT: return "'[!=]'";
        case Tok::DiffDia: return "'<!=>'";
        case Tok::CountOpen: return "'<c'";
        case Tok::Gt: return "'>'";
        case Tok::TangleT: return "'<t>'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::BigAnd: return "'/\\'";
        case Tok::BigOr: return "'\\/'";
    }
    return "?";
}

struct Token {
    Tok kind = Tok::End;
    std::string text;       // Ident
    std::uint64_t nat = 0;  // Nat
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        Token t;
        t.offset = pos_;
        if (pos_ >= s_.size()) return t;
        char c = s_[pos_];
        switch (c) {
            case '~': ++pos_; t.kind = Tok::Not; return t;
            case '&': ++pos_; t.kind = Tok::Amp; return t;
            case '|': ++pos_; t.kind = Tok::Bar; return t;
            case '(': ++pos_; t.kind = Tok::LPar; return t;
            case ')': ++pos_; t.kind = Tok::RPar; return t;
            case '{': ++pos_; t.kind = Tok::LBrace; return t;
            case '}': ++pos_; t.kind = Tok::RBrace; return t;
            case ',': ++pos_; t.kind = Tok::Comma; return t;
            case '>': ++pos_; t.kind = Tok::Gt; return t;
            case 'A': ++pos_; t.kind = Tok::UnivT; return t;
            case 'E': ++pos_; t.kind = Tok::ExistsT; return t;
            case '-':
                if (look(1) == '>') { pos_ += 2; t.kind = Tok::Arrow; return t; }
                fail(t.offset, "'->'");
            case '/':
                if (look(1) == '\\') { pos_ += 2; t.kind = Tok::BigAnd; return t; }
                fail(t.offset, "'/\\'");
            case '\\':
                if (look(1) == '/') { pos_ += 2; t.kind = Tok::BigOr; return t; }
                fail(t.offset, "'\\/'");
            case '[':
                if (look(1) == ']') { pos_ += 2; t.kind = Tok::BoxT; return t; }
                if (look(1) == 'd' && look(2) == ']') { pos_ += 3; t.kind = Tok::CoDerivT; return t; }
                if (look(1) == '!' && look(2) == '=' && look(3) == ']') {
                    pos_ += 4; t.kind = Tok::DiffBoxT; return t;
                }
                fail(t.offset, "'[]', '[d]' or '[!=]'");
            case '<':
                if (look(1) == '-' && look(2) == '>') { pos_ += 3; t.kind = Tok::Iff; return t; }
                if (look(1) == '>') { pos_ += 2; t.kind = Tok::Dia; return t; }
                if (look(1) == 'd' && look(2) == '>') { pos_ += 3; t.kind = Tok::Deriv; return t; }
                if (look(1) == 't' && look(2) == '>') { pos_ += 3; t.kind = Tok::TangleT; return t; }
                if (look(1) == '!' && look(2) == '=' && look(3) == '>') {
                    pos_ += 4; t.kind = Tok::DiffDia; return t;
                }
                if (look(1) == 'c') { pos_ += 2; t.kind = Tok::CountOpen; return t; }
                fail(t.offset, "'<->', '<>', '<d>', '<t>', '<!=>' or '<c'");
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint64_t v = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                v = v * 10 + static_cast<std::uint64_t>(s_[pos_] - '0');
                if (v > 10ULL * kMaxCountBound) v = 10ULL * kMaxCountBound + 1;
                ++pos_;
            }
            t.kind = Tok::Nat;
            t.nat = v;
            return t;
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string word = s_.substr(start, pos_ - start);
            if (word == "true") { t.kind = Tok::True; return t; }
            if (word == "false") { t.kind = Tok::False; return t; }
            t.kind = Tok::Ident;
            t.text = std::move(word);
            return t;
        }
        fail(t.offset, "a formula token");
    }

private:
    char look(std::size_t k) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }

    [[noreturn]] void fail(std::size_t off, const std::string& expected) {
        throw ParseError("unexpected character at offset " + std::to_string(off), off, {expected});
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) { advance(); }

    FormulaPtr parse_all() {
        FormulaPtr f = parse_iff();
        expect(Tok::End);
        return f;
    }

private:
    void advance() { cur_ = lex_.next(); }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        throw ParseError("parse error at offset " + std::to_string(cur_.offset) + ": got " +
                             tok_name(cur_.kind),
                         cur_.offset, std::move(expected));
    }

    void expect(Tok k) {
        if (cur_.kind != k) fail({tok_name(k)});
        advance();
    }

    FormulaPtr parse_iff() {
        std::vector<FormulaPtr> parts{parse_imp()};
        while (cur_.kind == Tok::Iff) {
            advance();
            parts.push_back(parse_imp());
        }
        FormulaPtr acc = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;) acc = make_iff(parts[i], acc);
        return acc;
    }

    FormulaPtr parse_imp() {
        std::vector<FormulaPtr> parts{parse_or()};
        while (cur_.kind == Tok::Arrow) {
            advance();
            parts.push_back(parse_or());
        }
        FormulaPtr acc = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;) acc = make_imp(parts[i], acc);
        return acc;
    }

    FormulaPtr parse_or() {
        FormulaPtr acc = parse_and();
        while (cur_.kind == Tok::Bar) {
            advance();
            acc = make_or(acc, parse_and());
        }
        return acc;
    }

    FormulaPtr parse_and() {
        FormulaPtr acc = parse_unary();
        while (cur_.kind == Tok::Amp) {
            advance();
            acc = make_and(acc, parse_unary());
        }
        return acc;
    }

    std::vector<FormulaPtr> parse_brace_list(bool allow_empty) {
        expect(Tok::LBrace);
        std::vector<FormulaPtr> fs;
        if (cur_.kind == Tok::RBrace && allow_empty) {
            advance();
            return fs;
        }
        fs.push_back(parse_iff());
        while (cur_.kind == Tok::Comma) {
            advance();
            fs.push_back(parse_iff());
        }
        expect(Tok::RBrace);
        return fs;
    }

    FormulaPtr parse_unary() {
        switch (cur_.kind) {
            case Tok::Not: advance(); return make_neg(parse_unary());
            case Tok::BoxT: advance(); return make_box(parse_unary());
            case Tok::Dia: advance(); return make_diamond(parse_unary());
            case Tok::CoDerivT: advance(); return make_coderiv(parse_unary());
            case Tok::Deriv: advance(); return make_deriv(parse_unary());
            case Tok::UnivT: advance(); return make_univ(parse_unary());
            case Tok::ExistsT: advance(); return make_exists(parse_unary());
            case Tok::DiffBoxT: advance(); return make_diffbox(parse_unary());
            case Tok::DiffDia: advance(); return make_diffdia(parse_unary());
            case Tok::CountOpen: {
                advance();
                if (cur_.kind != Tok::Nat) fail({"NAT"});
                std::uint64_t n = cur_.nat;
                std::size_t off = cur_.offset;
                advance();
                expect(Tok::Gt);
                if (n > kMaxCountBound)
                    throw ParseError("count bound exceeds " + std::to_string(kMaxCountBound) +
                                         " at offset " + std::to_string(off),
                                     off, {"NAT <= 65535"});
                return make_count(static_cast<std::uint32_t>(n), parse_unary());
            }
            case Tok::TangleT: {
                std::size_t off = cur_.offset;
                advance();
                std::vector<FormulaPtr> fs = parse_brace_list(/*allow_empty=*/false);
                if (fs.empty())
                    throw ParseError("tangle set must be non-empty at offset " + std::to_string(off),
                                     off, {"formula"});
                return make_tangle(std::move(fs));
            }
            case Tok::BigAnd: {
                advance();
                return make_big_and(parse_brace_list(/*allow_empty=*/true));
            }
            case Tok::BigOr: {
                advance();
                return make_big_or(parse_brace_list(/*allow_empty=*/true));
            }
            case Tok::True: advance(); return make_top();
            case Tok::False: advance(); return make_falsum();
            case Tok::Ident: {
                FormulaPtr f = make_atom(cur_.text);
                advance();
                return f;
            }
            case Tok::LPar: {
                advance();
                FormulaPtr f = parse_iff();
                expect(Tok::RPar);
                return f;
            }
            default:
                fail({"'~'", "'[]'", "'<>'", "'[d]'", "'<d>'", "'A'", "'E'", "'[!=]'", "'<!=>'",
                      "'<c'", "'<t>'", "'/\\'", "'\\/'", "'true'", "'false'", "IDENT", "'('"});
        }
    }

    Lexer lex_;
    Token cur_;
};

}  // namespace

ParseError::ParseError(std::string msg, std::size_t offset_, std::vector<std::string> expected_)
    : std::runtime_error(std::move(msg)), offset(offset_), expected(std::move(expected_)) {}

FormulaPtr parse(const std::string& text) { return Parser(text).parse_all(); }

// ---- printing -------------------------------------------------------------

namespace {

void render_to(const FormulaPtr& f, std::string& out, bool parenthesise_and) {
    switch (f->op()) {
        case Op::Atom: out += f->atom_name(); return;
        case Op::Top: out += "true"; return;
        case Op::Neg: out += '~'; render_to(f->lhs(), out, true); return;
        case Op::Box: out += "[]"; render_to(f->lhs(), out, true); return;
        case Op::CoDeriv: out += "[d]"; render_to(f->lhs(), out, true); return;
        case Op::Univ: out += "A "; render_to(f->lhs(), out, true); return;
        case Op::DiffBox: out += "[!="; out += ']'; render_to(f->lhs(), out, true); return;
        case Op::Count:
            out += "<c " + std::to_string(f->count_bound()) + "> ";
            render_to(f->lhs(), out, true);
            return;
        case Op::Tangle: {
            out += "<t>{";
            bool first = true;
            for (const auto& g : f->tangle_set()) {
                if (!first) out += ',';
                first = false;
                render_to(g, out, false);
            }
            out += '}';
            return;
        }
        case Op::And: {
            if (parenthesise_and) out += '(';
            render_to(f->lhs(), out, false);  // '&' associates to the left
            out += " & ";
            render_to(f->rhs(), out, true);
            if (parenthesise_and) out += ')';
            return;
        }
    }
}

}  // namespace

std::string render(const FormulaPtr& f) {
    std::string out;
    render_to(f, out, false);
    return out;
}

namespace {

void dump_to(const FormulaPtr& f, std::string& out, int indent) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    switch (f->op()) {
        case Op::Atom: out += "Atom " + f->atom_name() + "\n"; return;
        case Op::Top: out += "Top\n"; return;
        case Op::Neg: out += "Neg\n"; dump_to(f->lhs(), out, indent + 1); return;
        case Op::Box: out += "Box\n"; dump_to(f->lhs(), out, indent + 1); return;
        case Op::CoDeriv: out += "CoDeriv\n"; dump_to(f->lhs(), out, indent + 1); return;
        case Op::Univ: out += "Univ\n"; dump_to(f->lhs(), out, indent + 1); return;
        case Op::DiffBox: out += "DiffBox\n"; dump_to(f->lhs(), out, indent + 1); return;
        case Op::Count:
            out += "Count " + std::to_string(f->count_bound()) + "\n";
            dump_to(f->lhs(), out, indent + 1);
            return;
        case Op::And:
            out += "And\n";
            dump_to(f->lhs(), out, indent + 1);
            dump_to(f->rhs(), out, indent + 1);
            return;
        case Op::Tangle:
            out += "Tangle\n";
            for (const auto& g : f->tangle_set()) dump_to(g, out, indent + 1);
            return;
    }
}

}  // namespace

std::string dump_tree(const FormulaPtr& f) {
    std::string out;
    dump_to(f, out, 0);
    return out;
}

// ---- classification -------------------------------------------------------

namespace {

int classify_walk(const FormulaPtr& f, Fragment& fr) {
    switch (f->op()) {
        case Op::Atom:
        case Op::Top:
            return 0;
        case Op::Neg:
            return classify_walk(f->lhs(), fr);
        case Op::And:
            return std::max(classify_walk(f->lhs(), fr), classify_walk(f->rhs(), fr));
        case Op::Box:
            fr.uses_box = true;
            return 1 + classify_walk(f->lhs(), fr);
        case Op::CoDeriv:
            fr.uses_coderiv = true;
            return 1 + classify_walk(f->lhs(), fr);
        case Op::Univ:
            fr.uses_univ = true;
            return 1 + classify_walk(f->lhs(), fr);
        case Op::DiffBox:
            fr.uses_diff = true;
            return 1 + classify_walk(f->lhs(), fr);
        case Op::Count:
            fr.uses_count = true;
            return 1 + classify_walk(f->lhs(), fr);
        case Op::Tangle: {
            fr.uses_tangle = true;
            int d = 0;
            for (const auto& g : f->tangle_set()) d = std::max(d, classify_walk(g, fr));
            return 1 + d;
        }
    }
    return 0;
}

}  // namespace

Fragment classify(const FormulaPtr& f) {
    Fragment fr;
    fr.modal_depth = classify_walk(f, fr);
    return fr;
}

// ---- rewrites -------------------------------------------------------------

namespace {

FormulaPtr rewrite_walk(const FormulaPtr& f, RewriteRule rule) {
    auto rw = [rule](const FormulaPtr& g) { return rewrite_walk(g, rule); };
    switch (f->op()) {
        case Op::Atom:
        case Op::Top:
            return f;
        case Op::Neg: return make_neg(rw(f->lhs()));
        case Op::And: return make_and(rw(f->lhs()), rw(f->rhs()));
        case Op::Box: {
            FormulaPtr c = rw(f->lhs());
            if (rule == RewriteRule::BoxToCoderiv) return make_and(c, make_coderiv(c));
            if (rule == RewriteRule::BoxToTangle) return make_neg(make_tangle({make_neg(c)}));
            return make_box(c);
        }
        case Op::CoDeriv: return make_coderiv(rw(f->lhs()));
        case Op::Univ: {
            FormulaPtr c = rw(f->lhs());
            if (rule == RewriteRule::UnivToCount)
                return make_neg(make_count(0, make_neg(c)));
            if (rule == RewriteRule::ExistsToDiff) {
                // A f == ~E~f, then E g == g | <!=>g.
                FormulaPtr g = make_neg(c);
                return make_neg(make_or(g, make_diffdia(g)));
            }
            return make_univ(c);
        }
        case Op::DiffBox: {
            FormulaPtr c = rw(f->lhs());
            if (rule == RewriteRule::DiffToUnivCount1) {
                // [!=]f == ~<!=>~f, then <!=>g == (~g -> E g) & (g -> <c 1>g).
                FormulaPtr g = make_neg(c);
                return make_neg(make_and(make_imp(make_neg(g), make_exists(g)),
                                         make_imp(g, make_count(1, g))));
            }
            return make_diffbox(c);
        }
        case Op::Count: {
            FormulaPtr c = rw(f->lhs());
            if (rule == RewriteRule::Count1ToDiff && f->count_bound() == 1) {
                // <c 1>f == E(f & <!=>f), with E g == g | <!=>g.
                FormulaPtr g = make_and(c, make_diffdia(c));
                return make_or(g, make_diffdia(g));
            }
            return make_count(f->count_bound(), c);
        }
        case Op::Tangle: {
            std::vector<FormulaPtr> fs;
            fs.reserve(f->tangle_set().size());
            for (const auto& g : f->tangle_set()) fs.push_back(rw(g));
            return make_tangle(std::move(fs));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

FormulaPtr rewrite_eliminate(const FormulaPtr& f, RewriteRule rule) {
    return rewrite_walk(f, rule);
}

}  // namespace topomodal
