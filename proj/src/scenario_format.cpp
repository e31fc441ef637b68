// Copyright 2026 The weakhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "weakhist/scenario_format.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "weakhist/errors.hpp"

namespace weakhist {

// ===========================================================================
// Expressions
// ===========================================================================

Complex Expr::evaluate() const {
    switch (op) {
    case Op::Number:
        return imaginary ? Complex(0.0, number) : Complex(number, 0.0);
    case Op::Neg:
        return -args.at(0).evaluate();
    case Op::Add:
        return args.at(0).evaluate() + args.at(1).evaluate();
    case Op::Sub:
        return args.at(0).evaluate() - args.at(1).evaluate();
    case Op::Mul:
        return args.at(0).evaluate() * args.at(1).evaluate();
    case Op::Div:
        return args.at(0).evaluate() / args.at(1).evaluate();
    case Op::Sqrt:
        return std::sqrt(args.at(0).evaluate());
    }
    return {};
}

namespace {

Expr number(double v, bool imaginary = false) {
    Expr e;
    e.number = v;
    e.imaginary = imaginary;
    return e;
}

Expr unary(Expr::Op op, Expr arg) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(arg));
    return e;
}

Expr binary(Expr::Op op, Expr lhs, Expr rhs) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

// ===========================================================================
// Lexer
// ===========================================================================

enum class Tok { Ident, Number, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text; // identifier text or the symbol character
    double value = 0.0;
    bool imaginary = false;
    std::size_t column = 0;

    [[nodiscard]] bool is(char c) const { return kind == Tok::Sym && text.size() == 1 && text[0] == c; }
    [[nodiscard]] bool is_word(std::string_view w) const { return kind == Tok::Ident && text == w; }
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80;
}

// Multi-byte symbols accepted as aliases of ASCII operators.
struct Alias {
    std::string_view utf8;
    char sym;
};
constexpr Alias kAliases[] = {
    {"\xE2\x88\x9A", 'r'}, // √ (radical)
    {"\xE2\x9F\xA8", '<'}, // ⟨
    {"\xE2\x9F\xA9", '>'}, // ⟩
    {"\xE2\x88\x92", '-'}, // − (minus sign)
};

std::vector<Token> lex_line(std::string_view line, std::size_t line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const auto c = static_cast<unsigned char>(line[i]);
        const std::size_t col = i + 1;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        bool aliased = false;
        for (const auto &a : kAliases) {
            if (line.substr(i, a.utf8.size()) == a.utf8) {
                Token t{Tok::Sym, std::string(1, a.sym), 0.0, false, col};
                out.push_back(t);
                i += a.utf8.size();
                aliased = true;
                break;
            }
        }
        if (aliased) {
            continue;
        }
        if (std::isdigit(c) || (c == '.' && i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
            std::size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            if (j < line.size() && line[j] == '.') {
                ++j;
                while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            }
            if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
                if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
                    while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) ++k;
                    j = k;
                }
            }
            Token t{Tok::Number, std::string(line.substr(i, j - i)), 0.0, false, col};
            const auto res = std::from_chars(line.data() + i, line.data() + j, t.value);
            if (res.ec != std::errc() || res.ptr != line.data() + j) {
                throw ParseError(line_no, col, "malformed number '" + t.text + "'");
            }
            if (j < line.size() && line[j] == 'i' &&
                (j + 1 >= line.size() || !ident_char(static_cast<unsigned char>(line[j + 1])))) {
                t.imaginary = true;
                ++j;
            }
            if (j < line.size() && ident_char(static_cast<unsigned char>(line[j])) &&
                static_cast<unsigned char>(line[j]) < 0x80) {
                throw ParseError(line_no, j + 1, "unexpected character after number");
            }
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(static_cast<unsigned char>(line[j]))) {
                bool stop = false;
                for (const auto &a : kAliases) {
                    if (line.substr(j, a.utf8.size()) == a.utf8) {
                        stop = true;
                        break;
                    }
                }
                if (stop) break;
                ++j;
            }
            if (j == i) {
                throw ParseError(line_no, col, "unexpected character");
            }
            out.push_back(Token{Tok::Ident, std::string(line.substr(i, j - i)), 0.0, false, col});
            i = j;
            continue;
        }
        if (std::string_view("+-*/(),=|<>").find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back(Token{Tok::Sym, std::string(1, static_cast<char>(c)), 0.0, false, col});
            ++i;
            continue;
        }
        throw ParseError(line_no, col, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
    out.push_back(Token{Tok::End, "", 0.0, false, line.size() + 1});
    return out;
}

// ===========================================================================
// Parser
// ===========================================================================

const std::set<std::string, std::less<>> kReserved = {"sqrt", "span", "normalize"};

class LineParser {
public:
    LineParser(std::vector<Token> toks, std::size_t line) : toks_(std::move(toks)), line_(line) {}

    Statement statement() {
        const Token &kw = peek();
        if (kw.kind != Tok::Ident) {
            fail(kw, "expected a statement keyword");
        }
        Statement st = dispatch(kw.text);
        expect_end();
        return st;
    }

private:
    Statement dispatch(const std::string &kw) {
        if (kw == "basis") {
            advance();
            BasisStmt b;
            while (peek().kind == Tok::Ident) {
                b.labels.push_back(declared_name("basis label"));
            }
            if (b.labels.empty()) {
                fail(peek(), "expected at least one basis label");
            }
            return b;
        }
        if (kw == "state") {
            advance();
            StateStmt s;
            s.name = declared_name("state name");
            expect_sym('=');
            s.vec = vec_expr(/*stop_at_comma=*/false);
            if (peek().is_word("normalize")) {
                advance();
                s.normalize = true;
            }
            return s;
        }
        if (kw == "pre" || kw == "post") {
            advance();
            return SelectStmt{kw == "pre", ident("state name")};
        }
        if (kw == "proj") {
            advance();
            ProjStmt p;
            p.name = declared_name("projector name");
            expect_sym('=');
            if (peek().kind == Tok::Number && peek().text == "1" && !peek().imaginary &&
                peek(1).is('-')) {
                advance();
                advance();
                p.proj.kind = ProjExpr::Kind::Complement;
                p.proj.name = ident("projector name");
            } else {
                p.proj = proj_expr();
            }
            return p;
        }
        if (kw == "obs") {
            advance();
            ObsStmt o;
            o.name = declared_name("observable name");
            expect_sym('=');
            bool negated = false;
            if ((peek().is('-') || peek().is('+'))) {
                negated = peek().is('-');
                advance();
            }
            for (;;) {
                ObsTerm t;
                t.negated = negated;
                t.coef = expr();
                expect_sym('*');
                t.proj = proj_expr();
                o.terms.push_back(std::move(t));
                if (peek().is('+') || peek().is('-')) {
                    negated = peek().is('-');
                    advance();
                    continue;
                }
                break;
            }
            return o;
        }
        if (kw == "expect") {
            advance();
            ExpectStmt e;
            const Token &k = peek();
            const std::string kind = ident("expectation kind");
            if (kind == "weakvalue") e.kind = ExpectKind::WeakValue;
            else if (kind == "abl") e.kind = ExpectKind::Abl;
            else if (kind == "weight") e.kind = ExpectKind::Weight;
            else if (kind == "consistency") e.kind = ExpectKind::Consistency;
            else fail(k, "unknown expectation kind '" + kind + "'");
            e.observable = ident("observable name");
            if (e.kind == ExpectKind::Abl) {
                e.outcome = expr();
            }
            expect_sym('=');
            e.value = expr();
            return e;
        }
        fail(peek(), "unknown statement '" + kw + "'");
    }

    // vec_expr := ['-'|'+'] vterm (('+'|'-') vterm)*
    VecExpr vec_expr(bool stop_at_comma) {
        VecExpr v;
        bool negated = false;
        if (peek().is('-') || peek().is('+')) {
            negated = peek().is('-');
            advance();
        }
        for (;;) {
            VecTerm t;
            t.negated = negated;
            if (peek().kind != Tok::Ident || peek().is_word("sqrt")) {
                t.coef = expr();
                if (peek().is('*')) {
                    advance();
                }
            }
            t.name = ident("basis label or state name");
            v.terms.push_back(std::move(t));
            if (peek().is('+') || peek().is('-')) {
                negated = peek().is('-');
                advance();
                continue;
            }
            if (stop_at_comma && (peek().is(',') || peek().is(')'))) {
                break;
            }
            break;
        }
        return v;
    }

    ProjExpr proj_expr() {
        ProjExpr p;
        if (peek().is('|')) {
            advance();
            p.kind = ProjExpr::Kind::Ket;
            p.name = ident("basis label or state name");
            expect_sym('>');
            expect_sym('<');
            const Token &bra = peek();
            const std::string other = ident("basis label or state name");
            if (other != p.name) {
                fail(bra, "bra '" + other + "' must match ket '" + p.name + "'");
            }
            expect_sym('|');
            return p;
        }
        if (peek().is_word("span") && peek(1).is('(')) {
            advance();
            advance();
            p.kind = ProjExpr::Kind::Span;
            if (peek().is(')')) {
                advance();
                return p;
            }
            for (;;) {
                p.span.push_back(vec_expr(/*stop_at_comma=*/true));
                if (peek().is(',')) {
                    advance();
                    continue;
                }
                expect_sym(')');
                break;
            }
            return p;
        }
        p.kind = ProjExpr::Kind::Ref;
        p.name = ident("projector name");
        return p;
    }

    // expr := mul (('+'|'-') mul)*
    Expr expr() {
        Expr lhs = mul();
        while (peek().is('+') || peek().is('-')) {
            // '+'/'-' followed by a bare name separates vector terms.
            if (peek(1).kind == Tok::Ident && !starts_primary(peek(1))) {
                break;
            }
            const bool plus = peek().is('+');
            advance();
            Expr rhs = mul();
            lhs = binary(plus ? Expr::Op::Add : Expr::Op::Sub, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr mul() {
        Expr lhs = unary_expr();
        for (;;) {
            if (peek().is('*') && starts_primary(peek(1))) {
                advance();
                lhs = binary(Expr::Op::Mul, std::move(lhs), unary_expr());
            } else if (peek().is('/')) {
                advance();
                lhs = binary(Expr::Op::Div, std::move(lhs), unary_expr());
            } else {
                return lhs;
            }
        }
    }

    Expr unary_expr() {
        if (peek().is('-')) {
            advance();
            return unary(Expr::Op::Neg, unary_expr());
        }
        if (peek().is('+')) {
            advance();
            return unary_expr();
        }
        return primary();
    }

    Expr primary() {
        const Token &t = peek();
        if (t.kind == Tok::Number) {
            Expr e = number(t.value, t.imaginary);
            advance();
            return e;
        }
        if (t.is('(')) {
            advance();
            Expr e = expr();
            expect_sym(')');
            return e;
        }
        if (t.is_word("sqrt")) {
            advance();
            expect_sym('(');
            Expr e = expr();
            expect_sym(')');
            return unary(Expr::Op::Sqrt, std::move(e));
        }
        if (t.is('r')) { // radical sign
            advance();
            return unary(Expr::Op::Sqrt, primary());
        }
        fail(t, "expected a number, '(' or sqrt");
    }

    static bool starts_primary(const Token &t) {
        return t.kind == Tok::Number || t.is('(') || t.is('-') || t.is('+') || t.is('r') ||
               t.is_word("sqrt");
    }

    std::string ident(const char *what) {
        const Token &t = peek();
        if (t.kind != Tok::Ident) {
            fail(t, std::string("expected ") + what);
        }
        std::string s = t.text;
        advance();
        return s;
    }

    std::string declared_name(const char *what) {
        const Token &t = peek();
        std::string s = ident(what);
        if (kReserved.contains(s)) {
            fail(t, "'" + s + "' is a reserved word");
        }
        return s;
    }

    void expect_sym(char c) {
        if (!peek().is(c)) {
            fail(peek(), std::string("expected '") + c + "'");
        }
        advance();
    }

    void expect_end() {
        if (peek().kind != Tok::End) {
            fail(peek(), "unexpected '" + peek().text + "'");
        }
    }

    [[noreturn]] void fail(const Token &t, const std::string &msg) const {
        throw ParseError(line_, t.column, msg);
    }

    const Token &peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    void advance() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }

    std::vector<Token> toks_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// ===========================================================================
// Formatting
// ===========================================================================

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_expr(const Expr &e);

std::string format_wrapped(const Expr &e) {
    // Numbers and sqrt(...) are atomic; binary ops carry their own parens.
    if (e.op == Expr::Op::Neg) {
        return "(" + format_expr(e) + ")";
    }
    return format_expr(e);
}

std::string format_expr(const Expr &e) {
    switch (e.op) {
    case Expr::Op::Number:
        return format_double(e.number) + (e.imaginary ? "i" : "");
    case Expr::Op::Neg:
        return "-" + format_wrapped(e.args.at(0));
    case Expr::Op::Sqrt:
        return "sqrt(" + format_expr(e.args.at(0)) + ")";
    case Expr::Op::Add:
    case Expr::Op::Sub:
    case Expr::Op::Mul:
    case Expr::Op::Div: {
        const char *op = e.op == Expr::Op::Add   ? " + "
                         : e.op == Expr::Op::Sub ? " - "
                         : e.op == Expr::Op::Mul ? " * "
                                                 : " / ";
        return "(" + format_expr(e.args.at(0)) + op + format_expr(e.args.at(1)) + ")";
    }
    }
    return {};
}

std::string format_vec(const VecExpr &v) {
    std::string out;
    for (std::size_t i = 0; i < v.terms.size(); ++i) {
        const auto &t = v.terms[i];
        if (i == 0) {
            out += t.negated ? "-" : "";
        } else {
            out += t.negated ? " - " : " + ";
        }
        if (t.coef) {
            out += format_wrapped(*t.coef) + " ";
        }
        out += t.name;
    }
    return out;
}

std::string format_proj(const ProjExpr &p) {
    switch (p.kind) {
    case ProjExpr::Kind::Ref: return p.name;
    case ProjExpr::Kind::Ket: return "|" + p.name + "><" + p.name + "|";
    case ProjExpr::Kind::Complement: return "1 - " + p.name;
    case ProjExpr::Kind::Span: {
        std::string out = "span(";
        for (std::size_t i = 0; i < p.span.size(); ++i) {
            out += (i ? ", " : "") + format_vec(p.span[i]);
        }
        return out + ")";
    }
    }
    return {};
}

struct StatementFormatter {
    std::string operator()(const NameStmt &s) const { return "name " + s.name; }
    std::string operator()(const BasisStmt &s) const {
        std::string out = "basis";
        for (const auto &l : s.labels) out += " " + l;
        return out;
    }
    std::string operator()(const StateStmt &s) const {
        return "state " + s.name + " = " + format_vec(s.vec) + (s.normalize ? " normalize" : "");
    }
    std::string operator()(const SelectStmt &s) const {
        return std::string(s.is_pre ? "pre " : "post ") + s.name;
    }
    std::string operator()(const ProjStmt &s) const {
        return "proj " + s.name + " = " + format_proj(s.proj);
    }
    std::string operator()(const ObsStmt &s) const {
        std::string out = "obs " + s.name + " =";
        for (std::size_t i = 0; i < s.terms.size(); ++i) {
            const auto &t = s.terms[i];
            if (i == 0) {
                out += t.negated ? " -" : " ";
            } else {
                out += t.negated ? " - " : " + ";
            }
            out += format_wrapped(t.coef) + " * " + format_proj(t.proj);
        }
        return out;
    }
    std::string operator()(const ExpectStmt &s) const {
        std::string out = "expect " + std::string(expect_kind_name(s.kind)) + " " + s.observable;
        if (s.outcome) out += " " + format_expr(*s.outcome);
        return out + " = " + format_expr(s.value);
    }
};

// ===========================================================================
// Building
// ===========================================================================

class Builder {
public:
    Scenario build(const ScenarioDoc &doc, bool check) {
        std::size_t last_line = 0;
        for (const auto &ps : doc.statements) {
            pos_ = ps.pos;
            last_line = ps.pos.line;
            std::visit([this](const auto &st) { apply(st); }, ps.stmt);
        }
        pos_ = {last_line + 1, 1};
        if (!basis_) fail(ErrorKind::Parse, "missing 'basis' statement");
        if (!pre_) fail(ErrorKind::Parse, "missing 'pre' statement");
        if (!post_) fail(ErrorKind::Parse, "missing 'post' statement");
        Scenario s{name_.value_or("unnamed"), *basis_, *pre_, *post_,
                   std::move(observables_), std::move(states_), std::move(expected_)};
        if (check) check_expectations(s);
        return s;
    }

private:
    void apply(const NameStmt &s) {
        if (name_) fail(ErrorKind::Parse, "duplicate 'name' statement");
        name_ = s.name;
    }

    void apply(const BasisStmt &s) {
        if (basis_) fail(ErrorKind::Parse, "duplicate 'basis' statement");
        for (const auto &l : s.labels) claim(l);
        basis_ = Basis(s.labels);
    }

    void apply(const StateStmt &s) {
        require_basis();
        claim(s.name);
        const CVec v = eval_vec(s.vec);
        const double n = v.norm();
        if (std::abs(n - 1.0) <= kTolerance) {
            states_.emplace(s.name, State(v, s.name));
        } else if (n > 0.0 && (s.normalize || std::abs(n - 1.0) <= 1e-6)) {
            states_.emplace(s.name, State::normalized(v, s.name));
        } else {
            std::ostringstream msg;
            msg.precision(12);
            msg << "state '" << s.name << "' has norm " << n << "; add 'normalize' to rescale it";
            fail(ErrorKind::Normalization, msg.str());
        }
    }

    void apply(const SelectStmt &s) {
        auto it = states_.find(s.name);
        if (it == states_.end()) fail(ErrorKind::UnknownName, "unknown state '" + s.name + "'");
        auto &slot = s.is_pre ? pre_ : post_;
        if (slot) fail(ErrorKind::Parse, std::string("duplicate '") + (s.is_pre ? "pre" : "post") + "' statement");
        slot = it->second;
    }

    void apply(const ProjStmt &s) {
        require_basis();
        claim(s.name);
        observables_.emplace(s.name, Observable::from_projector(eval_proj(s.proj)));
    }

    void apply(const ObsStmt &s) {
        require_basis();
        claim(s.name);
        CMat m = CMat::zero(*basis_);
        for (const auto &t : s.terms) {
            Complex c = t.coef.evaluate();
            if (t.negated) c = -c;
            check_finite(c);
            if (std::abs(c.imag()) > 1e-12) {
                fail(ErrorKind::NotHermitian, "observable '" + s.name + "' has a non-real coefficient");
            }
            m = m + Complex(c.real(), 0.0) * eval_proj(t.proj).mat();
        }
        try {
            observables_.emplace(s.name, spectral_decompose(m));
        } catch (const Error &e) {
            fail(e.kind(), e.what());
        }
    }

    void apply(const ExpectStmt &s) {
        if (!observables_.contains(s.observable)) {
            fail(ErrorKind::UnknownName, "unknown observable '" + s.observable + "'");
        }
        Expectation e{s.kind, s.observable, 0.0, s.value.evaluate()};
        check_finite(e.value);
        if (s.outcome) {
            const Complex o = s.outcome->evaluate();
            check_finite(o);
            if (std::abs(o.imag()) > 0.0) fail(ErrorKind::Parse, "ABL outcome must be real");
            e.outcome = o.real();
        }
        expected_.push_back(std::move(e));
        expect_pos_.push_back(pos_);
    }

    // Each failing fixture is reported at its own 'expect' line.
    void check_expectations(const Scenario &s) {
        for (std::size_t i = 0; i < s.expected.size(); ++i) {
            pos_ = expect_pos_[i];
            const Expectation &e = s.expected[i];
            Complex actual;
            try {
                actual = evaluate(s, e);
            } catch (const Error &err) {
                fail(err.kind(), err.what());
            }
            if (std::abs(actual - e.value) > kTolerance) {
                std::ostringstream msg;
                msg.precision(12);
                msg << "expected " << expect_kind_name(e.kind) << " of '" << e.observable << "' to be "
                    << e.value << " but computed " << actual;
                fail(ErrorKind::Fixture, msg.str());
            }
        }
    }

    CVec eval_vec(const VecExpr &v) {
        CVec acc = CVec::zero(*basis_);
        for (const auto &t : v.terms) {
            Complex c = t.coef ? t.coef->evaluate() : Complex(1.0, 0.0);
            if (t.negated) c = -c;
            check_finite(c);
            acc = acc + c * named_vector(t.name);
        }
        return acc;
    }

    CVec named_vector(const std::string &name) {
        if (auto i = basis_->find(name)) {
            return CVec::basis_vector(*basis_, *i);
        }
        if (auto it = states_.find(name); it != states_.end()) {
            return it->second.vec();
        }
        fail(ErrorKind::UnknownName, "unknown basis label or state '" + name + "'");
    }

    Projector eval_proj(const ProjExpr &p) {
        switch (p.kind) {
        case ProjExpr::Kind::Ket: {
            const CVec v = named_vector(p.name);
            return Projector::onto(v);
        }
        case ProjExpr::Kind::Span: {
            if (p.span.empty()) return Projector(CMat::zero(*basis_));
            std::vector<CVec> vs;
            for (const auto &v : p.span) vs.push_back(eval_vec(v));
            return Projector::span(vs);
        }
        case ProjExpr::Kind::Ref:
        case ProjExpr::Kind::Complement: {
            auto it = observables_.find(p.name);
            if (it == observables_.end()) fail(ErrorKind::UnknownName, "unknown projector '" + p.name + "'");
            try {
                Projector base = it->second.as_projector();
                return p.kind == ProjExpr::Kind::Ref ? base : base.complement();
            } catch (const Error &e) {
                fail(e.kind(), "'" + p.name + "': " + e.what());
            }
        }
        }
        fail(ErrorKind::Parse, "bad projector expression");
    }

    void claim(const std::string &name) {
        if (!names_.insert(name).second) {
            fail(ErrorKind::Parse, "name '" + name + "' is already declared");
        }
    }

    void require_basis() const {
        if (!basis_) fail(ErrorKind::Parse, "'basis' must be declared first");
    }

    void check_finite(Complex c) const {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            fail(ErrorKind::InvalidArgument, "coefficient is not finite");
        }
    }

    [[noreturn]] void fail(ErrorKind kind, const std::string &msg) const {
        if (kind == ErrorKind::Parse) {
            throw ParseError(pos_.line, pos_.column, msg);
        }
        throw Error(kind, std::to_string(pos_.line) + ":" + std::to_string(pos_.column) + ": " + msg);
    }

    SourcePos pos_;
    std::optional<std::string> name_;
    std::optional<Basis> basis_;
    std::optional<State> pre_;
    std::optional<State> post_;
    std::map<std::string, Observable> observables_;
    std::map<std::string, State> states_;
    std::vector<Expectation> expected_;
    std::vector<SourcePos> expect_pos_;
    std::set<std::string> names_;
};

// ===========================================================================
// Scenario -> document
// ===========================================================================

/// Coefficient expression for c, with the sign of the real part (or of the
/// imaginary part when purely imaginary) pulled out into `negated`.
Expr complex_expr(Complex c, bool &negated) {
    if (c.imag() == 0.0) {
        negated = std::signbit(c.real());
        return number(std::abs(c.real()));
    }
    if (c.real() == 0.0) {
        negated = std::signbit(c.imag());
        return number(std::abs(c.imag()), true);
    }
    negated = std::signbit(c.real());
    const double im = negated ? -c.imag() : c.imag();
    return binary(std::signbit(im) ? Expr::Op::Sub : Expr::Op::Add, number(std::abs(c.real())),
                  number(std::abs(im), true));
}

Expr signed_expr(Complex c) {
    bool negated = false;
    Expr e = complex_expr(c, negated);
    return negated ? unary(Expr::Op::Neg, std::move(e)) : e;
}

VecExpr vec_to_expr(const Eigen::VectorXcd &amps, const Basis &basis) {
    VecExpr v;
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        if (amps(i) == Complex(0.0, 0.0)) continue;
        VecTerm t;
        t.coef = complex_expr(amps(i), t.negated);
        t.name = basis.label(static_cast<std::size_t>(i));
        v.terms.push_back(std::move(t));
    }
    return v;
}

ProjExpr proj_to_expr(const Projector &p) {
    ProjExpr out;
    out.kind = ProjExpr::Kind::Span;
    const auto &m = p.mat().entries();
    const Basis &basis = p.basis();
    const Eigen::MatrixXcd diag = m.diagonal().asDiagonal();
    bool aligned = (m - diag).cwiseAbs().maxCoeff() == 0.0;
    for (Eigen::Index i = 0; aligned && i < m.rows(); ++i) {
        aligned = m(i, i) == Complex(0.0, 0.0) || m(i, i) == Complex(1.0, 0.0);
    }
    if (aligned) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, i) == Complex(1.0, 0.0)) {
                out.span.push_back(VecExpr{{VecTerm{false, std::nullopt, basis.label(static_cast<std::size_t>(i))}}});
            }
        }
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        if (solver.eigenvalues()(k) > 0.5) {
            out.span.push_back(vec_to_expr(solver.eigenvectors().col(k), basis));
        }
    }
    return out;
}

template <typename S>
PositionedStatement positioned(S s) {
    return PositionedStatement{Statement(std::move(s)), {}};
}

} // namespace

// ===========================================================================
// Public API
// ===========================================================================

ScenarioDoc parse_document(std::string_view text) {
    ScenarioDoc doc;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const std::string_view body = trim(line);
        if (!body.empty()) {
            const std::size_t indent = static_cast<std::size_t>(body.data() - line.data());
            const SourcePos pos{line_no, indent + 1};
            if (body.substr(0, 4) == "name" &&
                (body.size() == 4 || body[4] == ' ' || body[4] == '\t')) {
                const std::string_view rest = trim(body.substr(4));
                if (rest.empty()) {
                    throw ParseError(line_no, indent + body.size() + 1, "expected a scenario name");
                }
                doc.statements.push_back({NameStmt{std::string(rest)}, pos});
            } else {
                LineParser parser(lex_line(line, line_no), line_no);
                doc.statements.push_back({parser.statement(), pos});
            }
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    return doc;
}

std::string format_document(const ScenarioDoc &doc) {
    std::string out;
    for (const auto &ps : doc.statements) {
        out += std::visit(StatementFormatter{}, ps.stmt);
        out += '\n';
    }
    return out;
}

Scenario build_scenario(const ScenarioDoc &doc) { return Builder{}.build(doc, true); }

Scenario build_scenario_unchecked(const ScenarioDoc &doc) { return Builder{}.build(doc, false); }

Scenario parse_scenario(std::string_view text) { return build_scenario(parse_document(text)); }

ScenarioDoc to_document(const Scenario &s) {
    ScenarioDoc doc;
    doc.statements.push_back(positioned(NameStmt{s.name}));
    doc.statements.push_back(positioned(BasisStmt{s.basis.labels()}));
    for (const auto &[name, st] : s.states) {
        doc.statements.push_back(positioned(StateStmt{name, vec_to_expr(st.vec().amplitudes(), s.basis), false}));
    }
    doc.statements.push_back(positioned(SelectStmt{true, s.pre.label()}));
    doc.statements.push_back(positioned(SelectStmt{false, s.post.label()}));
    for (const auto &[name, obs] : s.observables) {
        bool is_projector = true;
        for (double l : obs.eigenvalues()) {
            is_projector = is_projector && (l == 0.0 || l == 1.0);
        }
        if (is_projector) {
            doc.statements.push_back(positioned(ProjStmt{name, proj_to_expr(obs.as_projector())}));
            continue;
        }
        ObsStmt o{name, {}};
        for (const auto &term : obs.spectrum()) {
            ObsTerm t;
            t.negated = std::signbit(term.eigenvalue);
            t.coef = number(std::abs(term.eigenvalue));
            t.proj = proj_to_expr(term.projector);
            o.terms.push_back(std::move(t));
        }
        doc.statements.push_back(positioned(std::move(o)));
    }
    for (const auto &e : s.expected) {
        ExpectStmt st;
        st.kind = e.kind;
        st.observable = e.observable;
        if (e.kind == ExpectKind::Abl) st.outcome = signed_expr(e.outcome);
        st.value = signed_expr(e.value);
        doc.statements.push_back(positioned(std::move(st)));
    }
    return doc;
}

std::string serialize_scenario(const Scenario &scenario) {
    return format_document(to_document(scenario));
}

} // namespace weakhist
