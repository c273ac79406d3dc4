#include "catlog/parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <vector>

#include "catlog/errors.hpp"

namespace catlog {

namespace {

enum class Tok {
    Ident, LParen, RParen, Comma, Colon, Dot, Arrow,
    Amp, Pipe, Turnstile, Tilde, Eq, Neq, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::string locate(const Token& t) {
    return " (line " + std::to_string(t.line) + ", col " + std::to_string(t.col) + ")";
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto bump = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') { ++line; col = 1; } else ++col;
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') bump(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) { bump(1); continue; }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            bump(j - i);
            out.push_back({Tok::Ident, word, tl, tc});
            continue;
        }
        switch (c) {
            case '(': out.push_back({Tok::LParen, "(", tl, tc}); bump(1); break;
            case ')': out.push_back({Tok::RParen, ")", tl, tc}); bump(1); break;
            case ',': out.push_back({Tok::Comma, ",", tl, tc}); bump(1); break;
            case ':': out.push_back({Tok::Colon, ":", tl, tc}); bump(1); break;
            case '.': out.push_back({Tok::Dot, ".", tl, tc}); bump(1); break;
            case '&': out.push_back({Tok::Amp, "&", tl, tc}); bump(1); break;
            case '~': out.push_back({Tok::Tilde, "~", tl, tc}); bump(1); break;
            case '=': out.push_back({Tok::Eq, "=", tl, tc}); bump(1); break;
            case '-':
                if (i + 1 < text.size() && text[i + 1] == '>') {
                    out.push_back({Tok::Arrow, "->", tl, tc});
                    bump(2);
                } else {
                    throw SyntaxError("unexpected character '-'", tl, tc);
                }
                break;
            case '|':
                if (i + 1 < text.size() && text[i + 1] == '-') {
                    out.push_back({Tok::Turnstile, "|-", tl, tc});
                    bump(2);
                } else {
                    out.push_back({Tok::Pipe, "|", tl, tc});
                    bump(1);
                }
                break;
            case '!':
                if (i + 1 < text.size() && text[i + 1] == '=') {
                    out.push_back({Tok::Neq, "!=", tl, tc});
                    bump(2);
                } else {
                    throw SyntaxError("unexpected character '!'", tl, tc);
                }
                break;
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", tl, tc);
        }
    }
    out.push_back({Tok::End, "<eof>", line, col});
    return out;
}

const std::set<std::string> kReserved = {
    "theory", "sort", "prop", "op", "pred", "axiom", "true", "false", "exists",
};

bool is_free_var_name(const std::string& s) {
    return s.size() == 1 && std::islower(static_cast<unsigned char>(s[0]));
}

// Union-find over one axiom's free variables; each class may carry one
// concrete sort.
struct FreeVarSolver {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    std::vector<std::size_t> parent;
    std::vector<std::string> sorts;

    std::size_t node(const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        std::size_t id = names.size();
        names.push_back(name);
        index[name] = id;
        parent.push_back(id);
        sorts.emplace_back();
        return id;
    }

    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }

    void constrain(const std::string& name, const std::string& sort, const Token& at) {
        std::size_t r = find(node(name));
        if (sorts[r].empty()) {
            sorts[r] = sort;
        } else if (sorts[r] != sort) {
            throw SortMismatch("variable '" + name + "' used at sorts " + sorts[r] + " and " +
                               sort + locate(at));
        }
    }

    void unite(const std::string& a, const std::string& b, const Token& at) {
        std::size_t ra = find(node(a)), rb = find(node(b));
        if (ra == rb) return;
        if (!sorts[ra].empty() && !sorts[rb].empty() && sorts[ra] != sorts[rb])
            throw SortMismatch("variables '" + a + "' and '" + b + "' equated at sorts " +
                               sorts[ra] + " and " + sorts[rb] + locate(at));
        if (sorts[ra].empty()) std::swap(ra, rb);
        parent[rb] = ra;
    }
};

struct Parser {
    std::vector<Token> toks;
    std::size_t pos = 0;
    Signature sig;
    std::vector<Axiom> axioms;
    std::string theory_name;

    // Per-axiom state.
    std::vector<std::pair<std::string, std::string>> scope;
    FreeVarSolver fv;

    const Token& cur() const { return toks[pos]; }
    const Token& peek() const { return toks[std::min(pos + 1, toks.size() - 1)]; }
    void advance() { if (pos + 1 < toks.size()) ++pos; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(msg + ", found '" + cur().text + "'", cur().line, cur().col);
    }

    bool at_word(const char* w) const { return cur().kind == Tok::Ident && cur().text == w; }

    Token take_ident(const char* what) {
        if (cur().kind != Tok::Ident) fail(std::string("expected ") + what);
        Token t = cur();
        advance();
        return t;
    }

    void expect(Tok k, const char* what) {
        if (cur().kind != k) fail(std::string("expected ") + what);
        advance();
    }

    std::string declared_name(const char* what) {
        Token t = take_ident(what);
        if (kReserved.count(t.text))
            throw SyntaxError("reserved word '" + t.text + "' cannot name a symbol", t.line, t.col);
        if (sig.has_symbol(t.text))
            throw SyntaxError("duplicate symbol name '" + t.text + "'", t.line, t.col);
        return t.text;
    }

    bool at_decl_keyword() const {
        return at_word("sort") || at_word("prop") || at_word("op") || at_word("pred") ||
               at_word("axiom") || at_word("theory");
    }

    const std::string* scoped_sort(const std::string& name) const {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == name) return &it->second;
        return nullptr;
    }

    std::string require_sort(const Token& t) {
        if (kReserved.count(t.text))
            throw SyntaxError("reserved word '" + t.text + "' cannot name a sort", t.line, t.col);
        if (!sig.has_sort(t.text))
            throw SortMismatch("undeclared sort '" + t.text + "'" + locate(t));
        return t.text;
    }

    // --- terms ---

    Term finish_symbol(const Token& head, bool args_present, std::vector<Term> args) {
        if (const std::string* s = scoped_sort(head.text)) {
            if (args_present)
                throw SyntaxError("variable '" + head.text + "' applied to arguments",
                                  head.line, head.col);
            return Term::var(head.text, *s);
        }
        if (const FunctionSym* f = sig.function(head.text)) {
            if (f->arg_sorts.size() != args.size())
                throw ArityMismatch("function '" + head.text + "' expects " +
                                    std::to_string(f->arg_sorts.size()) + " arguments, got " +
                                    std::to_string(args.size()) + locate(head));
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i].is_var() && args[i].sort.empty())
                    fv.constrain(args[i].name, f->arg_sorts[i], head);
                else if (args[i].sort != f->arg_sorts[i])
                    throw SortMismatch("argument " + std::to_string(i + 1) + " of '" + head.text +
                                       "' has sort " + args[i].sort + ", expected " +
                                       f->arg_sorts[i] + locate(head));
            }
            Term t;
            t.kind = Term::Kind::App;
            t.name = head.text;
            t.sort = f->result_sort;
            t.args = std::move(args);
            return t;
        }
        if (sig.predicate(head.text) || sig.has_proposition(head.text))
            throw SyntaxError("'" + head.text + "' is not a function symbol", head.line, head.col);
        if (is_free_var_name(head.text)) {
            if (args_present)
                throw SyntaxError("variable '" + head.text + "' applied to arguments",
                                  head.line, head.col);
            fv.node(head.text);
            return Term::var(head.text, "");
        }
        throw UnknownSymbol("unknown symbol '" + head.text + "'" + locate(head));
    }

    Term parse_term() {
        Token head = take_ident("a term");
        bool args_present = false;
        std::vector<Term> args;
        if (cur().kind == Tok::LParen) {
            args_present = true;
            advance();
            args.push_back(parse_term());
            while (cur().kind == Tok::Comma) {
                advance();
                args.push_back(parse_term());
            }
            expect(Tok::RParen, "')'");
        }
        return finish_symbol(head, args_present, args);
    }

    // Sort of a term for equation constraints: "" means an unresolved free
    // variable (identified by name).
    void constrain_equal(const Term& l, const Term& r, const Token& at) {
        bool lv = l.is_var() && l.sort.empty();
        bool rv = r.is_var() && r.sort.empty();
        if (lv && rv) fv.unite(l.name, r.name, at);
        else if (lv) fv.constrain(l.name, r.sort, at);
        else if (rv) fv.constrain(r.name, l.sort, at);
        else if (l.sort != r.sort)
            throw SortMismatch("equation sides have sorts " + l.sort + " and " + r.sort +
                               locate(at));
    }

    // --- formulas ---

    Formula parse_formula() { return parse_implication(); }

    Formula parse_implication() {
        Formula lhs = parse_disjunction();
        if (cur().kind == Tok::Arrow) {
            advance();
            return Formula::implies(std::move(lhs), parse_implication());
        }
        return lhs;
    }

    Formula parse_disjunction() {
        Formula f = parse_conjunction();
        while (cur().kind == Tok::Pipe) {
            advance();
            f = Formula::disj(std::move(f), parse_conjunction());
        }
        return f;
    }

    Formula parse_conjunction() {
        Formula f = parse_unary();
        while (cur().kind == Tok::Amp) {
            advance();
            f = Formula::conj(std::move(f), parse_unary());
        }
        return f;
    }

    Formula parse_unary() {
        if (cur().kind == Tok::Tilde) {
            advance();
            return Formula::neg(parse_unary());
        }
        if (at_word("exists")) return parse_exists();
        return parse_atom();
    }

    Formula parse_exists() {
        advance();
        Token var = take_ident("a bound variable name");
        if (kReserved.count(var.text))
            throw SyntaxError("reserved word '" + var.text + "' cannot name a variable",
                              var.line, var.col);
        if (sig.has_symbol(var.text))
            throw SyntaxError("bound variable '" + var.text + "' shadows a declared symbol",
                              var.line, var.col);
        expect(Tok::Colon, "':'");
        Token sort = take_ident("a sort name");
        std::string s = require_sort(sort);
        expect(Tok::Dot, "'.'");
        scope.emplace_back(var.text, s);
        Formula body = parse_formula();
        scope.pop_back();
        return Formula::exists(var.text, s, std::move(body));
    }

    Formula parse_atom() {
        if (cur().kind == Tok::LParen) {
            advance();
            Formula f = parse_formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at_word("true")) { advance(); return Formula::truth(); }
        if (at_word("false")) { advance(); return Formula::falsity(); }
        if (cur().kind != Tok::Ident) fail("expected a formula");

        Token head = cur();
        advance();
        bool args_present = false;
        std::vector<Term> args;
        if (cur().kind == Tok::LParen) {
            args_present = true;
            advance();
            args.push_back(parse_term());
            while (cur().kind == Tok::Comma) {
                advance();
                args.push_back(parse_term());
            }
            expect(Tok::RParen, "')'");
        }

        if (cur().kind == Tok::Eq || cur().kind == Tok::Neq) {
            bool neq = cur().kind == Tok::Neq;
            Token at = cur();
            advance();
            Term lhs = finish_symbol(head, args_present, std::move(args));
            Term rhs = parse_term();
            constrain_equal(lhs, rhs, at);
            return neq ? Formula::inequation(std::move(lhs), std::move(rhs))
                       : Formula::equation(std::move(lhs), std::move(rhs));
        }

        if (const PredicateSym* p = sig.predicate(head.text)) {
            if (p->arg_sorts.size() != args.size())
                throw ArityMismatch("predicate '" + head.text + "' expects " +
                                    std::to_string(p->arg_sorts.size()) + " arguments, got " +
                                    std::to_string(args.size()) + locate(head));
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i].is_var() && args[i].sort.empty())
                    fv.constrain(args[i].name, p->arg_sorts[i], head);
                else if (args[i].sort != p->arg_sorts[i])
                    throw SortMismatch("argument " + std::to_string(i + 1) + " of '" + head.text +
                                       "' has sort " + args[i].sort + ", expected " +
                                       p->arg_sorts[i] + locate(head));
            }
            return Formula::predicate(head.text, std::move(args));
        }
        if (sig.has_proposition(head.text)) {
            if (args_present)
                throw SyntaxError("proposition '" + head.text + "' applied to arguments",
                                  head.line, head.col);
            return Formula::prop(head.text);
        }
        if (args_present || sig.function(head.text) || scoped_sort(head.text) ||
            is_free_var_name(head.text))
            throw SyntaxError("term '" + head.text + "...' is not a formula (expected = or !=)",
                              head.line, head.col);
        throw UnknownSymbol("unknown symbol '" + head.text + "'" + locate(head));
    }

    void resolve_axiom_sorts(Formula& f, const std::map<std::string, std::string>& resolved) {
        auto fill = [&](Term& t, auto&& self) -> void {
            if (t.is_var()) {
                if (t.sort.empty()) t.sort = resolved.at(t.name);
                return;
            }
            for (auto& a : t.args) self(a, self);
        };
        for (auto& t : f.terms) fill(t, fill);
        for (auto& c : f.children) resolve_axiom_sorts(c, resolved);
    }

    void parse_axiom() {
        Token kw = cur();
        advance();
        scope.clear();
        fv = FreeVarSolver{};
        Formula first = parse_formula();
        bool sequent = false;
        Formula second;
        if (cur().kind == Tok::Turnstile) {
            sequent = true;
            advance();
            second = parse_formula();
        }
        std::map<std::string, std::string> resolved;
        for (std::size_t i = 0; i < fv.names.size(); ++i) {
            std::size_t r = fv.find(i);
            std::string s = fv.sorts[r];
            if (s.empty()) {
                if (sig.sorts.size() == 1) s = sig.sorts[0];
                else
                    throw SortMismatch("cannot infer sort of variable '" + fv.names[i] + "'" +
                                       locate(kw));
            }
            resolved[fv.names[i]] = s;
        }
        resolve_axiom_sorts(first, resolved);
        if (sequent) {
            resolve_axiom_sorts(second, resolved);
            axioms.push_back(make_sequent(sig, std::move(first), std::move(second)));
        } else {
            axioms.push_back(make_axiom(sig, std::move(first)));
        }
    }

    void parse_decl() {
        if (at_word("sort")) {
            advance();
            bool any = false;
            while (cur().kind == Tok::Ident && !at_decl_keyword()) {
                sig.sorts.push_back(declared_name("a sort name"));
                any = true;
            }
            if (!any) fail("expected at least one sort name");
            return;
        }
        if (at_word("prop")) {
            advance();
            bool any = false;
            while (cur().kind == Tok::Ident && !at_decl_keyword()) {
                sig.propositions.push_back(declared_name("a proposition name"));
                any = true;
            }
            if (!any) fail("expected at least one proposition name");
            return;
        }
        if (at_word("op")) {
            advance();
            FunctionSym f;
            f.name = declared_name("a function name");
            expect(Tok::Colon, "':'");
            while (cur().kind == Tok::Ident)
                f.arg_sorts.push_back(require_sort(take_ident("a sort name")));
            expect(Tok::Arrow, "'->'");
            f.result_sort = require_sort(take_ident("a sort name"));
            sig.functions.push_back(std::move(f));
            return;
        }
        if (at_word("pred")) {
            advance();
            PredicateSym p;
            p.name = declared_name("a predicate name");
            expect(Tok::Colon, "':'");
            while (cur().kind == Tok::Ident && !at_decl_keyword())
                p.arg_sorts.push_back(require_sort(take_ident("a sort name")));
            sig.predicates.push_back(std::move(p));
            return;
        }
        if (at_word("axiom")) {
            parse_axiom();
            return;
        }
        fail("expected a declaration (sort, prop, op, pred, axiom)");
    }

    Theory run() {
        if (!at_word("theory")) fail("expected 'theory'");
        advance();
        theory_name = take_ident("a theory name").text;
        while (cur().kind != Tok::End) parse_decl();
        sig.validate();
        Theory t;
        t.name = theory_name;
        t.signature = std::move(sig);
        t.axioms = std::move(axioms);
        t.fragment = least_fragment(t.signature, t.axioms);
        return t;
    }
};

} // namespace

Theory parse_theory(const std::string& text) {
    Parser p;
    p.toks = lex(text);
    return p.run();
}

} // namespace catlog
