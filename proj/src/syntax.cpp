#include "catlog/syntax.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "catlog/errors.hpp"

namespace catlog {

bool Signature::has_sort(const std::string& s) const {
    return std::find(sorts.begin(), sorts.end(), s) != sorts.end();
}

std::size_t Signature::sort_index(const std::string& s) const {
    auto it = std::find(sorts.begin(), sorts.end(), s);
    if (it == sorts.end()) throw UnknownSymbol("unknown sort: " + s);
    return static_cast<std::size_t>(it - sorts.begin());
}

const FunctionSym* Signature::function(const std::string& name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

std::size_t Signature::function_index(const std::string& name) const {
    for (std::size_t i = 0; i < functions.size(); ++i)
        if (functions[i].name == name) return i;
    throw UnknownSymbol("unknown function symbol: " + name);
}

const PredicateSym* Signature::predicate(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

std::size_t Signature::predicate_index(const std::string& name) const {
    for (std::size_t i = 0; i < predicates.size(); ++i)
        if (predicates[i].name == name) return i;
    throw UnknownSymbol("unknown predicate symbol: " + name);
}

bool Signature::has_proposition(const std::string& name) const {
    return std::find(propositions.begin(), propositions.end(), name) != propositions.end();
}

std::size_t Signature::proposition_index(const std::string& name) const {
    auto it = std::find(propositions.begin(), propositions.end(), name);
    if (it == propositions.end()) throw UnknownSymbol("unknown proposition: " + name);
    return static_cast<std::size_t>(it - propositions.begin());
}

bool Signature::has_symbol(const std::string& name) const {
    return function(name) || predicate(name) || has_proposition(name) ||
           std::find(sorts.begin(), sorts.end(), name) != sorts.end();
}

void Signature::validate() const {
    std::set<std::string> seen;
    auto claim = [&](const std::string& n, const char* cls) {
        if (!seen.insert(n).second)
            throw ValidationError(std::string("duplicate symbol name '") + n + "' (" + cls + ")");
    };
    for (const auto& s : sorts) claim(s, "sort");
    for (const auto& f : functions) claim(f.name, "function");
    for (const auto& p : predicates) claim(p.name, "predicate");
    for (const auto& p : propositions) claim(p, "proposition");
    auto need_sort = [&](const std::string& s, const std::string& sym) {
        if (!has_sort(s))
            throw SortMismatch("undeclared sort '" + s + "' in arity of '" + sym + "'");
    };
    for (const auto& f : functions) {
        for (const auto& s : f.arg_sorts) need_sort(s, f.name);
        need_sort(f.result_sort, f.name);
    }
    for (const auto& p : predicates)
        for (const auto& s : p.arg_sorts) need_sort(s, p.name);
}

Term Term::var(std::string name, std::string sort) {
    Term t;
    t.kind = Kind::Var;
    t.name = std::move(name);
    t.sort = std::move(sort);
    return t;
}

Term Term::app(const Signature& sig, const std::string& fn, std::vector<Term> args) {
    const FunctionSym* f = sig.function(fn);
    if (!f) throw UnknownSymbol("unknown function symbol: " + fn);
    if (f->arg_sorts.size() != args.size())
        throw ArityMismatch("function '" + fn + "' expects " +
                            std::to_string(f->arg_sorts.size()) + " arguments, got " +
                            std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i)
        if (args[i].sort != f->arg_sorts[i])
            throw SortMismatch("argument " + std::to_string(i + 1) + " of '" + fn +
                               "' has sort " + args[i].sort + ", expected " + f->arg_sorts[i]);
    Term t;
    t.kind = Kind::App;
    t.name = fn;
    t.sort = f->result_sort;
    t.args = std::move(args);
    return t;
}

std::size_t Term::node_count() const {
    std::size_t n = 1;
    for (const auto& a : args) n += a.node_count();
    return n;
}

std::size_t Term::depth() const {
    if (kind == Kind::Var) return 0;
    std::size_t d = 0;
    for (const auto& a : args) d = std::max(d, a.depth());
    return d + 1;
}

Formula Formula::truth() { return Formula{}; }

Formula Formula::falsity() {
    Formula f;
    f.kind = FormulaKind::Falsity;
    return f;
}

Formula Formula::prop(std::string name) {
    Formula f;
    f.kind = FormulaKind::Prop;
    f.name = std::move(name);
    return f;
}

Formula Formula::equation(Term lhs, Term rhs) {
    Formula f;
    f.kind = FormulaKind::Equation;
    f.terms = {std::move(lhs), std::move(rhs)};
    return f;
}

Formula Formula::inequation(Term lhs, Term rhs) {
    Formula f;
    f.kind = FormulaKind::Inequation;
    f.terms = {std::move(lhs), std::move(rhs)};
    return f;
}

Formula Formula::predicate(std::string name, std::vector<Term> args) {
    Formula f;
    f.kind = FormulaKind::Predicate;
    f.name = std::move(name);
    f.terms = std::move(args);
    return f;
}

static Formula binary(FormulaKind k, Formula lhs, Formula rhs) {
    Formula f;
    f.kind = k;
    f.children = {std::move(lhs), std::move(rhs)};
    return f;
}

Formula Formula::conj(Formula lhs, Formula rhs) { return binary(FormulaKind::And, std::move(lhs), std::move(rhs)); }
Formula Formula::disj(Formula lhs, Formula rhs) { return binary(FormulaKind::Or, std::move(lhs), std::move(rhs)); }
Formula Formula::implies(Formula lhs, Formula rhs) { return binary(FormulaKind::Implies, std::move(lhs), std::move(rhs)); }

Formula Formula::neg(Formula body) {
    Formula f;
    f.kind = FormulaKind::Not;
    f.children = {std::move(body)};
    return f;
}

Formula Formula::exists(std::string var, std::string sort, Formula body) {
    Formula f;
    f.kind = FormulaKind::Exists;
    f.name = std::move(var);
    f.sort = std::move(sort);
    f.children = {std::move(body)};
    return f;
}

std::string to_string(Fragment f) {
    switch (f) {
        case Fragment::PROPOSITIONAL: return "PROPOSITIONAL";
        case Fragment::EQUATIONAL: return "EQUATIONAL";
        case Fragment::COHERENT: return "COHERENT";
    }
    throw InternalInvariantViolation("unreachable fragment tag");
}

std::string check_term(const Signature& sig, const Term& term) {
    if (term.kind == Term::Kind::Var) {
        if (term.sort.empty())
            throw SortMismatch("variable '" + term.name + "' has no inferable sort");
        if (!sig.has_sort(term.sort))
            throw SortMismatch("variable '" + term.name + "' has undeclared sort " + term.sort);
        return term.sort;
    }
    const FunctionSym* f = sig.function(term.name);
    if (!f) throw UnknownSymbol("unknown function symbol: " + term.name);
    if (f->arg_sorts.size() != term.args.size())
        throw ArityMismatch("function '" + term.name + "' expects " +
                            std::to_string(f->arg_sorts.size()) + " arguments, got " +
                            std::to_string(term.args.size()));
    for (std::size_t i = 0; i < term.args.size(); ++i) {
        std::string got = check_term(sig, term.args[i]);
        if (got != f->arg_sorts[i])
            throw SortMismatch("argument " + std::to_string(i + 1) + " of '" + term.name +
                               "' has sort " + got + ", expected " + f->arg_sorts[i]);
    }
    return f->result_sort;
}

void check_formula(const Signature& sig, const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Truth:
        case FormulaKind::Falsity:
            return;
        case FormulaKind::Prop:
            if (!sig.has_proposition(f.name))
                throw UnknownSymbol("unknown proposition: " + f.name);
            return;
        case FormulaKind::Equation:
        case FormulaKind::Inequation: {
            if (f.terms.size() != 2)
                throw ValidationError("equation node must have exactly two terms");
            std::string l = check_term(sig, f.terms[0]);
            std::string r = check_term(sig, f.terms[1]);
            if (l != r)
                throw SortMismatch("equation sides have sorts " + l + " and " + r);
            return;
        }
        case FormulaKind::Predicate: {
            const PredicateSym* p = sig.predicate(f.name);
            if (!p) throw UnknownSymbol("unknown predicate: " + f.name);
            if (p->arg_sorts.size() != f.terms.size())
                throw ArityMismatch("predicate '" + f.name + "' expects " +
                                    std::to_string(p->arg_sorts.size()) + " arguments, got " +
                                    std::to_string(f.terms.size()));
            for (std::size_t i = 0; i < f.terms.size(); ++i) {
                std::string got = check_term(sig, f.terms[i]);
                if (got != p->arg_sorts[i])
                    throw SortMismatch("argument " + std::to_string(i + 1) + " of '" + f.name +
                                       "' has sort " + got + ", expected " + p->arg_sorts[i]);
            }
            return;
        }
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            if (f.children.size() != 2)
                throw ValidationError("binary connective must have exactly two children");
            check_formula(sig, f.children[0]);
            check_formula(sig, f.children[1]);
            return;
        case FormulaKind::Not:
            if (f.children.size() != 1)
                throw ValidationError("negation must have exactly one child");
            check_formula(sig, f.children[0]);
            return;
        case FormulaKind::Exists:
            if (f.children.size() != 1)
                throw ValidationError("existential must have exactly one child");
            if (!sig.has_sort(f.sort))
                throw SortMismatch("existential binds variable of undeclared sort " + f.sort);
            check_formula(sig, f.children[0]);
            return;
    }
    throw InternalInvariantViolation("unreachable formula kind");
}

bool check_fragment(const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Truth:
        case FormulaKind::Falsity:
        case FormulaKind::Prop:
        case FormulaKind::Equation:
        case FormulaKind::Inequation:
        case FormulaKind::Predicate:
            return true;
        case FormulaKind::And:
        case FormulaKind::Or:
            return check_fragment(f.children[0]) && check_fragment(f.children[1]);
        case FormulaKind::Exists:
            return check_fragment(f.children[0]);
        case FormulaKind::Implies:
        case FormulaKind::Not:
            return false;
    }
    return false;
}

bool is_propositional(const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Truth:
        case FormulaKind::Falsity:
        case FormulaKind::Prop:
            return true;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            return is_propositional(f.children[0]) && is_propositional(f.children[1]);
        case FormulaKind::Not:
            return is_propositional(f.children[0]);
        default:
            return false;
    }
}

Fragment least_fragment(const Signature& sig, const std::vector<Axiom>& axioms) {
    if (sig.sorts.empty() && sig.functions.empty() && sig.predicates.empty()) {
        bool ok = true;
        for (const auto& a : axioms)
            if (a.is_sequent || !is_propositional(a.conclusion)) { ok = false; break; }
        if (ok) return Fragment::PROPOSITIONAL;
    }
    if (sig.predicates.empty() && sig.propositions.empty()) {
        bool ok = true;
        for (const auto& a : axioms)
            if (a.is_sequent || a.conclusion.kind != FormulaKind::Equation) { ok = false; break; }
        if (ok) return Fragment::EQUATIONAL;
    }
    {
        bool ok = true;
        for (const auto& a : axioms) {
            if (a.is_sequent && !check_fragment(a.premise)) { ok = false; break; }
            if (!check_fragment(a.conclusion)) { ok = false; break; }
        }
        if (ok) return Fragment::COHERENT;
    }
    throw FragmentViolation("axioms fit no supported fragment (propositional, equational, coherent)");
}

bool fits_coherent(const Theory& t) {
    for (const auto& a : t.axioms) {
        if (a.is_sequent && !check_fragment(a.premise)) return false;
        if (!check_fragment(a.conclusion)) return false;
    }
    return true;
}

namespace {

void free_vars_formula(const Formula& f, std::vector<std::string>& bound, std::vector<Var>& out) {
    auto record_term = [&](const Term& t, auto&& self) -> void {
        if (t.kind == Term::Kind::Var) {
            if (std::find(bound.rbegin(), bound.rend(), t.name) != bound.rend()) return;
            for (const auto& v : out)
                if (v.name == t.name) return;
            out.push_back({t.name, t.sort});
            return;
        }
        for (const auto& a : t.args) self(a, self);
    };
    for (const auto& t : f.terms) record_term(t, record_term);
    if (f.kind == FormulaKind::Exists) {
        bound.push_back(f.name);
        free_vars_formula(f.children[0], bound, out);
        bound.pop_back();
    } else {
        for (const auto& c : f.children) free_vars_formula(c, bound, out);
    }
}

} // namespace

std::vector<Var> free_vars(const Formula& f) {
    std::vector<std::string> bound;
    std::vector<Var> out;
    free_vars_formula(f, bound, out);
    return out;
}

void free_vars_term(const Term& t, std::vector<Var>& out) {
    if (t.kind == Term::Kind::Var) {
        for (const auto& v : out)
            if (v.name == t.name) return;
        out.push_back({t.name, t.sort});
        return;
    }
    for (const auto& a : t.args) free_vars_term(a, out);
}

Term substitute(const Term& t, const std::map<std::string, Term>& binding) {
    if (t.kind == Term::Kind::Var) {
        auto it = binding.find(t.name);
        if (it == binding.end()) return t;
        if (it->second.sort != t.sort)
            throw SortMismatch("substitution for '" + t.name + "' has sort " + it->second.sort +
                               ", expected " + t.sort);
        return it->second;
    }
    Term out = t;
    for (auto& a : out.args) a = substitute(a, binding);
    return out;
}

namespace {

bool term_mentions(const Term& t, const std::string& name) {
    if (t.kind == Term::Kind::Var) return t.name == name;
    for (const auto& a : t.args)
        if (term_mentions(a, name)) return true;
    return false;
}

void all_var_names(const Formula& f, std::set<std::string>& out) {
    auto walk_term = [&](const Term& t, auto&& self) -> void {
        if (t.kind == Term::Kind::Var) { out.insert(t.name); return; }
        for (const auto& a : t.args) self(a, self);
    };
    for (const auto& t : f.terms) walk_term(t, walk_term);
    if (f.kind == FormulaKind::Exists) out.insert(f.name);
    for (const auto& c : f.children) all_var_names(c, out);
}

void all_var_names(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Var) { out.insert(t.name); return; }
    for (const auto& a : t.args) all_var_names(a, out);
}

} // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& binding) {
    switch (f.kind) {
        case FormulaKind::Truth:
        case FormulaKind::Falsity:
        case FormulaKind::Prop:
            return f;
        case FormulaKind::Equation:
        case FormulaKind::Inequation:
        case FormulaKind::Predicate: {
            Formula out = f;
            for (auto& t : out.terms) t = substitute(t, binding);
            return out;
        }
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Not: {
            Formula out = f;
            for (auto& c : out.children) c = substitute(c, binding);
            return out;
        }
        case FormulaKind::Exists: {
            std::map<std::string, Term> inner = binding;
            inner.erase(f.name);
            const Formula& body = f.children[0];
            if (inner.empty()) {
                Formula out = f;
                out.children[0] = body;
                return out;
            }
            // Capture happens when a replacement for a variable free in the
            // body mentions the bound name.
            bool capture = false;
            std::vector<Var> bf = free_vars(body);
            for (const auto& v : bf) {
                if (v.name == f.name) continue;
                auto it = inner.find(v.name);
                if (it != inner.end() && term_mentions(it->second, f.name)) { capture = true; break; }
            }
            Formula out = f;
            if (!capture) {
                out.children[0] = substitute(body, inner);
                return out;
            }
            std::set<std::string> taken;
            all_var_names(body, taken);
            for (const auto& [k, t] : inner) {
                taken.insert(k);
                all_var_names(t, taken);
            }
            std::string fresh;
            for (int i = 1;; ++i) {
                fresh = f.name + std::to_string(i);
                if (!taken.count(fresh)) break;
            }
            std::map<std::string, Term> rename{{f.name, Term::var(fresh, f.sort)}};
            out.name = fresh;
            out.children[0] = substitute(substitute(body, rename), inner);
            return out;
        }
    }
    throw InternalInvariantViolation("unreachable formula kind");
}

namespace {

std::vector<Var> axiom_context(const Axiom& a) {
    std::vector<Var> ctx;
    if (a.is_sequent) {
        ctx = free_vars(a.premise);
        for (const auto& v : free_vars(a.conclusion)) {
            bool seen = false;
            for (const auto& u : ctx)
                if (u.name == v.name) { seen = true; break; }
            if (!seen) ctx.push_back(v);
        }
    } else {
        ctx = free_vars(a.conclusion);
    }
    return ctx;
}

} // namespace

Axiom make_axiom(const Signature& sig, Formula conclusion) {
    check_formula(sig, conclusion);
    Axiom a;
    a.conclusion = std::move(conclusion);
    a.context = axiom_context(a);
    return a;
}

Axiom make_sequent(const Signature& sig, Formula premise, Formula conclusion) {
    check_formula(sig, premise);
    check_formula(sig, conclusion);
    Axiom a;
    a.is_sequent = true;
    a.premise = std::move(premise);
    a.conclusion = std::move(conclusion);
    a.context = axiom_context(a);
    return a;
}

std::string print_term(const Term& t) {
    if (t.kind == Term::Kind::Var || t.args.empty()) return t.name;
    std::string s = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ",";
        s += print_term(t.args[i]);
    }
    return s + ")";
}

namespace {

// Binding strength; existentials are weakest (their body extends maximally
// to the right), implication associates right.
int precedence(FormulaKind k) {
    switch (k) {
        case FormulaKind::Exists: return 0;
        case FormulaKind::Implies: return 1;
        case FormulaKind::Or: return 2;
        case FormulaKind::And: return 3;
        case FormulaKind::Not: return 4;
        default: return 5;
    }
}

std::string print_rec(const Formula& f, int min_prec) {
    std::string s;
    switch (f.kind) {
        case FormulaKind::Truth: s = "true"; break;
        case FormulaKind::Falsity: s = "false"; break;
        case FormulaKind::Prop: s = f.name; break;
        case FormulaKind::Equation:
            s = print_term(f.terms[0]) + " = " + print_term(f.terms[1]);
            break;
        case FormulaKind::Inequation:
            s = print_term(f.terms[0]) + " != " + print_term(f.terms[1]);
            break;
        case FormulaKind::Predicate: {
            s = f.name;
            if (!f.terms.empty()) {
                s += "(";
                for (std::size_t i = 0; i < f.terms.size(); ++i) {
                    if (i) s += ",";
                    s += print_term(f.terms[i]);
                }
                s += ")";
            }
            break;
        }
        case FormulaKind::Implies:
            s = print_rec(f.children[0], 2) + " -> " + print_rec(f.children[1], 1);
            break;
        case FormulaKind::Or:
            s = print_rec(f.children[0], 2) + " | " + print_rec(f.children[1], 3);
            break;
        case FormulaKind::And:
            s = print_rec(f.children[0], 3) + " & " + print_rec(f.children[1], 4);
            break;
        case FormulaKind::Not:
            s = "~" + print_rec(f.children[0], 4);
            break;
        case FormulaKind::Exists:
            s = "exists " + f.name + " : " + f.sort + ". " + print_rec(f.children[0], 0);
            break;
    }
    if (precedence(f.kind) < min_prec) s = "(" + s + ")";
    return s;
}

} // namespace

std::string print_formula(const Formula& f) { return print_rec(f, 0); }

std::string print_axiom(const Axiom& a) {
    if (a.is_sequent) return print_formula(a.premise) + " |- " + print_formula(a.conclusion);
    return print_formula(a.conclusion);
}

std::string print_theory(const Theory& t) {
    std::ostringstream out;
    out << "theory " << t.name << "\n";
    if (!t.signature.sorts.empty()) {
        out << "sort";
        for (const auto& s : t.signature.sorts) out << " " << s;
        out << "\n";
    }
    if (!t.signature.propositions.empty()) {
        out << "prop";
        for (const auto& p : t.signature.propositions) out << " " << p;
        out << "\n";
    }
    for (const auto& f : t.signature.functions) {
        out << "op " << f.name << " :";
        for (const auto& s : f.arg_sorts) out << " " << s;
        out << " -> " << f.result_sort << "\n";
    }
    for (const auto& p : t.signature.predicates) {
        out << "pred " << p.name << " :";
        for (const auto& s : p.arg_sorts) out << " " << s;
        out << "\n";
    }
    for (const auto& a : t.axioms) out << "axiom " << print_axiom(a) << "\n";
    return out.str();
}

} // namespace catlog
