#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace catlog {

struct FunctionSym {
    std::string name;
    std::vector<std::string> arg_sorts;
    std::string result_sort;
    bool operator==(const FunctionSym&) const = default;
};

struct PredicateSym {
    std::string name;
    std::vector<std::string> arg_sorts;
    bool operator==(const PredicateSym&) const = default;
};

// Symbol table of a formal language. Declaration order is significant: every
// enumeration downstream (models, terms, sentences) inherits it.
struct Signature {
    std::vector<std::string> sorts;
    std::vector<FunctionSym> functions;
    std::vector<PredicateSym> predicates;
    std::vector<std::string> propositions;

    bool operator==(const Signature&) const = default;

    bool has_sort(const std::string& s) const;
    std::size_t sort_index(const std::string& s) const;
    const FunctionSym* function(const std::string& name) const;
    std::size_t function_index(const std::string& name) const;
    const PredicateSym* predicate(const std::string& name) const;
    std::size_t predicate_index(const std::string& name) const;
    bool has_proposition(const std::string& name) const;
    std::size_t proposition_index(const std::string& name) const;
    bool has_symbol(const std::string& name) const;

    // Checks name uniqueness and that every arity mentions declared sorts.
    void validate() const;
};

// A term is a variable or a function application. Every node carries its sort
// (for applications, the head's declared result sort) so sort computations
// never need to consult the signature after construction.
struct Term {
    enum class Kind { Var, App };
    Kind kind = Kind::Var;
    std::string name;
    std::string sort;
    std::vector<Term> args;

    bool operator==(const Term&) const = default;

    bool is_var() const { return kind == Kind::Var; }

    static Term var(std::string name, std::string sort);
    // Validates arity and argument sorts against the signature.
    static Term app(const Signature& sig, const std::string& fn, std::vector<Term> args);

    std::size_t node_count() const;
    // Variables have depth 0, applications 1 + max over arguments (1 for constants).
    std::size_t depth() const;
};

enum class FormulaKind {
    Truth,
    Falsity,
    Prop,
    Equation,
    Inequation,
    Predicate,
    And,
    Or,
    Implies,
    Not,
    Exists,
};

struct Formula {
    FormulaKind kind = FormulaKind::Truth;
    std::string name;              // Prop / Predicate symbol, or Exists bound variable
    std::string sort;              // Exists: bound variable's sort
    std::vector<Term> terms;       // Equation/Inequation: [lhs, rhs]; Predicate: arguments
    std::vector<Formula> children; // And/Or/Implies: [lhs, rhs]; Not/Exists: [body]

    bool operator==(const Formula&) const = default;

    static Formula truth();
    static Formula falsity();
    static Formula prop(std::string name);
    static Formula equation(Term lhs, Term rhs);
    static Formula inequation(Term lhs, Term rhs);
    static Formula predicate(std::string name, std::vector<Term> args);
    static Formula conj(Formula lhs, Formula rhs);
    static Formula disj(Formula lhs, Formula rhs);
    static Formula implies(Formula lhs, Formula rhs);
    static Formula neg(Formula body);
    static Formula exists(std::string var, std::string sort, Formula body);
};

struct Var {
    std::string name;
    std::string sort;
    bool operator==(const Var&) const = default;
};

// Axiom in context: the context lists the free variables (first-occurrence
// order) over which the axiom is implicitly universally quantified. Sequents
// carry a premise; plain axioms have premise ⊤ and is_sequent = false.
struct Axiom {
    std::vector<Var> context;
    bool is_sequent = false;
    Formula premise;
    Formula conclusion;

    bool operator==(const Axiom&) const = default;
};

enum class Fragment { PROPOSITIONAL, EQUATIONAL, COHERENT };

std::string to_string(Fragment f);

struct Theory {
    std::string name;
    Signature signature;
    std::vector<Axiom> axioms;
    Fragment fragment = Fragment::PROPOSITIONAL;

    bool operator==(const Theory&) const = default;
};

// Returns the sort of the term, validating arities, argument sorts, and that
// every mentioned symbol/sort is declared.
std::string check_term(const Signature& sig, const Term& term);

// Validates a formula: predicate/proposition declarations, arities, equation
// sides of equal sort, existential sorts declared.
void check_formula(const Signature& sig, const Formula& f);

// True iff the formula stays within the coherent fragment ⊤,⊥,∧,∨,∃,=,≠
// (atoms: equations, inequations, predicates, propositions).
bool check_fragment(const Formula& f);

// True iff the formula uses propositional material only: propositions and
// ∧,∨,¬,→,⊤,⊥.
bool is_propositional(const Formula& f);

// Least fragment admitting every axiom over this signature, in the order
// PROPOSITIONAL, EQUATIONAL, COHERENT. Throws FragmentViolation if none fits.
Fragment least_fragment(const Signature& sig, const std::vector<Axiom>& axioms);

// True iff every axiom (premises included) lies in the coherent fragment.
// Propositional theories without ¬/→ qualify; equational theories always do.
bool fits_coherent(const Theory& t);

// Free variables in first-occurrence order (bound occurrences excluded).
std::vector<Var> free_vars(const Formula& f);
void free_vars_term(const Term& t, std::vector<Var>& out);

// Capture-avoiding simultaneous substitution. Bound variables are renamed to
// fresh names (basename + counter) when a replacement would be captured.
// Throws SortMismatch when a replacement's sort differs from the variable's.
Term substitute(const Term& t, const std::map<std::string, Term>& binding);
Formula substitute(const Formula& f, const std::map<std::string, Term>& binding);

// Builds an axiom from formulas, deriving the shared context and validating
// against the signature.
Axiom make_axiom(const Signature& sig, Formula conclusion);
Axiom make_sequent(const Signature& sig, Formula premise, Formula conclusion);

std::string print_term(const Term& t);
std::string print_formula(const Formula& f);
std::string print_axiom(const Axiom& a);
// Emits DSL source; parsing it back yields a structurally identical Theory.
std::string print_theory(const Theory& t);

} // namespace catlog
