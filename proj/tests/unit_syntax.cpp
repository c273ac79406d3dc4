#include "doctest.h"

#include "catlog/errors.hpp"
#include "catlog/parser.hpp"
#include "catlog/syntax.hpp"

using namespace catlog;

namespace {

Signature monoid_sig() {
    Signature sig;
    sig.sorts = {"S"};
    sig.functions.push_back({"e", {}, "S"});
    sig.functions.push_back({"m", {"S", "S"}, "S"});
    return sig;
}

} // namespace

TEST_CASE("check_term computes sorts and validates") {
    auto sig = monoid_sig();
    Term x = Term::var("x", "S");
    Term e = Term::app(sig, "e", {});
    CHECK(check_term(sig, x) == "S");
    CHECK(check_term(sig, Term::app(sig, "m", {e, x})) == "S");

    Term bad; // bypass the validating constructor
    bad.kind = Term::Kind::App;
    bad.name = "m";
    bad.args = {e};
    CHECK_THROWS_AS(check_term(sig, bad), ArityMismatch);
    Term unknown;
    unknown.kind = Term::Kind::App;
    unknown.name = "w";
    CHECK_THROWS_AS(check_term(sig, unknown), UnknownSymbol);
    CHECK_THROWS_AS(Term::app(sig, "m", {e}), ArityMismatch);
}

TEST_CASE("substitution is simultaneous and sort-checked") {
    auto sig = monoid_sig();
    Term x = Term::var("x", "S"), y = Term::var("y", "S"), z = Term::var("z", "S");
    Term e = Term::app(sig, "e", {});
    Term mxy = Term::app(sig, "m", {x, y});

    CHECK(substitute(mxy, {{"x", e}, {"y", e}}) == Term::app(sig, "m", {e, e}));
    CHECK(substitute(x, {{"x", Term::app(sig, "m", {y, z})}}) == Term::app(sig, "m", {y, z}));
    // Simultaneity: x and y swap without cascading.
    CHECK(substitute(mxy, {{"x", y}, {"y", x}}) == Term::app(sig, "m", {y, x}));
    CHECK(substitute(mxy, std::map<std::string, Term>{}) == mxy);
    CHECK_THROWS_AS(substitute(x, {{"x", Term::var("w", "T")}}), SortMismatch);
}

TEST_CASE("check_term is stable under sort-respecting substitution") {
    auto sig = monoid_sig();
    Term t = Term::app(sig, "m", {Term::var("x", "S"), Term::app(sig, "e", {})});
    auto s = substitute(t, {{"x", Term::app(sig, "m", {Term::var("y", "S"), Term::var("z", "S")})}});
    CHECK(check_term(sig, s) == check_term(sig, t));
}

TEST_CASE("formula substitution renames captured bound variables") {
    Formula body = Formula::equation(Term::var("z", "S"), Term::var("x", "S"));
    Formula f = Formula::exists("z", "S", body);
    Formula g = substitute(f, {{"x", Term::var("z", "S")}});
    REQUIRE(g.kind == FormulaKind::Exists);
    CHECK(g.name == "z1");
    CHECK(g.children[0].terms[0] == Term::var("z1", "S"));
    CHECK(g.children[0].terms[1] == Term::var("z", "S"));

    // No capture: the binder is untouched.
    Formula h = substitute(f, {{"x", Term::var("y", "S")}});
    CHECK(h.name == "z");
    CHECK(h.children[0].terms[1] == Term::var("y", "S"));
}

TEST_CASE("free variables come out in first-occurrence order") {
    auto sig = monoid_sig();
    Formula f = Formula::equation(Term::app(sig, "m", {Term::var("y", "S"), Term::var("x", "S")}),
                                  Term::var("y", "S"));
    auto fv = free_vars(f);
    REQUIRE(fv.size() == 2);
    CHECK(fv[0].name == "y");
    CHECK(fv[1].name == "x");

    Formula g = Formula::exists("x", "S", f);
    auto gv = free_vars(g);
    REQUIRE(gv.size() == 1);
    CHECK(gv[0].name == "y");
}

TEST_CASE("make_axiom derives the context and validates") {
    auto sig = monoid_sig();
    Formula eq = Formula::equation(
        Term::app(sig, "m", {Term::app(sig, "e", {}), Term::var("x", "S")}), Term::var("x", "S"));
    Axiom ax = make_axiom(sig, eq);
    REQUIRE(ax.context.size() == 1);
    CHECK(ax.context[0] == Var{"x", "S"});
    CHECK_FALSE(ax.is_sequent);
    CHECK(print_axiom(ax) == "m(e,x) = x");
}

TEST_CASE("fragment classification is least-first and monotone") {
    Theory eq = parse_theory("theory T sort S op f : S -> S axiom f(f(x)) = x");
    CHECK(eq.fragment == Fragment::EQUATIONAL);
    Theory raised =
        parse_theory("theory T sort S op f : S -> S axiom f(f(x)) = x "
                     "axiom exists y : S . f(y) = y");
    CHECK(raised.fragment == Fragment::COHERENT);
    CHECK(parse_theory("theory P prop p axiom p -> p").fragment == Fragment::PROPOSITIONAL);
    CHECK(parse_theory("theory E sort S").fragment == Fragment::EQUATIONAL);
    CHECK(fits_coherent(eq));
    CHECK(fits_coherent(parse_theory("theory P prop p q axiom p | q")));
    CHECK_FALSE(fits_coherent(parse_theory("theory P prop p q axiom p -> q")));
}

TEST_CASE("printing respects precedence and parses back") {
    Theory t = parse_theory(R"(
theory P
prop p q r
axiom p -> q -> r
axiom (p -> q) -> r
axiom ~(p & q) | r
axiom ~p & q
)");
    CHECK(print_axiom(t.axioms[0]) == "p -> q -> r");
    CHECK(print_axiom(t.axioms[1]) == "(p -> q) -> r");
    CHECK(print_axiom(t.axioms[2]) == "~(p & q) | r");
    CHECK(print_axiom(t.axioms[3]) == "~p & q");
    CHECK(t.axioms[0].conclusion.children[1].kind == FormulaKind::Implies);

    Theory coh = parse_theory(R"(
theory C
sort S
op f : S -> S
pred P : S
axiom P(x) |- exists y : S . f(y) = x & P(y)
axiom f(x) != x |- false
)");
    for (const Theory& th : {t, coh}) CHECK(parse_theory(print_theory(th)) == th);
}
