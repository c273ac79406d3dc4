#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "catlog/coherent.hpp"
#include "catlog/equational.hpp"
#include "catlog/errors.hpp"
#include "catlog/parser.hpp"
#include "catlog/prop.hpp"
#include "doctest.h"

using namespace catlog;

namespace {

const char* kPureEqSrc = "theory E\nsort S\n";
const char* kUnaryPSrc = "theory UP\nsort S\npred P : S\n";
const char* kTwoPlusSrc =
    "theory TwoPlus\n"
    "sort S\n"
    "axiom exists x : S . exists y : S . x != y\n";
const char* kXorSentenceSrc =
    "theory X2\n"
    "sort S\n"
    "op m : S S -> S\n"
    "axiom exists x : S . m(x,x) = x & exists y : S . y != x\n";
const char* kGroupSrc =
    "theory Grp\n"
    "sort G\n"
    "op e : -> G\n"
    "op i : G -> G\n"
    "op m : G G -> G\n"
    "axiom m(e,x) = x\n"
    "axiom m(i(x),x) = e\n"
    "axiom m(m(x,y),z) = m(x,m(y,z))\n";
const char* kSubsetSrc =
    "theory Sub\n"
    "sort S\n"
    "pred P : S\n"
    "pred Q : S\n"
    "axiom P(x) |- Q(x)\n";
const char* kPropOrSrc = "theory PD\nprop p\nprop q\naxiom p | q\n";

FiniteStructure bare(std::size_t n) {
    FiniteStructure M;
    M.sizes = {n};
    return M;
}

FiniteStructure with_pred(std::size_t n, std::vector<std::size_t> members) {
    FiniteStructure M = bare(n);
    Bitset rel(n);
    for (std::size_t m : members) rel.set(m);
    M.rel_tables.push_back(rel);
    return M;
}

FiniteStructure z2_structure() {
    FiniteStructure M;
    M.sizes = {2};
    M.fn_tables = {{0}, {0, 1}, {0, 1, 1, 0}};
    return M;
}

std::vector<std::string> printed(const std::vector<Formula>& fs) {
    std::vector<std::string> out;
    for (const auto& f : fs) out.push_back(print_formula(f));
    return out;
}

} // namespace

TEST_CASE("coherent satisfaction on pure-equality structures") {
    Theory two = parse_theory(kTwoPlusSrc);
    const Formula& sentence = two.axioms.at(0).conclusion;

    CHECK(satisfies_fo(two.signature, bare(2), sentence));
    CHECK_FALSE(satisfies_fo(two.signature, bare(1), sentence));
    CHECK(satisfies_fo(two.signature, bare(3), sentence));
}

TEST_CASE("coherent satisfaction with an operation table") {
    Theory t = parse_theory(kXorSentenceSrc);
    const Formula& sentence = t.axioms.at(0).conclusion;
    FiniteStructure M;
    M.sizes = {2};
    M.fn_tables = {{0, 1, 1, 0}}; // xor

    // Oracle: exhaust the 2x2 assignment grid by hand.
    bool expected = false;
    for (std::size_t x = 0; x < 2 && !expected; ++x) {
        bool idem = (M.fn_tables[0][x * 2 + x] == x);
        bool other = false;
        for (std::size_t y = 0; y < 2; ++y) other = other || (y != x);
        expected = idem && other;
    }
    CHECK(expected);
    CHECK(satisfies_fo(t.signature, M, sentence) == expected);
}

TEST_CASE("coherent satisfaction rejects open or non-coherent input") {
    Theory up = parse_theory(kUnaryPSrc);
    Formula open_formula =
        Formula::equation(Term::var("x", "S"), Term::var("x", "S"));
    CHECK_THROWS_AS(satisfies_fo(up.signature, bare(1), open_formula), FragmentViolation);

    Formula negated = Formula::neg(Formula::truth());
    CHECK_THROWS_AS(satisfies_fo(up.signature, bare(1), negated), FragmentViolation);

    Theory two = parse_theory(kTwoPlusSrc);
    CHECK_THROWS_AS(
        satisfies_fo(two.signature, bare(3), two.axioms.at(0).conclusion, 1),
        BoundExceeded);
}

TEST_CASE("sequent axioms quantify universally over their context") {
    Theory two = parse_theory(kTwoPlusSrc);
    CHECK(satisfies_axiom(two.signature, bare(2), two.axioms.at(0)));
    CHECK_FALSE(satisfies_axiom(two.signature, bare(1), two.axioms.at(0)));

    Theory sub = parse_theory(kSubsetSrc);
    FiniteStructure M = bare(2);
    M.rel_tables = {Bitset(2), Bitset(2)};
    M.rel_tables[0].set(0); // P = {0}
    M.rel_tables[1].set(0);
    M.rel_tables[1].set(1); // Q = {0,1}
    CHECK(satisfies_axiom(sub.signature, M, sub.axioms.at(0)));
    M.rel_tables[1] = Bitset(2); // Q = {}
    CHECK_FALSE(satisfies_axiom(sub.signature, M, sub.axioms.at(0)));
}

TEST_CASE("structure enumeration matches counting oracles") {
    Theory eq = parse_theory(kPureEqSrc);
    auto pure = enumerate_structures(eq, {{1, 3}});
    REQUIRE(pure.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(pure[i].sizes == std::vector<std::size_t>{i + 1});

    Theory up = parse_theory(kUnaryPSrc);
    auto subsets = enumerate_structures(up, {{2, 2}});
    REQUIRE(subsets.size() == 4);
    CHECK(subsets[0].rel_tables[0].to_string() == "00");
    CHECK(subsets[1].rel_tables[0].to_string() == "01");
    CHECK(subsets[2].rel_tables[0].to_string() == "10");
    CHECK(subsets[3].rel_tables[0].to_string() == "11");

    Theory two = parse_theory(kTwoPlusSrc);
    auto at_least_two = enumerate_structures(two, {{1, 3}});
    REQUIRE(at_least_two.size() == 2);
    CHECK(at_least_two[0].sizes == std::vector<std::size_t>{2});
    CHECK(at_least_two[1].sizes == std::vector<std::size_t>{3});

    // P(x) |- Q(x) at size 2: oracle scans all 16 relation pairs for P ⊆ Q.
    Theory sub = parse_theory(kSubsetSrc);
    std::size_t contained = 0;
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
            if ((p & ~q) == 0) ++contained;
    CHECK(contained == 9);
    CHECK(enumerate_structures(sub, {{2, 2}}).size() == contained);
}

TEST_CASE("structure enumeration agrees with the algebra enumerator on groups") {
    Theory g = parse_theory(kGroupSrc);
    AlgebraicTheory alg = AlgebraicTheory::from_theory(g);
    for (std::size_t n = 1; n <= 3; ++n) {
        auto algebras = enumerate_models(alg, n);
        auto structures = enumerate_structures(g, {{n, n}});
        REQUIRE(structures.size() == algebras.size());
        for (std::size_t i = 0; i < structures.size(); ++i)
            CHECK(structures[i].fn_tables == algebras[i].tables);
    }
}

TEST_CASE("structure enumeration validates its inputs and bounds") {
    Theory up = parse_theory(kUnaryPSrc);
    CHECK_THROWS_AS(enumerate_structures(up, {}), ValidationError);
    CHECK_THROWS_AS(enumerate_structures(up, {{0, 2}}), ValidationError);

    Theory nc = parse_theory("theory NC\nprop p\nprop q\naxiom p -> q\n");
    CHECK_THROWS_AS(enumerate_structures(nc, {}), FragmentViolation);

    Theory xr = parse_theory("theory X\nsort S\nop m : S S -> S\n");
    StructOptions tight;
    tight.candidate_budget = 100; // 3^9 candidates at size 3
    CHECK_THROWS_AS(enumerate_structures(xr, {{3, 3}}, tight), BoundExceeded);

    CHECK(enumerate_structures(up, {{1, 0}}).empty());
}

TEST_CASE("structure enumeration is independent of the worker count") {
    Theory up = parse_theory(kUnaryPSrc);
    Theory g = parse_theory(kGroupSrc);
    StructOptions opts;
    opts.workers = 1;
    auto up_base = enumerate_structures(up, {{1, 3}}, opts);
    auto g_base = enumerate_structures(g, {{1, 2}}, opts);
    CHECK(up_base.size() == 2 + 4 + 8);
    for (unsigned w : {2u, 8u}) {
        opts.workers = w;
        CHECK(enumerate_structures(up, {{1, 3}}, opts) == up_base);
        CHECK(enumerate_structures(g, {{1, 2}}, opts) == g_base);
    }
}

TEST_CASE("isomorphism search finds exactly the structure-preserving bijections") {
    Theory eq = parse_theory(kPureEqSrc);
    CHECK(isomorphisms(eq.signature, bare(3), bare(3)).size() == 6);
    CHECK(isomorphisms(eq.signature, bare(1), bare(2)).empty());

    Theory up = parse_theory(kUnaryPSrc);
    CHECK(isomorphisms(up.signature, with_pred(2, {}), with_pred(2, {0, 1})).empty());
    CHECK(isomorphisms(up.signature, with_pred(2, {0}), with_pred(2, {1})).size() == 1);
    CHECK(isomorphisms(up.signature, with_pred(2, {}), with_pred(2, {})).size() == 2);

    // Z2: the swap moves the identity element, so only id survives.
    Theory g = parse_theory(kGroupSrc);
    auto autos = isomorphisms(g.signature, z2_structure(), z2_structure());
    REQUIRE(autos.size() == 1);
    CHECK(autos[0] == identity_iso(z2_structure()));

    CHECK_THROWS_AS(isomorphisms(eq.signature, bare(4), bare(4), 10), BoundExceeded);
}

TEST_CASE("isomorphisms compose, invert, and include identities") {
    Theory eq = parse_theory(kPureEqSrc);
    auto symmetries = isomorphisms(eq.signature, bare(3), bare(3));
    REQUIRE(symmetries.size() == 6);
    StructureIso id = identity_iso(bare(3));
    for (const auto& f : symmetries) {
        CHECK(compose(f, inverse(f)) == id);
        CHECK(compose(inverse(f), f) == id);
        CHECK(compose(f, id) == f);
        CHECK(compose(id, f) == f);
        for (const auto& g : symmetries) {
            auto gf = compose(g, f);
            CHECK(std::find(symmetries.begin(), symmetries.end(), gf) != symmetries.end());
        }
    }
}

TEST_CASE("model groupoid of pure equality has factorial automorphism counts") {
    ModelGroupoid G = groupoid(parse_theory(kPureEqSrc), {{1, 3}});
    REQUIRE(G.objects.size() == 3);
    CHECK(G.automorphism_count(0) == 1);
    CHECK(G.automorphism_count(1) == 2);
    CHECK(G.automorphism_count(2) == 6);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) CHECK(G.homs[i][j].empty());
}

TEST_CASE("model groupoid of one unary predicate at size 2") {
    ModelGroupoid G = groupoid(parse_theory(kUnaryPSrc), {{2, 2}});
    REQUIRE(G.objects.size() == 4);
    // Objects in enumeration order: P = {}, {1}, {0}, {0,1}.
    CHECK(G.automorphism_count(0) == 2);
    CHECK(G.automorphism_count(1) == 1);
    CHECK(G.automorphism_count(2) == 1);
    CHECK(G.automorphism_count(3) == 2);
    CHECK(G.homs[1][2].size() == 1);
    CHECK(G.homs[2][1].size() == 1);
    CHECK(G.homs[0][3].empty());
    CHECK(G.homs[1][3].empty());
}

TEST_CASE("empty size range yields the empty groupoid") {
    ModelGroupoid G = groupoid(parse_theory(kPureEqSrc), {{1, 0}});
    CHECK(G.objects.empty());
    CHECK(G.homs.empty());
}

TEST_CASE("groupoid hom-sets satisfy the groupoid laws exhaustively") {
    for (const ModelGroupoid& G : {groupoid(parse_theory(kUnaryPSrc), {{1, 2}}),
                                   groupoid(parse_theory(kGroupSrc), {{1, 2}})}) {
        std::size_t n = G.objects.size();
        for (std::size_t i = 0; i < n; ++i) {
            auto id = identity_iso(G.objects[i]);
            CHECK(std::find(G.homs[i][i].begin(), G.homs[i][i].end(), id) !=
                  G.homs[i][i].end());
            for (std::size_t j = 0; j < n; ++j)
                for (const auto& f : G.homs[i][j]) {
                    CHECK(std::find(G.homs[j][i].begin(), G.homs[j][i].end(), inverse(f)) !=
                          G.homs[j][i].end());
                    for (std::size_t k = 0; k < n; ++k)
                        for (const auto& g : G.homs[j][k])
                            CHECK(std::find(G.homs[i][k].begin(), G.homs[i][k].end(),
                                            compose(g, f)) != G.homs[i][k].end());
                }
        }
    }
}

TEST_CASE("basic opens select exactly the satisfying objects") {
    Theory eq = parse_theory(kPureEqSrc);
    ModelGroupoid G = groupoid(eq, {{1, 3}});
    Theory two = parse_theory(kTwoPlusSrc);

    BasisOpen open = basic_open(G, two.axioms.at(0).conclusion);
    CHECK(open.members.to_string() == "011");
    CHECK(basic_open(G, Formula::truth()).members.count() == 3);
    CHECK(basic_open(G, Formula::falsity()).members.count() == 0);

    CHECK_THROWS_AS(basic_open(G, Formula::neg(Formula::truth())), FragmentViolation);
}

TEST_CASE("basic opens respect the lattice operations over the sentence corpus") {
    for (const char* src : {kPureEqSrc, kUnaryPSrc}) {
        Theory t = parse_theory(src);
        ModelGroupoid G = groupoid(t, {{1, 2}});
        auto shallow = sentence_corpus(t.signature, 1);
        auto deep = sentence_corpus(t.signature, 2);

        std::vector<Bitset> shallow_members;
        for (const auto& f : shallow) shallow_members.push_back(basic_open(G, f).members);

        for (std::size_t i = 0; i < shallow.size(); ++i)
            for (std::size_t j = 0; j < shallow.size(); ++j) {
                Bitset both = basic_open(G, Formula::conj(shallow[i], shallow[j])).members;
                Bitset either = basic_open(G, Formula::disj(shallow[i], shallow[j])).members;
                CHECK(both == (shallow_members[i] & shallow_members[j]));
                CHECK(either == (shallow_members[i] | shallow_members[j]));
            }

        // Deterministic sample of the depth-2 corpus.
        for (std::size_t i = 0; i < deep.size(); i += 97)
            for (std::size_t j = 0; j < deep.size(); j += 101) {
                Bitset a = basic_open(G, deep[i]).members;
                Bitset b = basic_open(G, deep[j]).members;
                CHECK(basic_open(G, Formula::conj(deep[i], deep[j])).members == (a & b));
                CHECK(basic_open(G, Formula::disj(deep[i], deep[j])).members == (a | b));
            }
    }
}

TEST_CASE("satisfaction is isomorphism-invariant over the generated corpus") {
    Theory eq = parse_theory(kPureEqSrc);
    ModelGroupoid G = groupoid(eq, {{1, 3}});
    // basic_open asserts isomorphism-closure internally on every call.
    for (const auto& sentence : sentence_corpus(eq.signature, 2))
        CHECK_NOTHROW(basic_open(G, sentence));
}

TEST_CASE("sentence corpus follows the canonical order") {
    Theory eq = parse_theory(kPureEqSrc);
    auto depth0 = printed(sentence_corpus(eq.signature, 0));
    CHECK(depth0 == std::vector<std::string>{"true", "false", "true & false",
                                             "true | false"});

    Theory up = parse_theory(kUnaryPSrc);
    auto corpus = printed(sentence_corpus(up.signature, 1));
    CHECK(std::find(corpus.begin(), corpus.end(), "exists x1 : S. P(x1)") != corpus.end());
    CHECK(std::find(corpus.begin(), corpus.end(), "exists x1 : S. x1 = x1") != corpus.end());

    CHECK_THROWS_AS(sentence_corpus(up.signature, 2, 100), BoundExceeded);
}

TEST_CASE("separating sentences are found in canonical order") {
    Theory eq = parse_theory(kPureEqSrc);
    auto sep = separating_sentence(eq.signature, bare(1), bare(2), 2);
    REQUIRE(sep.has_value());
    CHECK(print_formula(*sep) == "exists x1 : S. exists x2 : S. x1 != x2");
    CHECK_FALSE(separating_sentence(eq.signature, bare(1), bare(2), 1).has_value());

    Theory up = parse_theory(kUnaryPSrc);
    auto psep = separating_sentence(up.signature, with_pred(2, {}), with_pred(2, {0, 1}), 1);
    REQUIRE(psep.has_value());
    CHECK(print_formula(*psep) == "exists x1 : S. P(x1)");

    // Isomorphic structures are elementarily equivalent.
    CHECK_FALSE(
        separating_sentence(up.signature, with_pred(2, {0}), with_pred(2, {1}), 2).has_value());
}

TEST_CASE("every non-isomorphic pair of unary-predicate structures separates") {
    Theory up = parse_theory(kUnaryPSrc);
    std::vector<FiniteStructure> structures;
    for (std::size_t n = 1; n <= 2; ++n) {
        auto batch = enumerate_structures(up, {{n, n}});
        structures.insert(structures.end(), batch.begin(), batch.end());
    }
    for (const auto& M : structures)
        for (const auto& N : structures) {
            bool iso = !isomorphisms(up.signature, M, N).empty() || &M == &N;
            auto sep = separating_sentence(up.signature, M, N, 3);
            CHECK(sep.has_value() == !iso);
        }
}

TEST_CASE("theory traces recover axioms and respect refuting models") {
    Theory two = parse_theory(kTwoPlusSrc);
    ModelGroupoid G2 = groupoid(two, {{1, 3}});
    auto trace = printed(theory_trace(G2, 2));
    CHECK(std::find(trace.begin(), trace.end(),
                    "exists x1 : S. exists x2 : S. x1 != x2") != trace.end());

    Theory eq = parse_theory(kPureEqSrc);
    ModelGroupoid Geq = groupoid(eq, {{1, 3}});
    auto shallow = printed(theory_trace(Geq, 1));
    CHECK(std::find(shallow.begin(), shallow.end(), "exists x1 : S. x1 = x1") !=
          shallow.end());
    auto deeper = printed(theory_trace(Geq, 2));
    CHECK(std::find(deeper.begin(), deeper.end(),
                    "exists x1 : S. exists x2 : S. x1 != x2") == deeper.end());

    ModelGroupoid empty = groupoid(eq, {{1, 0}});
    CHECK(theory_trace(empty, 1) == sentence_corpus(eq.signature, 1));
}

TEST_CASE("propositional theories degenerate to the propositional basis") {
    Theory pd = parse_theory(kPropOrSrc);
    ModelGroupoid G = groupoid(pd, {});
    PropModelSet ms = models_of(pd);
    REQUIRE(G.objects.size() == ms.size());
    for (std::size_t i = 0; i < G.objects.size(); ++i)
        for (std::size_t j = 0; j < pd.signature.propositions.size(); ++j)
            CHECK(G.objects[i].props[j] == ms.value(i, j));

    for (const auto& f : sentence_corpus(pd.signature, 1)) {
        Bitset coherent_side = basic_open(G, f).members;
        Bitset prop_side = lt_element(ms, f);
        CHECK(coherent_side == prop_side);
    }
}
