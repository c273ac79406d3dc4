#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catlog/bitset.hpp"
#include "catlog/syntax.hpp"

namespace catlog {

// Finite multi-sorted structure. Carriers are 0..sizes[s]-1 per sort;
// fn_tables and rel_tables follow signature declaration order and are flat
// row-major with the first argument most significant. Propositions are
// nullary relations, one bool each.
struct FiniteStructure {
    std::vector<std::size_t> sizes;
    std::vector<std::vector<std::size_t>> fn_tables;
    std::vector<Bitset> rel_tables;
    std::vector<bool> props;

    bool operator==(const FiniteStructure&) const = default;
};

struct StructOptions {
    std::uint64_t candidate_budget = 50'000'000; // table/relation candidates per call
    std::uint64_t iso_budget = 1'000'000;        // permutation families per pair
    std::uint64_t eval_budget = 10'000'000;      // witness-search steps per satisfaction call
    std::size_t corpus_bound = 500'000;          // generated sentences per corpus
    unsigned workers = 1;
};

// Closed-sentence satisfaction by exhaustive witness search. Throws
// FragmentViolation when the formula leaves the coherent fragment or has free
// variables, BoundExceeded when the witness search exceeds eval_budget steps.
bool satisfies_fo(const Signature& sig, const FiniteStructure& M, const Formula& sentence,
                  std::uint64_t eval_budget = StructOptions{}.eval_budget);

// Sequent satisfaction: universal closure of premise-implies-conclusion over
// the axiom's context.
bool satisfies_axiom(const Signature& sig, const FiniteStructure& M, const Axiom& ax,
                     std::uint64_t eval_budget = StructOptions{}.eval_budget);

// Inclusive per-sort carrier size range; lo > hi denotes the empty range.
struct SizeRange {
    std::size_t lo = 1;
    std::size_t hi = 1;
};

// All labeled structures whose per-sort sizes lie in the given ranges (one
// range per declared sort) and which satisfy every axiom. Order: ascending
// size vector, then ascending table encoding (function cells, then relation
// bits, then proposition bits; earlier cells more significant). The theory
// must fit the coherent fragment. Deterministic for every worker count.
std::vector<FiniteStructure> enumerate_structures(const Theory& t,
                                                  const std::vector<SizeRange>& bounds,
                                                  const StructOptions& opts = {});

// Sort-indexed family of carrier bijections M -> N.
struct StructureIso {
    std::vector<std::vector<std::size_t>> maps; // per sort
    bool operator==(const StructureIso&) const = default;
};

StructureIso identity_iso(const FiniteStructure& M);
StructureIso inverse(const StructureIso& f);
// g ∘ f (apply f first).
StructureIso compose(const StructureIso& g, const StructureIso& f);

// All isomorphisms M -> N in lexicographic per-sort permutation order; empty
// when sizes or proposition values differ. Throws BoundExceeded when the
// permutation-family count exceeds iso_budget.
std::vector<StructureIso> isomorphisms(const Signature& sig, const FiniteStructure& M,
                                       const FiniteStructure& N,
                                       std::uint64_t iso_budget = StructOptions{}.iso_budget);

// The groupoid of models: every labeled structure within bounds, with all
// pairwise isomorphism hom-sets. Groupoid laws (identities, inverses,
// composition closure) are verified exhaustively on construction.
struct ModelGroupoid {
    Theory theory;
    std::vector<FiniteStructure> objects;
    std::vector<std::vector<std::vector<StructureIso>>> homs; // [from][to]

    std::size_t automorphism_count(std::size_t i) const { return homs[i][i].size(); }
};

ModelGroupoid groupoid(const Theory& t, const std::vector<SizeRange>& bounds,
                       const StructOptions& opts = {});

// A basic open of the logical topology: the sentence and the set of groupoid
// objects satisfying it.
struct BasisOpen {
    Formula sentence;
    Bitset members; // object indices
};

// Evaluates the sentence on every object; isomorphism-closure of the result
// is asserted against the groupoid's hom-sets.
BasisOpen basic_open(const ModelGroupoid& G, const Formula& sentence,
                     const StructOptions& opts = {});

// Canonical closed-sentence corpus up to the given quantifier depth.
// Sentences are listed by exact depth 0..depth; within one depth: atoms,
// atom∧atom, atom∨atom, bare existentials, atom∧∃, atom∨∃ (pairs never
// combine two existentials). Atoms over a variable context: ⊤, ⊥, equations
// t=t' (term index i ≤ j), inequations (i < j), predicate applications,
// propositions, over terms of depth ≤ 1 (variables, constants, unary-depth
// applications). Throws BoundExceeded past corpus_bound sentences.
std::vector<Formula> sentence_corpus(const Signature& sig, std::size_t depth,
                                     std::size_t corpus_bound = StructOptions{}.corpus_bound);

// First corpus sentence distinguishing M from N, or nullopt when the corpus
// at this depth cannot separate them.
std::optional<Formula> separating_sentence(const Signature& sig, const FiniteStructure& M,
                                           const FiniteStructure& N, std::size_t depth,
                                           const StructOptions& opts = {});

// All corpus sentences of depth ≤ depth true in every object (all of them,
// vacuously, when the groupoid is empty).
std::vector<Formula> theory_trace(const ModelGroupoid& G, std::size_t depth,
                                  const StructOptions& opts = {});

} // namespace catlog
