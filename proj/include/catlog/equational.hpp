#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "catlog/syntax.hpp"

namespace catlog {

// Validated single-sorted equational theory: functions only, every axiom a
// bare equation (universally read).
struct AlgebraicTheory {
    Theory theory;
    std::string sort;

    const Signature& sig() const { return theory.signature; }
    // Throws FragmentViolation unless the theory is equational over one sort.
    static AlgebraicTheory from_theory(const Theory& t);
};

// Algebra on carrier 0..n-1. tables[f] is the flat table of the f-th function
// symbol, indexed row-major with the first argument most significant.
struct FiniteAlgebra {
    std::size_t n = 0;
    std::vector<std::size_t> arities;
    std::vector<std::vector<std::size_t>> tables;

    bool operator==(const FiniteAlgebra&) const = default;
    bool operator<(const FiniteAlgebra& o) const;

    std::size_t eval(std::size_t fn, const std::vector<std::size_t>& args) const;
};

// Evaluates a term whose variables are listed in ctx, with env[i] the value of
// ctx[i].
std::size_t eval_term(const Signature& sig, const FiniteAlgebra& M, const Term& t,
                      const std::vector<Var>& ctx, const std::vector<std::size_t>& env);

// True iff both sides agree under every assignment of the equation's context
// into the carrier.
bool satisfies(const AlgebraicTheory& A, const FiniteAlgebra& M, const Axiom& equation,
               std::uint64_t assignment_bound = 1'000'000);
bool satisfies_all(const AlgebraicTheory& A, const FiniteAlgebra& M,
                   std::uint64_t assignment_bound = 1'000'000);

struct EnumOptions {
    // Budget on visited search nodes (cell-value attempts), not on the raw
    // table product: pruning typically visits a tiny fraction of the product
    // (groups at n=4 have 4^21 raw candidates yet finish within this default).
    std::uint64_t node_budget = 100'000'000;
    unsigned workers = 1;
};

// All labeled models on 0..n-1, in lexicographic table order. Deterministic
// for every worker count, including budget exhaustion behavior.
std::vector<FiniteAlgebra> enumerate_models(const AlgebraicTheory& A, std::size_t n,
                                            const EnumOptions& opts = {});

struct Homomorphism {
    std::vector<std::size_t> map;
    bool operator==(const Homomorphism&) const = default;
};

bool is_homomorphism(const FiniteAlgebra& M, const FiniteAlgebra& N,
                     const std::vector<std::size_t>& map);

// All carrier maps commuting with every operation, in lexicographic map
// order. Throws SignatureMismatch when table shapes differ.
std::vector<Homomorphism> homomorphisms(const FiniteAlgebra& M, const FiniteAlgebra& N,
                                        std::uint64_t bound = 1'000'000);

FiniteAlgebra relabel(const FiniteAlgebra& M, const std::vector<std::size_t>& perm);

struct IsoClass {
    FiniteAlgebra representative; // lexicographically least in its orbit
    std::size_t orbit_size = 0;
};

// Labeled enumeration followed by orbit partition under carrier relabelings.
std::vector<IsoClass> enumerate_up_to_iso(const AlgebraicTheory& A, std::size_t n,
                                          const EnumOptions& opts = {});

// ---- Syntactic category ----

enum class SynBackend { REWRITE, MODELEVAL };

std::string to_string(SynBackend b);

// Morphism A^n → A^m: m terms over x1..xn, each the canonical representative
// of its provable-equality class under the recorded backend.
struct SynMorphism {
    std::size_t src_arity = 0;
    std::size_t dst_arity = 0;
    std::vector<Term> terms;
    SynBackend backend = SynBackend::REWRITE;

    bool operator==(const SynMorphism&) const = default;
};

std::string print_syn(const SynMorphism& m);

struct SynOptions {
    std::size_t term_bound = 20000;     // max enumerated terms per (arity, depth)
    std::size_t rewrite_budget = 10000; // rewrite steps per normal form
    std::size_t modeleval_size = 3;     // fingerprint models up to this carrier size
    std::uint64_t node_budget = 100'000'000;
};

// Canonical term order: node count, then variables before applications, then
// variable index / symbol declaration order, then arguments lexicographically.
bool term_less(const Signature& sig, const Term& a, const Term& b);

struct RewriteRule {
    Term lhs, rhs;
};

// Axioms oriented left-to-right as written. Throws BackendUnavailable if a
// right side mentions variables missing from its left side.
std::vector<RewriteRule> rules_of(const AlgebraicTheory& A);

// Leftmost-innermost normalization; throws BackendUnavailable when the step
// budget runs out (the oriented system need not terminate).
Term normal_form(const Term& t, const std::vector<RewriteRule>& rules, std::size_t step_budget);

// Equality-of-terms engine for one theory under one backend. REWRITE decides
// by shared normal form of the oriented axioms; MODELEVAL identifies terms
// agreeing on every enumerated model up to the size bound (sound for
// separation, possibly coarser than provable equality). Caches per
// (arity, depth); not safe for concurrent use.
class SynCalculus {
public:
    SynCalculus(AlgebraicTheory A, SynBackend backend, SynOptions opts = {});

    const AlgebraicTheory& theory() const { return theory_; }
    SynBackend backend() const { return backend_; }

    // All depth-bounded terms over x1..xarity grouped into equality classes;
    // each class sorted by term_less, classes ordered by least member.
    const std::vector<std::vector<Term>>& term_classes(std::size_t arity, std::size_t depth) const;

    // Hom-set Syn(A^n, A^m) at the given depth: all m-tuples of class
    // representatives, first component most significant.
    std::vector<SynMorphism> syn_morphisms(std::size_t n, std::size_t m, std::size_t depth) const;

    SynMorphism identity(std::size_t n, std::size_t depth) const;

    // Componentwise substitution, re-canonicalized at the given depth.
    SynMorphism compose(const SynMorphism& g, const SynMorphism& f, std::size_t depth) const;

    // Provable equality of terms over x1..xarity under the active backend.
    bool equal_terms(const Term& a, const Term& b, std::size_t arity) const;

    // Least enumerated class member with the term's key; if the term's class
    // does not meet the enumerated set, its reduced form stands in.
    Term canonical(const Term& t, std::size_t arity, std::size_t depth) const;

private:
    std::string key_of(const Term& t, std::size_t arity) const;

    AlgebraicTheory theory_;
    SynBackend backend_;
    SynOptions opts_;
    std::vector<RewriteRule> rules_;
    std::vector<FiniteAlgebra> eval_models_;
    mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Term>>> cache_;
};

// Tabulated finite-product-preserving functor Syn(A) → Sets induced by a
// model: F(A^k) = M^k (tuples indexed row-major), morphisms evaluated
// pointwise. Functor laws and product/projection compatibility are verified
// on construction over every in-bounds pair.
struct FunctorTable {
    std::size_t model_size = 0;
    std::size_t max_arity = 0;
    std::size_t depth = 0;
    std::vector<std::vector<std::vector<SynMorphism>>> hom_sets; // [n][m]
    std::vector<std::vector<std::vector<std::vector<std::size_t>>>> maps; // [n][m][i]
    bool functor_laws_ok = false;
    bool products_ok = false;
};

FunctorTable model_as_functor(const SynCalculus& calc, const FiniteAlgebra& M,
                              std::size_t max_arity, std::size_t depth,
                              std::uint64_t bound = 100'000'000);

// Naturality squares h^m ∘ F_M(t) = F_N(t) ∘ h^n for every enumerated
// morphism; h is a raw carrier map so non-homomorphisms can be probed.
bool naturality_check(const SynCalculus& calc, const FiniteAlgebra& M, const FiniteAlgebra& N,
                      const std::vector<std::size_t>& carrier_map, std::size_t max_arity,
                      std::size_t depth);

} // namespace catlog
