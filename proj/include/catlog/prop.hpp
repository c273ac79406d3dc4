#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catlog/bitset.hpp"
#include "catlog/boolean.hpp"
#include "catlog/syntax.hpp"

namespace catlog {

inline constexpr std::size_t kDefaultPropBound = 20;

// Total valuation of a propositional signature; bit j of values is the value
// of props[j].
struct TruthAssignment {
    std::vector<std::string> props;
    Bitset values;
    bool value(const std::string& name) const;
};

// All satisfying assignments of a theory in canonical order: lexicographic by
// proposition declaration order (equivalently, ascending mask with the first
// proposition as the most significant bit).
struct PropModelSet {
    std::string theory_name;
    std::vector<std::string> props;
    std::vector<std::uint64_t> masks;

    std::size_t size() const { return masks.size(); }
    bool value(std::size_t model, std::size_t prop) const {
        return (masks[model] >> (props.size() - 1 - prop)) & 1u;
    }
    TruthAssignment assignment(std::size_t model) const;
    // The assignment bitstring in proposition order, e.g. "01".
    std::string model_name(std::size_t model) const;
};

// Classical truth-table semantics. Throws FragmentViolation on
// non-propositional formulas and UnknownSymbol on propositions outside the
// assignment's domain.
bool eval(const Formula& f, const TruthAssignment& a);

PropModelSet models_of(const Theory& t, std::size_t prop_bound = kDefaultPropBound);

// Semantic entailment; coincides with provability by classical completeness.
bool entails(const Theory& t, const Formula& f, std::size_t prop_bound = kDefaultPropBound);

// The equivalence class [f] as its satisfying-model bitset.
Bitset lt_element(const PropModelSet& models, const Formula& f);

// Lindenbaum-Tarski algebra: the powerset algebra over the satisfying models,
// with one atom per model (named by its assignment bitstring) and generator
// images for every proposition. Inconsistent theories yield the degenerate
// algebra.
FiniteBooleanAlgebra lindenbaum_tarski(const Theory& t, std::size_t prop_bound = kDefaultPropBound);

enum class Classification { TAUTOLOGY, CONTRADICTION, CONTINGENT };

std::string to_string(Classification c);

struct ClassifyResult {
    Classification kind;
    std::uint64_t satisfying; // models of the theory satisfying the formula
    std::uint64_t total;      // all models of the theory
};

// Degree-of-empiricality ratio as a reduced fraction; over an inconsistent
// theory (0/0) the formula is vacuously a tautology and the ratio reads "1".
std::string ratio_string(const ClassifyResult& r);

ClassifyResult classify(const Theory& t, const Formula& f,
                        std::size_t prop_bound = kDefaultPropBound);

} // namespace catlog
