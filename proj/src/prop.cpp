#include "catlog/prop.hpp"

#include <algorithm>
#include <numeric>

#include "catlog/errors.hpp"

namespace catlog {

bool TruthAssignment::value(const std::string& name) const {
    for (std::size_t j = 0; j < props.size(); ++j)
        if (props[j] == name) return values.test(j);
    throw UnknownSymbol("proposition '" + name + "' outside the assignment's domain");
}

TruthAssignment PropModelSet::assignment(std::size_t model) const {
    TruthAssignment a;
    a.props = props;
    a.values = Bitset(props.size());
    for (std::size_t j = 0; j < props.size(); ++j)
        if (value(model, j)) a.values.set(j);
    return a;
}

std::string PropModelSet::model_name(std::size_t model) const {
    std::string s(props.size(), '0');
    for (std::size_t j = 0; j < props.size(); ++j)
        if (value(model, j)) s[j] = '1';
    return s;
}

namespace {

bool eval_mask(const Formula& f, const std::vector<std::string>& props, std::uint64_t mask) {
    switch (f.kind) {
        case FormulaKind::Truth: return true;
        case FormulaKind::Falsity: return false;
        case FormulaKind::Prop: {
            for (std::size_t j = 0; j < props.size(); ++j)
                if (props[j] == f.name) return (mask >> (props.size() - 1 - j)) & 1u;
            throw UnknownSymbol("proposition '" + f.name + "' outside the theory's signature");
        }
        case FormulaKind::And:
            return eval_mask(f.children[0], props, mask) && eval_mask(f.children[1], props, mask);
        case FormulaKind::Or:
            return eval_mask(f.children[0], props, mask) || eval_mask(f.children[1], props, mask);
        case FormulaKind::Implies:
            return !eval_mask(f.children[0], props, mask) || eval_mask(f.children[1], props, mask);
        case FormulaKind::Not:
            return !eval_mask(f.children[0], props, mask);
        default:
            throw FragmentViolation("formula is not propositional");
    }
}

void require_propositional(const Formula& f) {
    if (!is_propositional(f)) throw FragmentViolation("formula is not propositional");
}

void require_prop_theory(const Theory& t) {
    if (t.fragment != Fragment::PROPOSITIONAL)
        throw FragmentViolation("theory '" + t.name + "' is not propositional");
}

} // namespace

bool eval(const Formula& f, const TruthAssignment& a) {
    require_propositional(f);
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < a.props.size(); ++j)
        if (a.values.test(j)) mask |= std::uint64_t{1} << (a.props.size() - 1 - j);
    return eval_mask(f, a.props, mask);
}

PropModelSet models_of(const Theory& t, std::size_t prop_bound) {
    require_prop_theory(t);
    std::size_t k = t.signature.propositions.size();
    if (k > prop_bound)
        throw BoundExceeded("theory has " + std::to_string(k) +
                            " propositions, over the bound of " + std::to_string(prop_bound));
    PropModelSet ms;
    ms.theory_name = t.name;
    ms.props = t.signature.propositions;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        bool ok = true;
        for (const auto& a : t.axioms)
            if (!eval_mask(a.conclusion, ms.props, mask)) { ok = false; break; }
        if (ok) ms.masks.push_back(mask);
    }
    return ms;
}

bool entails(const Theory& t, const Formula& f, std::size_t prop_bound) {
    require_propositional(f);
    check_formula(t.signature, f);
    PropModelSet ms = models_of(t, prop_bound);
    for (std::uint64_t mask : ms.masks)
        if (!eval_mask(f, ms.props, mask)) return false;
    return true;
}

Bitset lt_element(const PropModelSet& models, const Formula& f) {
    require_propositional(f);
    Bitset out(models.size());
    for (std::size_t i = 0; i < models.size(); ++i)
        if (eval_mask(f, models.props, models.masks[i])) out.set(i);
    return out;
}

FiniteBooleanAlgebra lindenbaum_tarski(const Theory& t, std::size_t prop_bound) {
    PropModelSet ms = models_of(t, prop_bound);
    std::vector<std::string> atom_names;
    for (std::size_t i = 0; i < ms.size(); ++i) atom_names.push_back(ms.model_name(i));
    auto lt = FiniteBooleanAlgebra::powerset(ms.size(), std::move(atom_names));
    for (std::size_t j = 0; j < ms.props.size(); ++j) {
        Bitset img(ms.size());
        for (std::size_t i = 0; i < ms.size(); ++i)
            if (ms.value(i, j)) img.set(i);
        lt.generators.emplace_back(ms.props[j], std::move(img));
    }
    return lt;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::TAUTOLOGY: return "TAUTOLOGY";
        case Classification::CONTRADICTION: return "CONTRADICTION";
        case Classification::CONTINGENT: return "CONTINGENT";
    }
    throw InternalInvariantViolation("unreachable classification");
}

std::string ratio_string(const ClassifyResult& r) {
    if (r.total == 0) return "1"; // vacuous: every sentence holds in all (zero) models
    std::uint64_t g = std::gcd(r.satisfying, r.total);
    std::uint64_t num = r.satisfying / g, den = r.total / g;
    if (num == 0) return "0";
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

ClassifyResult classify(const Theory& t, const Formula& f, std::size_t prop_bound) {
    require_propositional(f);
    check_formula(t.signature, f);
    PropModelSet ms = models_of(t, prop_bound);
    Bitset sat = lt_element(ms, f);
    ClassifyResult r;
    r.satisfying = sat.count();
    r.total = ms.size();
    if (r.satisfying == r.total) r.kind = Classification::TAUTOLOGY;
    else if (r.satisfying == 0) r.kind = Classification::CONTRADICTION;
    else r.kind = Classification::CONTINGENT;
    return r;
}

} // namespace catlog
