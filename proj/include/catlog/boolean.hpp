#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "catlog/bitset.hpp"
#include "catlog/syntax.hpp"

namespace catlog {

// Finite Boolean algebra, normalized to the powerset of its atoms: an element
// is the bitset of atoms below it. Operations are set operations; 0 is the
// empty set, 1 the full set. The degenerate (one-element) algebra has zero
// atoms, so 0 = 1 there.
class FiniteBooleanAlgebra {
public:
    using Elem = Bitset;

    FiniteBooleanAlgebra() = default;

    static FiniteBooleanAlgebra powerset(std::size_t atoms);
    static FiniteBooleanAlgebra powerset(std::size_t atoms, std::vector<std::string> atom_names);
    static FiniteBooleanAlgebra degenerate() { return powerset(0); }

    // Validates Boolean-algebra laws on explicit operation tables (foreign
    // input) and normalizes to atoms. On success, element_map_out[i] is the
    // normalized image of table element i.
    static FiniteBooleanAlgebra from_tables(
        std::size_t n,
        const std::vector<std::vector<std::size_t>>& meet,
        const std::vector<std::vector<std::size_t>>& join,
        const std::vector<std::size_t>& complement,
        std::size_t zero, std::size_t one,
        std::vector<Bitset>* element_map_out = nullptr);

    std::size_t atom_count() const { return atoms_; }
    const std::vector<std::string>& atom_names() const { return atom_names_; }
    bool is_degenerate() const { return atoms_ == 0; }

    std::uint64_t element_count() const; // throws BoundExceeded over 63 atoms

    Elem bottom() const { return Bitset(atoms_); }
    Elem top() const { return Bitset::ones(atoms_); }
    Elem atom(std::size_t i) const { return Bitset::singleton(atoms_, i); }
    Elem meet(const Elem& a, const Elem& b) const { return a & b; }
    Elem join(const Elem& a, const Elem& b) const { return a | b; }
    Elem complement(const Elem& a) const { return ~a; }
    bool leq(const Elem& a, const Elem& b) const { return a.is_subset_of(b); }

    // All elements in rank order (the bitset read as a binary number). Guarded:
    // materialization is exponential in the atom count.
    std::vector<Elem> elements(std::size_t atom_bound = 20) const;

    // Canonical element label: the atom-membership bitstring (position i =
    // atom i).
    std::string element_name(const Elem& e) const;

    // Generator images, e.g. the propositions of a Lindenbaum-Tarski algebra.
    std::vector<std::pair<std::string, Elem>> generators;

private:
    std::size_t atoms_ = 0;
    std::vector<std::string> atom_names_;
};

// The three filter conditions: 1 ∈ F and 0 ∉ F; upward closed; closed under
// meet. S is a set of elements (duplicates ignored).
bool is_filter(const FiniteBooleanAlgebra& B, const std::vector<Bitset>& S);

// In a finite Boolean algebra every ultrafilter is principal on an atom, so an
// ultrafilter is carried as its generating atom.
struct Ultrafilter {
    std::size_t atom = 0;
    std::size_t algebra_atoms = 0;
    bool contains(const Bitset& elem) const { return elem.test(atom); }
    // Materializes ↑atom in rank order.
    std::vector<Bitset> elements(std::size_t atom_bound = 20) const;
    bool operator==(const Ultrafilter&) const = default;
};

std::vector<Ultrafilter> ultrafilters(const FiniteBooleanAlgebra& B);

// Structure-preserving map B → 2, determined by the atom its kernel misses:
// p(b) = 1 iff the atom lies below b.
struct TwoValuedHom {
    std::size_t atom = 0;
    std::size_t algebra_atoms = 0;
    bool operator()(const Bitset& elem) const { return elem.test(atom); }
    bool operator==(const TwoValuedHom&) const = default;
};

std::vector<TwoValuedHom> hom_to_2(const FiniteBooleanAlgebra& B);

// Stone space of a finite algebra: one point per ultrafilter (hence per atom),
// with the full basis D(b) = {U : b ∈ U} materialized in element-rank order.
struct StoneSpace {
    std::size_t points = 0;
    std::vector<std::string> point_names;
    std::vector<std::pair<std::string, Bitset>> basis; // element name → point set
    Bitset d_of(const Bitset& elem) const;             // D(b)
};

StoneSpace stone_space(const FiniteBooleanAlgebra& B, std::size_t atom_bound = 16);

// Algebra of all point subsets (in a finite Stone space every subset is
// clopen).
FiniteBooleanAlgebra clopen_algebra(const StoneSpace& S);

struct BooleanIso {
    std::vector<std::pair<Bitset, Bitset>> mapping; // b → D(b), element-rank order
    StoneSpace space;
    FiniteBooleanAlgebra clopens;
};

// The duality round trip b ↦ D(b), exhaustively verified as a Boolean
// isomorphism onto clopen_algebra(stone_space(B)). Throws
// InternalInvariantViolation if any law fails (it must not, for valid B).
BooleanIso stone_round_trip(const FiniteBooleanAlgebra& B, std::size_t atom_bound = 12);

// Homomorphism between atom-normalized algebras. Such a map is exactly a
// function sending each target atom to the source atom whose image covers it:
// h(b) contains target atom j iff b contains atom_map[j].
struct BooleanHom {
    std::size_t src_atoms = 0;
    std::size_t dst_atoms = 0;
    std::vector<std::size_t> atom_map;
    Bitset apply(const Bitset& src_elem) const;
    bool operator==(const BooleanHom&) const = default;
};

BooleanHom identity_hom(const FiniteBooleanAlgebra& B);
// g ∘ f (apply f first).
BooleanHom compose(const BooleanHom& g, const BooleanHom& f);

// Validates an arbitrary element map B → C as a Boolean homomorphism
// (exhaustive law check) and converts it to atom form. Throws
// NotAHomomorphism with the failing law.
BooleanHom hom_from_map(const FiniteBooleanAlgebra& B, const FiniteBooleanAlgebra& C,
                        const std::function<Bitset(const Bitset&)>& h,
                        std::size_t atom_bound = 10);

// All homomorphisms B → C in lexicographic atom_map order.
std::vector<BooleanHom> all_homs(const FiniteBooleanAlgebra& B, const FiniteBooleanAlgebra& C,
                                 std::size_t count_bound = 1u << 20);

// Point map between finite Stone spaces.
struct StoneMap {
    std::size_t src_points = 0;
    std::size_t dst_points = 0;
    std::vector<std::size_t> point_map;
    bool operator==(const StoneMap&) const = default;
};

StoneMap identity_stone_map(std::size_t points);
// g ∘ f (apply f first).
StoneMap compose(const StoneMap& g, const StoneMap& f);

// Contravariant dual of h: B → C, the map Stone(C) → Stone(B), U ↦ h⁻¹(U).
// Continuity is witnessed by construction: the preimage of D_B(b) is
// D_C(h(b)).
StoneMap dual_hom(const BooleanHom& h);

// The propositional theory with one proposition per element of B, axiomatized
// so that its models are exactly the two-valued homomorphisms of B; its
// Lindenbaum-Tarski algebra is isomorphic to B.
Theory theory_of_algebra(const FiniteBooleanAlgebra& B, std::size_t prop_bound = 20);

} // namespace catlog
