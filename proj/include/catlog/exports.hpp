#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "catlog/boolean.hpp"
#include "catlog/coherent.hpp"
#include "catlog/equational.hpp"

namespace catlog {

// All JSON emitters return plain nlohmann::json objects (keys serialize in
// sorted order, so dumps are deterministic). DOT emitters return complete
// graph descriptions.

// { "points": [names], "basis": { element-name: [point indices] } }
nlohmann::json stone_space_json(const StoneSpace& S);

// One node per point, no edges (a finite Stone space is discrete, so the
// specialization diagram is the identity); each node is labeled with the
// names of the basis elements whose D(b) contains it.
std::string stone_space_dot(const StoneSpace& S);

// { "atoms": n, "atom_names": [...], "elements": n, "generators": { name:
// element-name } }
nlohmann::json algebra_json(const FiniteBooleanAlgebra& B);

// Hasse diagram of the algebra order: one node per element (labeled with its
// atom bitstring), one edge per covering pair, drawn bottom to top.
std::string algebra_dot(const FiniteBooleanAlgebra& B, std::size_t atom_bound = 6);

// { "size": n, "tables": [[...], ...] }
nlohmann::json algebra_tables_json(const FiniteAlgebra& M);

// { "size": n, "labeled": k, "models": [tables...] }
nlohmann::json models_json(std::size_t size, const std::vector<FiniteAlgebra>& models);

// Adds to models_json: "classes": [{ "representative": tables, "orbit_size":
// k }] and "homs": [{ "src": i, "dst": j, "count": c, "maps": [[...]...] }]
// between class representatives.
nlohmann::json iso_classes_json(std::size_t size, const std::vector<FiniteAlgebra>& models,
                                const std::vector<IsoClass>& classes,
                                std::size_t hom_bound = 1'000'000);

// Category of models up to isomorphism: one node per class representative
// (labeled with its index and orbit size), one arrow per ordered pair with at
// least one homomorphism, labeled with the homomorphism count.
std::string models_category_dot(const std::vector<IsoClass>& classes,
                                std::size_t hom_bound = 1'000'000);

// { "src_arity": n, "dst_arity": m, "depth": d, "backend": name, "classes":
// [term strings], "morphisms": [[term strings]] }
nlohmann::json syn_json(const SynCalculus& calc, std::size_t src_arity, std::size_t dst_arity,
                        std::size_t depth);

// { "objects": [{ "sizes": [...], "automorphisms": k }], "isos": [{ "src": i,
// "dst": j, "count": c }], "basis": { sentence-text: [object indices] } }
// The basis covers the canonical sentence corpus up to the given depth.
nlohmann::json groupoid_json(const ModelGroupoid& G, std::size_t basis_depth,
                             const StructOptions& opts = {});

// One node per object (labeled with its carrier sizes and automorphism
// count), one undirected edge per unordered pair with a nonempty iso hom-set,
// labeled with the hom-set cardinality.
std::string groupoid_dot(const ModelGroupoid& G);

} // namespace catlog
