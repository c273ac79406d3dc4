#include "catlog/boolean.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "catlog/errors.hpp"

namespace catlog {

FiniteBooleanAlgebra FiniteBooleanAlgebra::powerset(std::size_t atoms) {
    std::vector<std::string> names;
    names.reserve(atoms);
    for (std::size_t i = 0; i < atoms; ++i) names.push_back("a" + std::to_string(i));
    return powerset(atoms, std::move(names));
}

FiniteBooleanAlgebra FiniteBooleanAlgebra::powerset(std::size_t atoms,
                                                    std::vector<std::string> atom_names) {
    if (atom_names.size() != atoms)
        throw ValidationError("atom name count does not match atom count");
    FiniteBooleanAlgebra b;
    b.atoms_ = atoms;
    b.atom_names_ = std::move(atom_names);
    return b;
}

std::uint64_t FiniteBooleanAlgebra::element_count() const {
    if (atoms_ > 63) throw BoundExceeded("element count overflows past 63 atoms");
    return std::uint64_t{1} << atoms_;
}

std::vector<Bitset> FiniteBooleanAlgebra::elements(std::size_t atom_bound) const {
    if (atoms_ > atom_bound)
        throw BoundExceeded("refusing to materialize 2^" + std::to_string(atoms_) + " elements");
    std::vector<Bitset> out;
    out.reserve(std::size_t{1} << atoms_);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << atoms_); ++r) {
        Bitset e(atoms_);
        for (std::size_t i = 0; i < atoms_; ++i)
            if ((r >> i) & 1) e.set(i);
        out.push_back(std::move(e));
    }
    return out;
}

std::string FiniteBooleanAlgebra::element_name(const Elem& e) const {
    if (e.size() != atoms_)
        throw ValidationError("element width does not match algebra");
    return e.to_string();
}

FiniteBooleanAlgebra FiniteBooleanAlgebra::from_tables(
    std::size_t n,
    const std::vector<std::vector<std::size_t>>& meet,
    const std::vector<std::vector<std::size_t>>& join,
    const std::vector<std::size_t>& complement,
    std::size_t zero, std::size_t one,
    std::vector<Bitset>* element_map_out) {
    if (n == 0) throw ValidationError("empty carrier");
    if (n > 64) throw BoundExceeded("table validation limited to 64 elements");
    auto check_table = [&](const std::vector<std::vector<std::size_t>>& t, const char* which) {
        if (t.size() != n) throw ValidationError(std::string(which) + " table has wrong size");
        for (const auto& row : t) {
            if (row.size() != n) throw ValidationError(std::string(which) + " table has wrong row size");
            for (std::size_t v : row)
                if (v >= n) throw ValidationError(std::string(which) + " table value out of range");
        }
    };
    check_table(meet, "meet");
    check_table(join, "join");
    if (complement.size() != n) throw ValidationError("complement table has wrong size");
    for (std::size_t v : complement)
        if (v >= n) throw ValidationError("complement table value out of range");
    if (zero >= n || one >= n) throw ValidationError("designated 0/1 out of range");
    if (zero == one && n > 1) throw ValidationError("0 = 1 in a non-degenerate carrier");

    auto law = [&](bool ok, const std::string& what) {
        if (!ok) throw ValidationError("Boolean law failed: " + what);
    };
    for (std::size_t a = 0; a < n; ++a) {
        law(meet[a][one] == a, "a ∧ 1 = a");
        law(join[a][zero] == a, "a ∨ 0 = a");
        law(meet[a][complement[a]] == zero, "a ∧ ¬a = 0");
        law(join[a][complement[a]] == one, "a ∨ ¬a = 1");
        for (std::size_t b = 0; b < n; ++b) {
            law(meet[a][b] == meet[b][a], "meet commutative");
            law(join[a][b] == join[b][a], "join commutative");
            law(meet[a][join[a][b]] == a, "absorption a ∧ (a ∨ b) = a");
            law(join[a][meet[a][b]] == a, "absorption a ∨ (a ∧ b) = a");
            for (std::size_t c = 0; c < n; ++c) {
                law(meet[meet[a][b]][c] == meet[a][meet[b][c]], "meet associative");
                law(join[join[a][b]][c] == join[a][join[b][c]], "join associative");
                law(meet[a][join[b][c]] == join[meet[a][b]][meet[a][c]],
                    "meet distributes over join");
            }
        }
    }

    // a ≤ b iff a ∧ b = a. Atoms are the minimal nonzero elements.
    auto leq = [&](std::size_t a, std::size_t b) { return meet[a][b] == a; };
    std::vector<std::size_t> atoms;
    for (std::size_t a = 0; a < n; ++a) {
        if (a == zero) continue;
        bool minimal = true;
        for (std::size_t b = 0; b < n; ++b)
            if (b != zero && b != a && leq(b, a)) { minimal = false; break; }
        if (minimal) atoms.push_back(a);
    }
    std::size_t k = atoms.size();
    if ((std::uint64_t{1} << k) != n)
        throw InternalInvariantViolation(
            "laws verified but carrier size is not 2^atoms; table validation is inconsistent");

    std::vector<Bitset> mapping(n, Bitset(k));
    std::unordered_set<Bitset, Bitset::Hash> images;
    for (std::size_t e = 0; e < n; ++e) {
        Bitset img(k);
        for (std::size_t i = 0; i < k; ++i)
            if (leq(atoms[i], e)) img.set(i);
        if (!images.insert(img).second)
            throw InternalInvariantViolation("two elements lie above the same atom set");
        mapping[e] = std::move(img);
    }
    if (element_map_out) *element_map_out = mapping;

    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back("a" + std::to_string(i));
    return powerset(k, std::move(names));
}

bool is_filter(const FiniteBooleanAlgebra& B, const std::vector<Bitset>& S) {
    std::unordered_set<Bitset, Bitset::Hash> F;
    for (const auto& e : S) {
        if (e.size() != B.atom_count())
            throw ValidationError("filter candidate element width does not match algebra");
        F.insert(e);
    }
    if (!F.count(B.top())) return false;
    if (F.count(B.bottom())) return false;
    for (const auto& a : F)
        for (const auto& b : F)
            if (!F.count(a & b)) return false;
    // Covers suffice for upward closure: any superset is reached by adding one
    // atom at a time.
    for (const auto& a : F) {
        for (std::size_t i = 0; i < B.atom_count(); ++i) {
            if (a.test(i)) continue;
            Bitset cover = a;
            cover.set(i);
            if (!F.count(cover)) return false;
        }
    }
    return true;
}

std::vector<Bitset> Ultrafilter::elements(std::size_t atom_bound) const {
    if (algebra_atoms > atom_bound)
        throw BoundExceeded("refusing to materialize an ultrafilter over 2^" +
                            std::to_string(algebra_atoms) + " elements");
    std::vector<Bitset> out;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << algebra_atoms); ++r) {
        if (!((r >> atom) & 1)) continue;
        Bitset e(algebra_atoms);
        for (std::size_t i = 0; i < algebra_atoms; ++i)
            if ((r >> i) & 1) e.set(i);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Ultrafilter> ultrafilters(const FiniteBooleanAlgebra& B) {
    if (B.is_degenerate())
        throw DegenerateAlgebra("the one-element algebra has no ultrafilters (1 ∈ F forces 0 ∈ F)");
    std::vector<Ultrafilter> out;
    for (std::size_t i = 0; i < B.atom_count(); ++i) out.push_back({i, B.atom_count()});
    return out;
}

std::vector<TwoValuedHom> hom_to_2(const FiniteBooleanAlgebra& B) {
    if (B.is_degenerate())
        throw DegenerateAlgebra("no map from the one-element algebra preserves both 0 and 1");
    std::vector<TwoValuedHom> out;
    for (std::size_t i = 0; i < B.atom_count(); ++i) out.push_back({i, B.atom_count()});
    return out;
}

Bitset StoneSpace::d_of(const Bitset& elem) const {
    if (elem.size() != points)
        throw ValidationError("element width does not match the Stone space");
    return elem; // point i corresponds to atom i, so D is the identity on bitsets
}

StoneSpace stone_space(const FiniteBooleanAlgebra& B, std::size_t atom_bound) {
    if (B.is_degenerate()) throw DegenerateAlgebra("the one-element algebra has no Stone space");
    if (B.atom_count() > atom_bound)
        throw BoundExceeded("basis materialization over 2^" + std::to_string(B.atom_count()) +
                            " elements refused");
    StoneSpace s;
    s.points = B.atom_count();
    for (std::size_t i = 0; i < s.points; ++i) s.point_names.push_back("U" + std::to_string(i));
    for (const auto& e : B.elements(atom_bound))
        s.basis.emplace_back(B.element_name(e), e);
    return s;
}

FiniteBooleanAlgebra clopen_algebra(const StoneSpace& S) {
    return FiniteBooleanAlgebra::powerset(S.points, S.point_names);
}

BooleanIso stone_round_trip(const FiniteBooleanAlgebra& B, std::size_t atom_bound) {
    if (B.is_degenerate()) throw DegenerateAlgebra("the one-element algebra has no Stone space");
    if (B.atom_count() > atom_bound)
        throw BoundExceeded("round-trip verification over 4^" + std::to_string(B.atom_count()) +
                            " element pairs refused");
    BooleanIso iso;
    iso.space = stone_space(B, atom_bound);
    iso.clopens = clopen_algebra(iso.space);
    auto elems = B.elements(atom_bound);

    auto broken = [](const std::string& what) {
        throw InternalInvariantViolation("stone round trip is not an isomorphism: " + what);
    };
    std::unordered_set<Bitset, Bitset::Hash> images;
    for (const auto& b : elems) {
        Bitset img = iso.space.d_of(b);
        if (!images.insert(img).second) broken("b ↦ D(b) is not injective");
        iso.mapping.emplace_back(b, img);
    }
    if (images.size() != elems.size()) broken("image count mismatch");
    if (!(iso.space.d_of(B.bottom()) == iso.clopens.bottom())) broken("D(0) ≠ ∅");
    if (!(iso.space.d_of(B.top()) == iso.clopens.top())) broken("D(1) ≠ all points");
    for (const auto& b : elems) {
        if (!(iso.space.d_of(B.complement(b)) == iso.clopens.complement(iso.space.d_of(b))))
            broken("D(¬b) ≠ ¬D(b) at " + B.element_name(b));
        for (const auto& c : elems) {
            if (!(iso.space.d_of(B.meet(b, c)) ==
                  iso.clopens.meet(iso.space.d_of(b), iso.space.d_of(c))))
                broken("D(b ∧ c) ≠ D(b) ∩ D(c)");
            if (!(iso.space.d_of(B.join(b, c)) ==
                  iso.clopens.join(iso.space.d_of(b), iso.space.d_of(c))))
                broken("D(b ∨ c) ≠ D(b) ∪ D(c)");
        }
    }
    return iso;
}

Bitset BooleanHom::apply(const Bitset& src_elem) const {
    if (src_elem.size() != src_atoms)
        throw ValidationError("element width does not match homomorphism source");
    Bitset out(dst_atoms);
    for (std::size_t j = 0; j < dst_atoms; ++j)
        if (src_elem.test(atom_map[j])) out.set(j);
    return out;
}

BooleanHom identity_hom(const FiniteBooleanAlgebra& B) {
    BooleanHom h;
    h.src_atoms = h.dst_atoms = B.atom_count();
    h.atom_map.resize(B.atom_count());
    for (std::size_t i = 0; i < B.atom_count(); ++i) h.atom_map[i] = i;
    return h;
}

BooleanHom compose(const BooleanHom& g, const BooleanHom& f) {
    if (f.dst_atoms != g.src_atoms)
        throw SignatureMismatch("homomorphisms not composable: codomain/domain mismatch");
    BooleanHom h;
    h.src_atoms = f.src_atoms;
    h.dst_atoms = g.dst_atoms;
    h.atom_map.resize(g.dst_atoms);
    for (std::size_t d = 0; d < g.dst_atoms; ++d) h.atom_map[d] = f.atom_map[g.atom_map[d]];
    return h;
}

BooleanHom hom_from_map(const FiniteBooleanAlgebra& B, const FiniteBooleanAlgebra& C,
                        const std::function<Bitset(const Bitset&)>& h, std::size_t atom_bound) {
    if (B.atom_count() > atom_bound)
        throw BoundExceeded("homomorphism validation over 4^" + std::to_string(B.atom_count()) +
                            " pairs refused");
    auto bad = [](const std::string& what) { throw NotAHomomorphism(what); };
    if (!(h(B.bottom()) == C.bottom())) bad("0 is not preserved");
    if (!(h(B.top()) == C.top())) bad("1 is not preserved");
    auto elems = B.elements(atom_bound);
    for (const auto& a : elems) {
        if (!(h(B.complement(a)) == C.complement(h(a))))
            bad("complement not preserved at " + B.element_name(a));
        for (const auto& b : elems) {
            if (!(h(B.meet(a, b)) == C.meet(h(a), h(b)))) bad("meet not preserved");
            if (!(h(B.join(a, b)) == C.join(h(a), h(b)))) bad("join not preserved");
        }
    }
    BooleanHom out;
    out.src_atoms = B.atom_count();
    out.dst_atoms = C.atom_count();
    out.atom_map.resize(C.atom_count());
    for (std::size_t j = 0; j < C.atom_count(); ++j) {
        std::size_t hits = 0, which = 0;
        for (std::size_t a = 0; a < B.atom_count(); ++a) {
            if (h(B.atom(a)).test(j)) { ++hits; which = a; }
        }
        if (hits != 1)
            throw InternalInvariantViolation(
                "laws verified but a target atom is not covered by exactly one source atom");
        out.atom_map[j] = which;
    }
    for (const auto& a : elems)
        if (!(out.apply(a) == h(a)))
            throw InternalInvariantViolation("atom form disagrees with the validated map");
    return out;
}

std::vector<BooleanHom> all_homs(const FiniteBooleanAlgebra& B, const FiniteBooleanAlgebra& C,
                                 std::size_t count_bound) {
    std::size_t src = B.atom_count(), dst = C.atom_count();
    std::vector<BooleanHom> out;
    if (dst == 0) {
        BooleanHom h;
        h.src_atoms = src;
        h.dst_atoms = 0;
        out.push_back(std::move(h));
        return out;
    }
    if (src == 0) return out; // nothing can preserve both 0 and 1
    double total = std::pow(static_cast<double>(src), static_cast<double>(dst));
    if (total > static_cast<double>(count_bound))
        throw BoundExceeded("homomorphism enumeration of " + std::to_string(total) +
                            " candidates refused");
    std::vector<std::size_t> map(dst, 0);
    for (;;) {
        BooleanHom h;
        h.src_atoms = src;
        h.dst_atoms = dst;
        h.atom_map = map;
        out.push_back(std::move(h));
        std::size_t i = dst;
        while (i > 0) {
            --i;
            if (++map[i] < src) break;
            map[i] = 0;
            if (i == 0) return out;
        }
    }
}

StoneMap identity_stone_map(std::size_t points) {
    StoneMap m;
    m.src_points = m.dst_points = points;
    m.point_map.resize(points);
    for (std::size_t i = 0; i < points; ++i) m.point_map[i] = i;
    return m;
}

StoneMap compose(const StoneMap& g, const StoneMap& f) {
    if (f.dst_points != g.src_points)
        throw SignatureMismatch("Stone maps not composable: codomain/domain mismatch");
    StoneMap m;
    m.src_points = f.src_points;
    m.dst_points = g.dst_points;
    m.point_map.resize(f.src_points);
    for (std::size_t i = 0; i < f.src_points; ++i) m.point_map[i] = g.point_map[f.point_map[i]];
    return m;
}

StoneMap dual_hom(const BooleanHom& h) {
    StoneMap m;
    m.src_points = h.dst_atoms; // Stone(C)
    m.dst_points = h.src_atoms; // Stone(B)
    m.point_map = h.atom_map;   // U_j ↦ h⁻¹(U_j) = U_{atom_map[j]}
    return m;
}

Theory theory_of_algebra(const FiniteBooleanAlgebra& B, std::size_t prop_bound) {
    std::size_t k = B.atom_count();
    if (k > 63 || (std::uint64_t{1} << k) > prop_bound)
        throw BoundExceeded("algebra has more elements than the proposition bound");
    auto elems = B.elements(63);
    std::size_t n = elems.size();
    auto cname = [](std::size_t rank) { return "c" + std::to_string(rank); };

    Theory t;
    t.name = "TB";
    for (std::size_t r = 0; r < n; ++r) t.signature.propositions.push_back(cname(r));
    const Signature& sig = t.signature;

    std::vector<Formula> axioms;
    axioms.push_back(Formula::neg(Formula::prop(cname(0))));
    axioms.push_back(Formula::prop(cname(n - 1)));
    // b ≤ c becomes c_b → c_c; pairs with b = 0 or c = 1 are entailed already.
    for (std::size_t i = 1; i + 1 < n; ++i)
        for (std::size_t j = 1; j + 1 < n; ++j) {
            if (i == j) continue;
            if (B.leq(elems[i], elems[j]))
                axioms.push_back(
                    Formula::implies(Formula::prop(cname(i)), Formula::prop(cname(j))));
        }
    // Meets of incomparable pairs; comparable pairs are covered above.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (B.leq(elems[i], elems[j]) || B.leq(elems[j], elems[i])) continue;
            std::uint64_t m = B.meet(elems[i], elems[j]).to_uint64();
            axioms.push_back(Formula::implies(
                Formula::conj(Formula::prop(cname(i)), Formula::prop(cname(j))),
                Formula::prop(cname(m))));
        }
    // Maximality: one of b, ¬b holds. The {0, 1} pair is already forced.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        std::uint64_t c = B.complement(elems[i]).to_uint64();
        if (static_cast<std::uint64_t>(i) < c)
            axioms.push_back(
                Formula::disj(Formula::prop(cname(i)), Formula::prop(cname(c))));
    }
    for (auto& f : axioms) t.axioms.push_back(make_axiom(sig, std::move(f)));
    t.fragment = least_fragment(t.signature, t.axioms);
    return t;
}

} // namespace catlog
