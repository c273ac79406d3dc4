#include "catlog/coherent.hpp"

#include <algorithm>
#include <thread>

#include "catlog/errors.hpp"

namespace catlog {

namespace {

bool next_tuple(std::vector<std::size_t>& v, const std::vector<std::size_t>& radix) {
    for (std::size_t i = v.size(); i-- > 0;) {
        if (++v[i] < radix[i]) return true;
        v[i] = 0;
    }
    return false;
}

struct Env {
    std::vector<std::pair<std::string, std::size_t>> vals; // name -> carrier value

    std::size_t lookup(const std::string& name) const {
        for (std::size_t i = vals.size(); i-- > 0;)
            if (vals[i].first == name) return vals[i].second;
        throw InternalInvariantViolation("unbound variable '" + name + "' during evaluation");
    }
};

std::size_t eval_fo_term(const Signature& sig, const FiniteStructure& M, const Term& t,
                         const Env& env) {
    if (t.is_var()) return env.lookup(t.name);
    std::size_t fi = sig.function_index(t.name);
    const FunctionSym& f = sig.functions[fi];
    std::size_t idx = 0;
    for (std::size_t a = 0; a < t.args.size(); ++a)
        idx = idx * M.sizes[sig.sort_index(f.arg_sorts[a])] +
              eval_fo_term(sig, M, t.args[a], env);
    return M.fn_tables[fi][idx];
}

struct EvalBudget {
    std::uint64_t steps = 0;
    std::uint64_t limit = 0;
    void charge() {
        if (++steps > limit)
            throw BoundExceeded("satisfaction search exceeded the budget of " +
                                std::to_string(limit) + " steps");
    }
};

bool eval_fo(const Signature& sig, const FiniteStructure& M, const Formula& f, Env& env,
             EvalBudget& budget) {
    switch (f.kind) {
    case FormulaKind::Truth: return true;
    case FormulaKind::Falsity: return false;
    case FormulaKind::Prop: return M.props[sig.proposition_index(f.name)];
    case FormulaKind::Equation:
        return eval_fo_term(sig, M, f.terms[0], env) == eval_fo_term(sig, M, f.terms[1], env);
    case FormulaKind::Inequation:
        return eval_fo_term(sig, M, f.terms[0], env) != eval_fo_term(sig, M, f.terms[1], env);
    case FormulaKind::Predicate: {
        std::size_t pi = sig.predicate_index(f.name);
        const PredicateSym& p = sig.predicates[pi];
        std::size_t idx = 0;
        for (std::size_t a = 0; a < f.terms.size(); ++a)
            idx = idx * M.sizes[sig.sort_index(p.arg_sorts[a])] +
                  eval_fo_term(sig, M, f.terms[a], env);
        return M.rel_tables[pi].test(idx);
    }
    case FormulaKind::And:
        return eval_fo(sig, M, f.children[0], env, budget) &&
               eval_fo(sig, M, f.children[1], env, budget);
    case FormulaKind::Or:
        return eval_fo(sig, M, f.children[0], env, budget) ||
               eval_fo(sig, M, f.children[1], env, budget);
    case FormulaKind::Exists: {
        std::size_t n = M.sizes[sig.sort_index(f.sort)];
        env.vals.emplace_back(f.name, 0);
        for (std::size_t v = 0; v < n; ++v) {
            budget.charge();
            env.vals.back().second = v;
            if (eval_fo(sig, M, f.children[0], env, budget)) {
                env.vals.pop_back();
                return true;
            }
        }
        env.vals.pop_back();
        return false;
    }
    default:
        throw FragmentViolation("formula leaves the coherent fragment: " + print_formula(f));
    }
}

} // namespace

bool satisfies_fo(const Signature& sig, const FiniteStructure& M, const Formula& sentence,
                  std::uint64_t eval_budget) {
    if (!check_fragment(sentence))
        throw FragmentViolation("not a coherent formula: " + print_formula(sentence));
    if (!free_vars(sentence).empty())
        throw FragmentViolation("sentence has free variables: " + print_formula(sentence));
    check_formula(sig, sentence);
    Env env;
    EvalBudget budget{0, eval_budget};
    return eval_fo(sig, M, sentence, env, budget);
}

bool satisfies_axiom(const Signature& sig, const FiniteStructure& M, const Axiom& ax,
                     std::uint64_t eval_budget) {
    Env env;
    EvalBudget budget{0, eval_budget};
    std::vector<std::size_t> radix;
    for (const auto& v : ax.context) {
        radix.push_back(M.sizes[sig.sort_index(v.sort)]);
        env.vals.emplace_back(v.name, 0);
    }
    std::vector<std::size_t> tuple(radix.size(), 0);
    do {
        budget.charge();
        for (std::size_t i = 0; i < tuple.size(); ++i) env.vals[i].second = tuple[i];
        bool premise = !ax.is_sequent || eval_fo(sig, M, ax.premise, env, budget);
        if (premise && !eval_fo(sig, M, ax.conclusion, env, budget)) return false;
    } while (next_tuple(tuple, radix));
    return true;
}

// ---- enumeration ----

namespace {

// Mixed-radix cell layout of all structures at one size vector: function
// cells first, then relation bits, then proposition bits; earlier cells are
// more significant.
struct CellLayout {
    std::vector<std::size_t> radix;
    std::vector<std::size_t> fn_cells;  // per function
    std::vector<std::size_t> rel_cells; // per predicate

    static CellLayout build(const Signature& sig, const std::vector<std::size_t>& sizes,
                            std::uint64_t cell_limit) {
        CellLayout L;
        for (const auto& f : sig.functions) {
            std::uint64_t cells = 1;
            for (const auto& s : f.arg_sorts) cells *= sizes[sig.sort_index(s)];
            if (cells > cell_limit) throw BoundExceeded("operation table too large");
            L.fn_cells.push_back(static_cast<std::size_t>(cells));
            std::size_t r = sizes[sig.sort_index(f.result_sort)];
            for (std::uint64_t c = 0; c < cells; ++c) L.radix.push_back(r);
        }
        for (const auto& p : sig.predicates) {
            std::uint64_t cells = 1;
            for (const auto& s : p.arg_sorts) cells *= sizes[sig.sort_index(s)];
            if (cells > cell_limit) throw BoundExceeded("relation table too large");
            L.rel_cells.push_back(static_cast<std::size_t>(cells));
            for (std::uint64_t c = 0; c < cells; ++c) L.radix.push_back(2);
        }
        for (std::size_t i = 0; i < sig.propositions.size(); ++i) L.radix.push_back(2);
        if (L.radix.size() > cell_limit) throw BoundExceeded("structure candidate too large");
        return L;
    }

    // Candidate count, clamped: returns limit+1 when the product exceeds it.
    std::uint64_t count(std::uint64_t limit) const {
        std::uint64_t n = 1;
        for (std::size_t r : radix) {
            if (r != 0 && n > limit / r) return limit + 1;
            n *= r;
        }
        return n;
    }

    std::vector<std::size_t> decode(std::uint64_t index) const {
        std::vector<std::size_t> cells(radix.size(), 0);
        for (std::size_t i = radix.size(); i-- > 0;) {
            cells[i] = static_cast<std::size_t>(index % radix[i]);
            index /= radix[i];
        }
        return cells;
    }

    FiniteStructure materialize(const std::vector<std::size_t>& sizes,
                                const std::vector<std::size_t>& cells) const {
        FiniteStructure M;
        M.sizes = sizes;
        std::size_t pos = 0;
        for (std::size_t f = 0; f < fn_cells.size(); ++f) {
            M.fn_tables.emplace_back(cells.begin() + pos, cells.begin() + pos + fn_cells[f]);
            pos += fn_cells[f];
        }
        for (std::size_t p = 0; p < rel_cells.size(); ++p) {
            Bitset rel(rel_cells[p]);
            for (std::size_t c = 0; c < rel_cells[p]; ++c)
                if (cells[pos + c]) rel.set(c);
            M.rel_tables.push_back(std::move(rel));
            pos += rel_cells[p];
        }
        for (; pos < cells.size(); ++pos) M.props.push_back(cells[pos] != 0);
        return M;
    }
};

bool satisfies_theory(const Theory& t, const FiniteStructure& M, std::uint64_t eval_budget) {
    for (const auto& ax : t.axioms)
        if (!satisfies_axiom(t.signature, M, ax, eval_budget)) return false;
    return true;
}

} // namespace

std::vector<FiniteStructure> enumerate_structures(const Theory& t,
                                                  const std::vector<SizeRange>& bounds,
                                                  const StructOptions& opts) {
    if (!fits_coherent(t))
        throw FragmentViolation("theory '" + t.name + "' does not fit the coherent fragment");
    const Signature& sig = t.signature;
    if (bounds.size() != sig.sorts.size())
        throw ValidationError("expected one size range per sort (" +
                              std::to_string(sig.sorts.size()) + "), got " +
                              std::to_string(bounds.size()));

    std::vector<std::vector<std::size_t>> size_vectors;
    {
        bool empty = false;
        for (const auto& r : bounds) {
            if (r.lo == 0) throw ValidationError("carrier sizes start at 1");
            if (r.lo > r.hi) empty = true;
        }
        if (!empty) {
            std::vector<std::size_t> v, radix;
            for (const auto& r : bounds) {
                v.push_back(0);
                radix.push_back(r.hi - r.lo + 1);
            }
            do {
                std::vector<std::size_t> sizes(bounds.size());
                for (std::size_t i = 0; i < bounds.size(); ++i) sizes[i] = bounds[i].lo + v[i];
                size_vectors.push_back(std::move(sizes));
            } while (next_tuple(v, radix));
        }
    }

    std::vector<CellLayout> layouts;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& sizes : size_vectors) {
        layouts.push_back(CellLayout::build(sig, sizes, opts.candidate_budget));
        counts.push_back(layouts.back().count(opts.candidate_budget));
        total += counts.back();
        if (total > opts.candidate_budget)
            throw BoundExceeded("structure candidate count exceeds the budget of " +
                                std::to_string(opts.candidate_budget));
    }

    std::vector<FiniteStructure> out;
    for (std::size_t sv = 0; sv < size_vectors.size(); ++sv) {
        const auto& sizes = size_vectors[sv];
        const auto& L = layouts[sv];
        std::uint64_t n = counts[sv];
        unsigned workers = std::max(1u, opts.workers);
        std::uint64_t chunk = (n + workers - 1) / workers;

        std::vector<std::vector<FiniteStructure>> found(workers);
        auto work = [&](unsigned w) {
            std::uint64_t lo = w * chunk, hi = std::min(n, (w + 1) * chunk);
            if (lo >= hi) return;
            std::vector<std::size_t> cells = L.decode(lo);
            for (std::uint64_t i = lo; i < hi; ++i) {
                FiniteStructure M = L.materialize(sizes, cells);
                if (satisfies_theory(t, M, opts.eval_budget)) found[w].push_back(std::move(M));
                if (i + 1 < hi) next_tuple(cells, L.radix);
            }
        };

        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> threads;
            std::vector<std::exception_ptr> errors(workers);
            for (unsigned w = 0; w < workers; ++w)
                threads.emplace_back([&, w] {
                    try {
                        work(w);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            for (auto& th : threads) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
        for (auto& chunk_found : found)
            for (auto& m : chunk_found) out.push_back(std::move(m));
    }
    return out;
}

// ---- isomorphisms ----

StructureIso identity_iso(const FiniteStructure& M) {
    StructureIso iso;
    for (std::size_t n : M.sizes) {
        std::vector<std::size_t> id(n);
        for (std::size_t i = 0; i < n; ++i) id[i] = i;
        iso.maps.push_back(std::move(id));
    }
    return iso;
}

StructureIso inverse(const StructureIso& f) {
    StructureIso inv;
    for (const auto& m : f.maps) {
        std::vector<std::size_t> r(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) r[m[i]] = i;
        inv.maps.push_back(std::move(r));
    }
    return inv;
}

StructureIso compose(const StructureIso& g, const StructureIso& f) {
    if (f.maps.size() != g.maps.size())
        throw SignatureMismatch("isomorphisms have different sort counts");
    StructureIso out;
    for (std::size_t s = 0; s < f.maps.size(); ++s) {
        if (f.maps[s].size() != g.maps[s].size())
            throw SignatureMismatch("isomorphisms have different carrier sizes");
        std::vector<std::size_t> m(f.maps[s].size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.maps[s][f.maps[s][i]];
        out.maps.push_back(std::move(m));
    }
    return out;
}

namespace {

bool preserves(const Signature& sig, const FiniteStructure& M, const FiniteStructure& N,
               const StructureIso& iso) {
    for (std::size_t f = 0; f < sig.functions.size(); ++f) {
        const auto& fn = sig.functions[f];
        std::vector<std::size_t> radix;
        for (const auto& s : fn.arg_sorts) radix.push_back(M.sizes[sig.sort_index(s)]);
        std::size_t result_sort = sig.sort_index(fn.result_sort);
        std::vector<std::size_t> args(radix.size(), 0);
        do {
            std::size_t src = 0, dst = 0;
            for (std::size_t a = 0; a < args.size(); ++a) {
                std::size_t sort = sig.sort_index(fn.arg_sorts[a]);
                src = src * radix[a] + args[a];
                dst = dst * radix[a] + iso.maps[sort][args[a]];
            }
            if (iso.maps[result_sort][M.fn_tables[f][src]] != N.fn_tables[f][dst]) return false;
        } while (next_tuple(args, radix));
    }
    for (std::size_t p = 0; p < sig.predicates.size(); ++p) {
        const auto& pr = sig.predicates[p];
        std::vector<std::size_t> radix;
        for (const auto& s : pr.arg_sorts) radix.push_back(M.sizes[sig.sort_index(s)]);
        std::vector<std::size_t> args(radix.size(), 0);
        do {
            std::size_t src = 0, dst = 0;
            for (std::size_t a = 0; a < args.size(); ++a) {
                std::size_t sort = sig.sort_index(pr.arg_sorts[a]);
                src = src * radix[a] + args[a];
                dst = dst * radix[a] + iso.maps[sort][args[a]];
            }
            if (M.rel_tables[p].test(src) != N.rel_tables[p].test(dst)) return false;
        } while (next_tuple(args, radix));
    }
    return true;
}

} // namespace

std::vector<StructureIso> isomorphisms(const Signature& sig, const FiniteStructure& M,
                                       const FiniteStructure& N, std::uint64_t iso_budget) {
    std::vector<StructureIso> out;
    if (M.sizes != N.sizes || M.props != N.props) return out;

    std::uint64_t families = 1;
    for (std::size_t n : M.sizes) {
        for (std::size_t k = 2; k <= n; ++k) {
            if (families > iso_budget / k)
                throw BoundExceeded("permutation family count exceeds the budget of " +
                                    std::to_string(iso_budget));
            families *= k;
        }
    }

    // All permutations per sort, in lexicographic order.
    std::vector<std::vector<std::vector<std::size_t>>> perms(M.sizes.size());
    for (std::size_t s = 0; s < M.sizes.size(); ++s) {
        std::vector<std::size_t> p(M.sizes[s]);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = i;
        do perms[s].push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
    }

    std::vector<std::size_t> pick(M.sizes.size(), 0);
    std::vector<std::size_t> radix;
    for (const auto& ps : perms) radix.push_back(ps.size());
    do {
        StructureIso iso;
        for (std::size_t s = 0; s < pick.size(); ++s) iso.maps.push_back(perms[s][pick[s]]);
        if (preserves(sig, M, N, iso)) out.push_back(std::move(iso));
    } while (next_tuple(pick, radix));
    return out;
}

// ---- groupoid ----

ModelGroupoid groupoid(const Theory& t, const std::vector<SizeRange>& bounds,
                       const StructOptions& opts) {
    ModelGroupoid G;
    G.theory = t;
    G.objects = enumerate_structures(t, bounds, opts);
    std::size_t n = G.objects.size();
    G.homs.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        G.homs[i].assign(n, {});
        for (std::size_t j = 0; j < n; ++j)
            G.homs[i][j] = isomorphisms(t.signature, G.objects[i], G.objects[j], opts.iso_budget);
    }

    auto member = [&](std::size_t i, std::size_t j, const StructureIso& f) {
        for (const auto& g : G.homs[i][j])
            if (g == f) return true;
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!member(i, i, identity_iso(G.objects[i])))
            throw InternalInvariantViolation("groupoid is missing an identity");
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& f : G.homs[i][j]) {
                if (!member(j, i, inverse(f)))
                    throw InternalInvariantViolation("groupoid is missing an inverse");
                for (std::size_t k = 0; k < n; ++k)
                    for (const auto& g : G.homs[j][k])
                        if (!member(i, k, compose(g, f)))
                            throw InternalInvariantViolation(
                                "groupoid is not closed under composition");
            }
    }
    return G;
}

BasisOpen basic_open(const ModelGroupoid& G, const Formula& sentence,
                     const StructOptions& opts) {
    BasisOpen open;
    open.sentence = sentence;
    open.members = Bitset(G.objects.size());
    for (std::size_t i = 0; i < G.objects.size(); ++i)
        if (satisfies_fo(G.theory.signature, G.objects[i], sentence, opts.eval_budget))
            open.members.set(i);
    for (std::size_t i = 0; i < G.objects.size(); ++i)
        for (std::size_t j = 0; j < G.objects.size(); ++j)
            if (!G.homs[i][j].empty() && open.members.test(i) != open.members.test(j))
                throw InternalInvariantViolation(
                    "satisfaction is not isomorphism-invariant for: " + print_formula(sentence));
    return open;
}

// ---- sentence corpus ----

namespace {

struct CorpusBuilder {
    const Signature& sig;
    std::size_t bound;
    std::size_t produced = 0;

    void charge() {
        if (++produced > bound)
            throw BoundExceeded("sentence corpus exceeds the bound of " + std::to_string(bound));
    }

    // Terms of depth ≤ 1 over the context, per sort: variables, constants,
    // then single applications with variable arguments.
    std::vector<std::vector<Term>> terms_by_sort(const std::vector<Var>& ctx) const {
        std::vector<std::vector<Term>> by_sort(sig.sorts.size());
        for (const auto& v : ctx)
            by_sort[sig.sort_index(v.sort)].push_back(Term::var(v.name, v.sort));
        for (const auto& f : sig.functions) {
            if (f.arg_sorts.empty()) {
                by_sort[sig.sort_index(f.result_sort)].push_back(Term::app(sig, f.name, {}));
                continue;
            }
            std::vector<std::vector<Term>> cands;
            bool possible = true;
            for (const auto& s : f.arg_sorts) {
                std::vector<Term> vars;
                for (const auto& v : ctx)
                    if (v.sort == s) vars.push_back(Term::var(v.name, v.sort));
                if (vars.empty()) possible = false;
                cands.push_back(std::move(vars));
            }
            if (!possible) continue;
            std::vector<std::size_t> pick(cands.size(), 0), radix;
            for (const auto& c : cands) radix.push_back(c.size());
            do {
                std::vector<Term> args;
                for (std::size_t a = 0; a < pick.size(); ++a) args.push_back(cands[a][pick[a]]);
                by_sort[sig.sort_index(f.result_sort)].push_back(
                    Term::app(sig, f.name, std::move(args)));
            } while (next_tuple(pick, radix));
        }
        return by_sort;
    }

    std::vector<Formula> atoms(const std::vector<Var>& ctx) const {
        std::vector<Formula> out{Formula::truth(), Formula::falsity()};
        auto by_sort = terms_by_sort(ctx);
        for (const auto& terms : by_sort)
            for (std::size_t i = 0; i < terms.size(); ++i)
                for (std::size_t j = i; j < terms.size(); ++j)
                    out.push_back(Formula::equation(terms[i], terms[j]));
        for (const auto& terms : by_sort)
            for (std::size_t i = 0; i < terms.size(); ++i)
                for (std::size_t j = i + 1; j < terms.size(); ++j)
                    out.push_back(Formula::inequation(terms[i], terms[j]));
        for (const auto& p : sig.predicates) {
            std::vector<std::size_t> radix;
            bool possible = true;
            for (const auto& s : p.arg_sorts) {
                std::size_t n = by_sort[sig.sort_index(s)].size();
                if (n == 0) possible = false;
                radix.push_back(n);
            }
            if (!possible) continue;
            std::vector<std::size_t> pick(radix.size(), 0);
            do {
                std::vector<Term> args;
                for (std::size_t a = 0; a < pick.size(); ++a)
                    args.push_back(by_sort[sig.sort_index(p.arg_sorts[a])][pick[a]]);
                out.push_back(Formula::predicate(p.name, std::move(args)));
            } while (next_tuple(pick, radix));
        }
        for (const auto& pr : sig.propositions) out.push_back(Formula::prop(pr));
        return out;
    }

    // All sentences of exact quantifier depth d over the context: atoms and
    // atom pairs at depth 0; bare existentials and atom-with-existential
    // pairs above (two existentials never pair).
    std::vector<Formula> exact(std::size_t d, const std::vector<Var>& ctx) {
        std::vector<Formula> out;
        std::vector<Formula> as = atoms(ctx);
        if (d == 0) {
            for (const auto& a : as) {
                charge();
                out.push_back(a);
            }
            for (std::size_t i = 0; i < as.size(); ++i)
                for (std::size_t j = i + 1; j < as.size(); ++j) {
                    charge();
                    out.push_back(Formula::conj(as[i], as[j]));
                }
            for (std::size_t i = 0; i < as.size(); ++i)
                for (std::size_t j = i + 1; j < as.size(); ++j) {
                    charge();
                    out.push_back(Formula::disj(as[i], as[j]));
                }
            return out;
        }
        std::vector<Formula> ex;
        std::string bound_name = "x" + std::to_string(ctx.size() + 1);
        for (const auto& sort : sig.sorts) {
            std::vector<Var> inner = ctx;
            inner.push_back({bound_name, sort});
            for (auto& body : exact(d - 1, inner))
                ex.push_back(Formula::exists(bound_name, sort, std::move(body)));
        }
        for (const auto& e : ex) {
            charge();
            out.push_back(e);
        }
        for (const auto& a : as)
            for (const auto& e : ex) {
                charge();
                out.push_back(Formula::conj(a, e));
            }
        for (const auto& a : as)
            for (const auto& e : ex) {
                charge();
                out.push_back(Formula::disj(a, e));
            }
        return out;
    }
};

} // namespace

std::vector<Formula> sentence_corpus(const Signature& sig, std::size_t depth,
                                     std::size_t corpus_bound) {
    CorpusBuilder builder{sig, corpus_bound};
    std::vector<Formula> out;
    for (std::size_t d = 0; d <= depth; ++d)
        for (auto& f : builder.exact(d, {})) out.push_back(std::move(f));
    return out;
}

std::optional<Formula> separating_sentence(const Signature& sig, const FiniteStructure& M,
                                           const FiniteStructure& N, std::size_t depth,
                                           const StructOptions& opts) {
    CorpusBuilder builder{sig, opts.corpus_bound};
    for (std::size_t d = 0; d <= depth; ++d)
        for (auto& f : builder.exact(d, {}))
            if (satisfies_fo(sig, M, f, opts.eval_budget) !=
                satisfies_fo(sig, N, f, opts.eval_budget))
                return f;
    return std::nullopt;
}

std::vector<Formula> theory_trace(const ModelGroupoid& G, std::size_t depth,
                                  const StructOptions& opts) {
    CorpusBuilder builder{G.theory.signature, opts.corpus_bound};
    std::vector<Formula> out;
    for (std::size_t d = 0; d <= depth; ++d)
        for (auto& f : builder.exact(d, {})) {
            bool everywhere = true;
            for (const auto& M : G.objects)
                if (!satisfies_fo(G.theory.signature, M, f, opts.eval_budget)) {
                    everywhere = false;
                    break;
                }
            if (everywhere) out.push_back(std::move(f));
        }
    return out;
}

} // namespace catlog
