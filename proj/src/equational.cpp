#include "catlog/equational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_map>

#include "catlog/errors.hpp"

namespace catlog {

AlgebraicTheory AlgebraicTheory::from_theory(const Theory& t) {
    if (t.fragment != Fragment::EQUATIONAL)
        throw FragmentViolation("theory '" + t.name + "' is not equational");
    if (t.signature.sorts.size() != 1)
        throw FragmentViolation("algebraic theories are single-sorted; '" + t.name + "' has " +
                                std::to_string(t.signature.sorts.size()) + " sorts");
    AlgebraicTheory a;
    a.theory = t;
    a.sort = t.signature.sorts[0];
    return a;
}

bool FiniteAlgebra::operator<(const FiniteAlgebra& o) const {
    if (n != o.n) return n < o.n;
    if (arities != o.arities) return arities < o.arities;
    return tables < o.tables;
}

std::size_t FiniteAlgebra::eval(std::size_t fn, const std::vector<std::size_t>& args) const {
    std::size_t idx = 0;
    for (std::size_t a : args) idx = idx * n + a;
    return tables[fn][idx];
}

std::size_t eval_term(const Signature& sig, const FiniteAlgebra& M, const Term& t,
                      const std::vector<Var>& ctx, const std::vector<std::size_t>& env) {
    if (t.is_var()) {
        for (std::size_t i = 0; i < ctx.size(); ++i)
            if (ctx[i].name == t.name) return env[i];
        throw InternalInvariantViolation("variable '" + t.name + "' missing from context");
    }
    std::size_t fn = sig.function_index(t.name);
    std::size_t idx = 0;
    for (const auto& a : t.args) idx = idx * M.n + eval_term(sig, M, a, ctx, env);
    return M.tables[fn][idx];
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t limit,
                          const char* what) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > limit / base)
            throw BoundExceeded(std::string(what) + " exceeds the bound");
        r *= base;
    }
    return r;
}

bool next_tuple(std::vector<std::size_t>& v, std::size_t radix) {
    for (std::size_t i = v.size(); i-- > 0;) {
        if (++v[i] < radix) return true;
        v[i] = 0;
    }
    return false;
}

} // namespace

bool satisfies(const AlgebraicTheory& A, const FiniteAlgebra& M, const Axiom& equation,
               std::uint64_t assignment_bound) {
    if (equation.is_sequent || equation.conclusion.kind != FormulaKind::Equation)
        throw FragmentViolation("axiom is not a bare equation");
    const auto& ctx = equation.context;
    checked_pow(M.n, ctx.size(), assignment_bound, "assignment count");
    std::vector<std::size_t> env(ctx.size(), 0);
    if (M.n == 0) return true;
    do {
        if (eval_term(A.sig(), M, equation.conclusion.terms[0], ctx, env) !=
            eval_term(A.sig(), M, equation.conclusion.terms[1], ctx, env))
            return false;
    } while (next_tuple(env, M.n));
    return true;
}

bool satisfies_all(const AlgebraicTheory& A, const FiniteAlgebra& M,
                   std::uint64_t assignment_bound) {
    for (const auto& ax : A.theory.axioms)
        if (!satisfies(A, M, ax, assignment_bound)) return false;
    return true;
}

// ---- model enumeration ----

namespace {

// Term compiled to variable slots and function indices; nodes stored postfix
// so kids precede parents.
struct CompiledTerm {
    struct Node {
        int fn = -1;  // function index, or -1 for a variable
        int var = -1; // context slot for variables
        std::vector<int> kids;
    };
    std::vector<Node> nodes;
    int root = -1;
};

int compile_into(const Term& t, const std::vector<Var>& ctx, const Signature& sig,
                 CompiledTerm& out) {
    CompiledTerm::Node node;
    if (t.is_var()) {
        for (std::size_t i = 0; i < ctx.size(); ++i)
            if (ctx[i].name == t.name) { node.var = static_cast<int>(i); break; }
        if (node.var < 0)
            throw InternalInvariantViolation("variable missing from context during compile");
    } else {
        node.fn = static_cast<int>(sig.function_index(t.name));
        for (const auto& a : t.args) node.kids.push_back(compile_into(a, ctx, sig, out));
    }
    out.nodes.push_back(std::move(node));
    return static_cast<int>(out.nodes.size() - 1);
}

CompiledTerm compile(const Term& t, const std::vector<Var>& ctx, const Signature& sig) {
    CompiledTerm c;
    c.root = compile_into(t, ctx, sig, c);
    return c;
}

struct CompiledEq {
    CompiledTerm lhs, rhs;
    std::size_t vars = 0;
};

// -1 = unknown (depends on an unassigned cell).
int partial_eval(const CompiledTerm& t, int node, const std::vector<std::vector<int>>& tables,
                 const std::vector<std::size_t>& env, std::size_t n) {
    const auto& nd = t.nodes[node];
    if (nd.fn < 0) return static_cast<int>(env[nd.var]);
    std::size_t idx = 0;
    for (int k : nd.kids) {
        int v = partial_eval(t, k, tables, env, n);
        if (v < 0) return -1;
        idx = idx * n + static_cast<std::size_t>(v);
    }
    return tables[nd.fn][idx];
}

struct Enumerator {
    const AlgebraicTheory& A;
    std::size_t n;
    std::uint64_t budget;
    std::vector<std::size_t> arities;
    std::vector<std::size_t> table_sizes;
    std::vector<std::pair<std::size_t, std::size_t>> order; // (function, cell)
    std::vector<CompiledEq> eqs;
    std::atomic<std::uint64_t> visited{0};

    Enumerator(const AlgebraicTheory& a, std::size_t size, std::uint64_t node_budget)
        : A(a), n(size), budget(node_budget) {
        if (n == 0) throw BoundExceeded("carrier size must be positive");
        const auto& fns = A.sig().functions;
        std::uint64_t total_cells = 0;
        for (const auto& f : fns) {
            arities.push_back(f.arg_sorts.size());
            std::uint64_t sz = checked_pow(n, f.arg_sorts.size(), 10'000'000, "table size");
            table_sizes.push_back(static_cast<std::size_t>(sz));
            total_cells += sz;
            if (total_cells > 10'000'000) throw BoundExceeded("table cell count exceeds the bound");
        }
        // Constants first, then higher arities: constants feed most axiom
        // instances, and wide tables drive the strongest pruning.
        std::vector<std::size_t> fn_order(fns.size());
        for (std::size_t i = 0; i < fns.size(); ++i) fn_order[i] = i;
        std::stable_sort(fn_order.begin(), fn_order.end(), [&](std::size_t a, std::size_t b) {
            bool ca = arities[a] == 0, cb = arities[b] == 0;
            if (ca != cb) return ca;
            return arities[a] > arities[b];
        });
        for (std::size_t f : fn_order)
            for (std::size_t c = 0; c < table_sizes[f]; ++c) order.emplace_back(f, c);
        for (const auto& ax : A.theory.axioms) {
            CompiledEq ce;
            ce.lhs = compile(ax.conclusion.terms[0], ax.context, A.sig());
            ce.rhs = compile(ax.conclusion.terms[1], ax.context, A.sig());
            ce.vars = ax.context.size();
            eqs.push_back(std::move(ce));
        }
    }

    bool consistent(const std::vector<std::vector<int>>& tables) const {
        std::vector<std::size_t> env;
        for (const auto& eq : eqs) {
            env.assign(eq.vars, 0);
            do {
                int l = partial_eval(eq.lhs, eq.lhs.root, tables, env, n);
                if (l < 0) continue;
                int r = partial_eval(eq.rhs, eq.rhs.root, tables, env, n);
                if (r < 0) continue;
                if (l != r) return false;
            } while (next_tuple(env, n));
        }
        return true;
    }

    void charge() {
        if (visited.fetch_add(1, std::memory_order_relaxed) + 1 > budget)
            throw BoundExceeded("model search exceeded the node budget of " +
                                std::to_string(budget));
    }

    FiniteAlgebra snapshot(const std::vector<std::vector<int>>& tables) const {
        FiniteAlgebra m;
        m.n = n;
        m.arities = arities;
        m.tables.resize(tables.size());
        for (std::size_t f = 0; f < tables.size(); ++f)
            m.tables[f].assign(tables[f].begin(), tables[f].end());
        return m;
    }

    void dfs(std::size_t pos, std::vector<std::vector<int>>& tables,
             std::vector<FiniteAlgebra>& out) {
        if (pos == order.size()) {
            out.push_back(snapshot(tables));
            return;
        }
        auto [f, c] = order[pos];
        for (std::size_t v = 0; v < n; ++v) {
            charge();
            tables[f][c] = static_cast<int>(v);
            if (consistent(tables)) dfs(pos + 1, tables, out);
        }
        tables[f][c] = -1;
    }

    // Fixed prefix split: the first K cells in search order, chosen so the
    // prefix count is at least 16 (independent of the worker count, so node
    // accounting and budget behavior cannot vary with it).
    std::size_t prefix_len() const {
        if (n <= 1) return 0;
        std::size_t k = 0;
        std::uint64_t p = 1;
        while (p < 16 && k < order.size()) { p *= n; ++k; }
        return k;
    }

    void run_prefix(const std::vector<std::size_t>& prefix,
                    std::vector<std::vector<int>>& tables, std::vector<FiniteAlgebra>& out) {
        for (auto& t : tables) std::fill(t.begin(), t.end(), -1);
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            charge();
            auto [f, c] = order[i];
            tables[f][c] = static_cast<int>(prefix[i]);
            if (!consistent(tables)) return;
        }
        dfs(prefix.size(), tables, out);
    }
};

} // namespace

std::vector<FiniteAlgebra> enumerate_models(const AlgebraicTheory& A, std::size_t n,
                                            const EnumOptions& opts) {
    Enumerator en(A, n, opts.node_budget);
    std::size_t K = en.prefix_len();
    std::vector<std::vector<std::size_t>> prefixes;
    std::vector<std::size_t> cur(K, 0);
    if (K == 0) {
        prefixes.push_back({});
    } else {
        do prefixes.push_back(cur);
        while (next_tuple(cur, n));
    }

    std::vector<std::vector<FiniteAlgebra>> per_prefix(prefixes.size());
    unsigned workers = std::max(1u, opts.workers);
    std::size_t chunk = (prefixes.size() + workers - 1) / workers;

    auto work = [&](std::size_t lo, std::size_t hi) {
        std::vector<std::vector<int>> tables(en.table_sizes.size());
        for (std::size_t f = 0; f < en.table_sizes.size(); ++f)
            tables[f].assign(en.table_sizes[f], -1);
        for (std::size_t p = lo; p < hi && p < prefixes.size(); ++p)
            en.run_prefix(prefixes[p], tables, per_prefix[p]);
    };

    if (workers == 1) {
        work(0, prefixes.size());
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                try {
                    work(w * chunk, (w + 1) * chunk);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<FiniteAlgebra> out;
    for (auto& chunk_models : per_prefix)
        for (auto& m : chunk_models) out.push_back(std::move(m));
    std::sort(out.begin(), out.end());
    return out;
}

bool is_homomorphism(const FiniteAlgebra& M, const FiniteAlgebra& N,
                     const std::vector<std::size_t>& map) {
    if (map.size() != M.n) return false;
    for (std::size_t v : map)
        if (v >= N.n) return false;
    for (std::size_t f = 0; f < M.tables.size(); ++f) {
        std::size_t k = M.arities[f];
        std::vector<std::size_t> args(k, 0);
        std::vector<std::size_t> mapped(k, 0);
        if (M.n == 0) continue;
        do {
            for (std::size_t i = 0; i < k; ++i) mapped[i] = map[args[i]];
            if (map[M.eval(f, args)] != N.eval(f, mapped)) return false;
        } while (next_tuple(args, M.n));
    }
    return true;
}

std::vector<Homomorphism> homomorphisms(const FiniteAlgebra& M, const FiniteAlgebra& N,
                                        std::uint64_t bound) {
    if (M.arities != N.arities)
        throw SignatureMismatch("algebras have different operation shapes");
    checked_pow(N.n, M.n, bound, "carrier map count");
    std::vector<Homomorphism> out;
    std::vector<std::size_t> map(M.n, 0);
    do {
        if (is_homomorphism(M, N, map)) out.push_back({map});
    } while (next_tuple(map, N.n));
    return out;
}

FiniteAlgebra relabel(const FiniteAlgebra& M, const std::vector<std::size_t>& perm) {
    FiniteAlgebra out;
    out.n = M.n;
    out.arities = M.arities;
    out.tables.resize(M.tables.size());
    for (std::size_t f = 0; f < M.tables.size(); ++f) {
        std::size_t k = M.arities[f];
        out.tables[f].assign(M.tables[f].size(), 0);
        std::vector<std::size_t> args(k, 0);
        do {
            std::size_t src = 0, dst = 0;
            for (std::size_t i = 0; i < k; ++i) {
                src = src * M.n + args[i];
                dst = dst * M.n + perm[args[i]];
            }
            out.tables[f][dst] = perm[M.tables[f][src]];
        } while (next_tuple(args, M.n));
    }
    return out;
}

std::vector<IsoClass> enumerate_up_to_iso(const AlgebraicTheory& A, std::size_t n,
                                          const EnumOptions& opts) {
    std::vector<FiniteAlgebra> labeled = enumerate_models(A, n, opts);
    std::vector<bool> claimed(labeled.size(), false);
    std::vector<IsoClass> out;
    std::vector<std::size_t> idperm(n);
    for (std::size_t i = 0; i < n; ++i) idperm[i] = i;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (claimed[i]) continue;
        std::set<FiniteAlgebra> orbit;
        std::vector<std::size_t> perm = idperm;
        do orbit.insert(relabel(labeled[i], perm));
        while (std::next_permutation(perm.begin(), perm.end()));
        for (const auto& member : orbit) {
            auto it = std::lower_bound(labeled.begin(), labeled.end(), member);
            if (it == labeled.end() || !(*it == member))
                throw InternalInvariantViolation(
                    "isomorphic image of an enumerated model is missing from the enumeration");
            claimed[static_cast<std::size_t>(it - labeled.begin())] = true;
        }
        out.push_back({labeled[i], orbit.size()});
    }
    return out;
}

// ---- Syn(A) ----

std::string to_string(SynBackend b) {
    return b == SynBackend::REWRITE ? "rewrite" : "modeleval";
}

std::string print_syn(const SynMorphism& m) {
    if (m.dst_arity == 1) return print_term(m.terms[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < m.terms.size(); ++i) {
        if (i) s += ",";
        s += print_term(m.terms[i]);
    }
    return s + ")";
}

bool term_less(const Signature& sig, const Term& a, const Term& b) {
    std::size_t na = a.node_count(), nb = b.node_count();
    if (na != nb) return na < nb;
    if (a.is_var() != b.is_var()) return a.is_var();
    if (a.is_var()) {
        if (a.name.size() != b.name.size()) return a.name.size() < b.name.size();
        return a.name < b.name;
    }
    std::size_t fa = sig.function_index(a.name), fb = sig.function_index(b.name);
    if (fa != fb) return fa < fb;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (term_less(sig, a.args[i], b.args[i])) return true;
        if (term_less(sig, b.args[i], a.args[i])) return false;
    }
    return false;
}

std::vector<RewriteRule> rules_of(const AlgebraicTheory& A) {
    std::vector<RewriteRule> rules;
    for (const auto& ax : A.theory.axioms) {
        const Term& l = ax.conclusion.terms[0];
        const Term& r = ax.conclusion.terms[1];
        std::vector<Var> lv, rv;
        free_vars_term(l, lv);
        free_vars_term(r, rv);
        for (const auto& v : rv) {
            bool found = false;
            for (const auto& u : lv)
                if (u.name == v.name) { found = true; break; }
            if (!found)
                throw BackendUnavailable("axiom '" + print_axiom(ax) +
                                         "' is not orientable left-to-right: right side "
                                         "introduces variable '" + v.name + "'");
        }
        rules.push_back({l, r});
    }
    return rules;
}

namespace {

bool match_term(const Term& pattern, const Term& subject, std::map<std::string, Term>& binding) {
    if (pattern.is_var()) {
        auto it = binding.find(pattern.name);
        if (it == binding.end()) {
            binding.emplace(pattern.name, subject);
            return true;
        }
        return it->second == subject;
    }
    if (subject.is_var() || subject.name != pattern.name) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!match_term(pattern.args[i], subject.args[i], binding)) return false;
    return true;
}

Term normalize(const Term& t, const std::vector<RewriteRule>& rules, std::size_t& steps,
               std::size_t budget) {
    Term cur = t;
    if (!cur.is_var())
        for (auto& a : cur.args) a = normalize(a, rules, steps, budget);
    for (;;) {
        bool reduced = false;
        for (const auto& r : rules) {
            std::map<std::string, Term> binding;
            if (match_term(r.lhs, cur, binding)) {
                if (++steps > budget)
                    throw BackendUnavailable("rewriting exceeded the step budget of " +
                                             std::to_string(budget));
                cur = substitute(r.rhs, binding);
                if (!cur.is_var())
                    for (auto& a : cur.args) a = normalize(a, rules, steps, budget);
                reduced = true;
                break;
            }
        }
        if (!reduced) return cur;
    }
}

} // namespace

Term normal_form(const Term& t, const std::vector<RewriteRule>& rules, std::size_t step_budget) {
    std::size_t steps = 0;
    return normalize(t, rules, steps, step_budget);
}

SynCalculus::SynCalculus(AlgebraicTheory A, SynBackend backend, SynOptions opts)
    : theory_(std::move(A)), backend_(backend), opts_(opts) {
    if (backend_ == SynBackend::REWRITE) {
        rules_ = rules_of(theory_);
    } else {
        if (opts_.modeleval_size > 9)
            throw BoundExceeded("model-eval fingerprints support carriers up to size 9");
        for (std::size_t s = 1; s <= opts_.modeleval_size; ++s) {
            EnumOptions eo;
            eo.node_budget = opts_.node_budget;
            for (auto& m : enumerate_models(theory_, s, eo)) eval_models_.push_back(std::move(m));
        }
    }
}

std::string SynCalculus::key_of(const Term& t, std::size_t arity) const {
    if (backend_ == SynBackend::REWRITE)
        return print_term(normal_form(t, rules_, opts_.rewrite_budget));
    std::vector<Var> ctx;
    for (std::size_t i = 1; i <= arity; ++i)
        ctx.push_back({"x" + std::to_string(i), theory_.sort});
    std::string key;
    for (const auto& M : eval_models_) {
        std::vector<std::size_t> env(arity, 0);
        do {
            key += static_cast<char>('0' + eval_term(theory_.sig(), M, t, ctx, env));
        } while (next_tuple(env, M.n));
        key += '|';
    }
    return key;
}

const std::vector<std::vector<Term>>& SynCalculus::term_classes(std::size_t arity,
                                                                std::size_t depth) const {
    auto cache_key = std::make_pair(arity, depth);
    auto it = cache_.find(cache_key);
    if (it != cache_.end()) return it->second;

    std::vector<Term> all;
    std::vector<std::size_t> depths;
    for (std::size_t i = 1; i <= arity; ++i) {
        all.push_back(Term::var("x" + std::to_string(i), theory_.sort));
        depths.push_back(0);
    }
    for (std::size_t level = 1; level <= depth; ++level) {
        std::size_t prev = all.size();
        for (std::size_t f = 0; f < theory_.sig().functions.size(); ++f) {
            const auto& fn = theory_.sig().functions[f];
            std::size_t k = fn.arg_sorts.size();
            if (k == 0) {
                if (level == 1) {
                    Term t;
                    t.kind = Term::Kind::App;
                    t.name = fn.name;
                    t.sort = fn.result_sort;
                    all.push_back(std::move(t));
                    depths.push_back(1);
                }
                continue;
            }
            if (prev == 0) continue; // no candidate arguments yet
            std::vector<std::size_t> pick(k, 0);
            do {
                std::size_t maxd = 0;
                for (std::size_t i = 0; i < k; ++i) maxd = std::max(maxd, depths[pick[i]]);
                if (maxd != level - 1) continue; // built at an earlier level already
                Term t;
                t.kind = Term::Kind::App;
                t.name = fn.name;
                t.sort = fn.result_sort;
                for (std::size_t i = 0; i < k; ++i) t.args.push_back(all[pick[i]]);
                all.push_back(std::move(t));
                depths.push_back(level);
                if (all.size() > opts_.term_bound)
                    throw BoundExceeded("term enumeration exceeded the bound of " +
                                        std::to_string(opts_.term_bound));
            } while (next_tuple(pick, prev));
        }
    }

    std::unordered_map<std::string, std::vector<Term>> groups;
    std::vector<std::string> group_order;
    for (const auto& t : all) {
        std::string k = key_of(t, arity);
        auto [git, fresh] = groups.try_emplace(k);
        if (fresh) group_order.push_back(k);
        git->second.push_back(t);
    }
    std::vector<std::vector<Term>> classes;
    for (const auto& k : group_order) {
        auto& g = groups[k];
        std::sort(g.begin(), g.end(),
                  [&](const Term& a, const Term& b) { return term_less(theory_.sig(), a, b); });
        classes.push_back(std::move(g));
    }
    std::sort(classes.begin(), classes.end(), [&](const auto& a, const auto& b) {
        return term_less(theory_.sig(), a.front(), b.front());
    });
    return cache_.emplace(cache_key, std::move(classes)).first->second;
}

std::vector<SynMorphism> SynCalculus::syn_morphisms(std::size_t n, std::size_t m,
                                                    std::size_t depth) const {
    const auto& classes = term_classes(n, depth);
    checked_pow(classes.size(), m, 1'000'000, "morphism count");
    std::vector<SynMorphism> out;
    if (m == 0) {
        SynMorphism id0;
        id0.src_arity = n;
        id0.dst_arity = 0;
        id0.backend = backend_;
        out.push_back(std::move(id0));
        return out;
    }
    if (classes.empty()) return out;
    std::vector<std::size_t> pick(m, 0);
    do {
        SynMorphism mo;
        mo.src_arity = n;
        mo.dst_arity = m;
        mo.backend = backend_;
        for (std::size_t i = 0; i < m; ++i) mo.terms.push_back(classes[pick[i]].front());
        out.push_back(std::move(mo));
    } while (next_tuple(pick, classes.size()));
    return out;
}

SynMorphism SynCalculus::identity(std::size_t n, std::size_t depth) const {
    SynMorphism id;
    id.src_arity = id.dst_arity = n;
    id.backend = backend_;
    for (std::size_t i = 1; i <= n; ++i)
        id.terms.push_back(
            canonical(Term::var("x" + std::to_string(i), theory_.sort), n, depth));
    return id;
}

SynMorphism SynCalculus::compose(const SynMorphism& g, const SynMorphism& f,
                                 std::size_t depth) const {
    if (f.dst_arity != g.src_arity)
        throw ArityMismatch("morphisms not composable: " + std::to_string(f.dst_arity) +
                            " vs " + std::to_string(g.src_arity));
    std::map<std::string, Term> binding;
    for (std::size_t j = 0; j < f.dst_arity; ++j)
        binding.emplace("x" + std::to_string(j + 1), f.terms[j]);
    SynMorphism out;
    out.src_arity = f.src_arity;
    out.dst_arity = g.dst_arity;
    out.backend = backend_;
    for (const auto& t : g.terms)
        out.terms.push_back(canonical(substitute(t, binding), f.src_arity, depth));
    return out;
}

bool SynCalculus::equal_terms(const Term& a, const Term& b, std::size_t arity) const {
    return key_of(a, arity) == key_of(b, arity);
}

Term SynCalculus::canonical(const Term& t, std::size_t arity, std::size_t depth) const {
    std::string k = key_of(t, arity);
    for (const auto& cls : term_classes(arity, depth))
        if (key_of(cls.front(), arity) == k) return cls.front();
    return backend_ == SynBackend::REWRITE ? normal_form(t, rules_, opts_.rewrite_budget) : t;
}

// ---- models as functors ----

namespace {

std::vector<std::size_t> decode_tuple(std::size_t index, std::size_t arity, std::size_t n) {
    std::vector<std::size_t> v(arity, 0);
    for (std::size_t i = arity; i-- > 0;) {
        v[i] = index % n;
        index /= n;
    }
    return v;
}

std::size_t encode_tuple(const std::vector<std::size_t>& v, std::size_t n) {
    std::size_t idx = 0;
    for (std::size_t x : v) idx = idx * n + x;
    return idx;
}

std::vector<std::size_t> eval_morphism(const Signature& sig, const FiniteAlgebra& M,
                                       const SynMorphism& t, const std::vector<Var>& ctx,
                                       const std::vector<std::size_t>& env) {
    std::vector<std::size_t> out;
    out.reserve(t.terms.size());
    for (const auto& term : t.terms) out.push_back(eval_term(sig, M, term, ctx, env));
    return out;
}

std::vector<Var> arity_context(std::size_t arity, const std::string& sort) {
    std::vector<Var> ctx;
    for (std::size_t i = 1; i <= arity; ++i) ctx.push_back({"x" + std::to_string(i), sort});
    return ctx;
}

} // namespace

FunctorTable model_as_functor(const SynCalculus& calc, const FiniteAlgebra& M,
                              std::size_t max_arity, std::size_t depth, std::uint64_t bound) {
    const Signature& sig = calc.theory().sig();
    FunctorTable ft;
    ft.model_size = M.n;
    ft.max_arity = max_arity;
    ft.depth = depth;
    ft.hom_sets.assign(max_arity + 1, {});
    ft.maps.assign(max_arity + 1, {});

    std::uint64_t work = 0;
    for (std::size_t n = 0; n <= max_arity; ++n) {
        ft.hom_sets[n].assign(max_arity + 1, {});
        ft.maps[n].assign(max_arity + 1, {});
        std::uint64_t dom = checked_pow(M.n, n, bound, "tuple space");
        std::vector<Var> ctx = arity_context(n, calc.theory().sort);
        for (std::size_t m = 0; m <= max_arity; ++m) {
            ft.hom_sets[n][m] = calc.syn_morphisms(n, m, depth);
            work += ft.hom_sets[n][m].size() * dom;
            if (work > bound) throw BoundExceeded("functor tabulation exceeds the bound");
            for (const auto& mo : ft.hom_sets[n][m]) {
                std::vector<std::size_t> table(dom, 0);
                for (std::size_t u = 0; u < dom; ++u) {
                    auto env = decode_tuple(u, n, M.n);
                    table[u] = encode_tuple(eval_morphism(sig, M, mo, ctx, env), M.n);
                }
                ft.maps[n][m].push_back(std::move(table));
            }
        }
    }

    auto find_morphism = [&](std::size_t n, std::size_t m, const SynMorphism& t) -> int {
        const auto& hs = ft.hom_sets[n][m];
        for (std::size_t i = 0; i < hs.size(); ++i)
            if (hs[i] == t) return static_cast<int>(i);
        return -1;
    };

    ft.functor_laws_ok = true;
    for (std::size_t n = 0; n <= max_arity; ++n) {
        int idn = find_morphism(n, n, calc.identity(n, depth));
        if (idn < 0) { ft.functor_laws_ok = false; continue; }
        const auto& table = ft.maps[n][n][static_cast<std::size_t>(idn)];
        for (std::size_t u = 0; u < table.size(); ++u)
            if (table[u] != u) ft.functor_laws_ok = false;
    }
    for (std::size_t n = 0; n <= max_arity && ft.functor_laws_ok; ++n)
        for (std::size_t m = 0; m <= max_arity; ++m)
            for (std::size_t k = 0; k <= max_arity; ++k) {
                for (std::size_t fi = 0; fi < ft.hom_sets[n][m].size(); ++fi)
                    for (std::size_t gi = 0; gi < ft.hom_sets[m][k].size(); ++gi) {
                        SynMorphism gf =
                            calc.compose(ft.hom_sets[m][k][gi], ft.hom_sets[n][m][fi], depth);
                        int gfi = find_morphism(n, k, gf);
                        if (gfi < 0) continue; // composite leaves the enumerated bounds
                        const auto& tf = ft.maps[n][m][fi];
                        const auto& tg = ft.maps[m][k][gi];
                        const auto& tgf = ft.maps[n][k][static_cast<std::size_t>(gfi)];
                        for (std::size_t u = 0; u < tf.size(); ++u)
                            if (tgf[u] != tg[tf[u]]) ft.functor_laws_ok = false;
                    }
            }

    ft.products_ok = true;
    for (std::size_t n = 0; n <= max_arity; ++n)
        for (std::size_t m = 0; n + m <= max_arity; ++m) {
            std::uint64_t dn = checked_pow(M.n, n, bound, "tuple space");
            std::uint64_t dm = checked_pow(M.n, m, bound, "tuple space");
            std::uint64_t dnm = checked_pow(M.n, n + m, bound, "tuple space");
            if (dn * dm != dnm) { ft.products_ok = false; continue; }
            SynMorphism p1, p2;
            p1.src_arity = p2.src_arity = n + m;
            p1.dst_arity = n;
            p2.dst_arity = m;
            p1.backend = p2.backend = calc.backend();
            for (std::size_t i = 1; i <= n; ++i)
                p1.terms.push_back(
                    calc.canonical(Term::var("x" + std::to_string(i), calc.theory().sort),
                                   n + m, depth));
            for (std::size_t i = n + 1; i <= n + m; ++i)
                p2.terms.push_back(
                    calc.canonical(Term::var("x" + std::to_string(i), calc.theory().sort),
                                   n + m, depth));
            int i1 = find_morphism(n + m, n, p1);
            int i2 = find_morphism(n + m, m, p2);
            if (i1 < 0 || i2 < 0) { ft.products_ok = false; continue; }
            const auto& t1 = ft.maps[n + m][n][static_cast<std::size_t>(i1)];
            const auto& t2 = ft.maps[n + m][m][static_cast<std::size_t>(i2)];
            for (std::size_t u = 0; u < dnm; ++u) {
                // Row-major pairing: u = a * M.n^m + b.
                std::size_t a = u / (dm == 0 ? 1 : dm);
                std::size_t b = u % (dm == 0 ? 1 : dm);
                if (t1[u] != a || t2[u] != b) ft.products_ok = false;
            }
        }
    return ft;
}

bool naturality_check(const SynCalculus& calc, const FiniteAlgebra& M, const FiniteAlgebra& N,
                      const std::vector<std::size_t>& carrier_map, std::size_t max_arity,
                      std::size_t depth) {
    if (carrier_map.size() != M.n)
        throw ValidationError("carrier map size does not match the source model");
    for (std::size_t v : carrier_map)
        if (v >= N.n) throw ValidationError("carrier map value outside the target model");
    const Signature& sig = calc.theory().sig();
    for (std::size_t n = 0; n <= max_arity; ++n) {
        std::vector<Var> ctx = arity_context(n, calc.theory().sort);
        std::uint64_t dom = checked_pow(M.n, n, 100'000'000, "tuple space");
        for (std::size_t m = 0; m <= max_arity; ++m) {
            for (const auto& mo : calc.syn_morphisms(n, m, depth)) {
                for (std::size_t u = 0; u < dom; ++u) {
                    auto env = decode_tuple(u, n, M.n);
                    auto via_m = eval_morphism(sig, M, mo, ctx, env);
                    for (auto& x : via_m) x = carrier_map[x];
                    std::vector<std::size_t> henv(env.size());
                    for (std::size_t i = 0; i < env.size(); ++i) henv[i] = carrier_map[env[i]];
                    auto via_n = eval_morphism(sig, N, mo, ctx, henv);
                    if (via_m != via_n) return false;
                }
            }
        }
    }
    return true;
}

} // namespace catlog
