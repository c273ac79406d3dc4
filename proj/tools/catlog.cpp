#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "catlog/boolean.hpp"
#include "catlog/coherent.hpp"
#include "catlog/equational.hpp"
#include "catlog/errors.hpp"
#include "catlog/exports.hpp"
#include "catlog/parser.hpp"
#include "catlog/prop.hpp"

namespace {

using namespace catlog;

struct RunConfig {
    std::string input;
    std::string format = "text";
    std::string output;
    unsigned workers = 1;
    std::uint64_t budget = 0; // 0 = module default

    // per-subcommand knobs
    std::size_t size = 2;
    bool upto_iso = false;
    std::size_t max = 3;
    std::string dot_path;
    std::size_t basis_depth = 1;
    std::size_t syn_depth = 3;
    std::vector<std::size_t> arity{1, 1};
    std::string backend = "rewrite";
    bool roundtrip = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const RunConfig& cfg, const std::string& report) {
    if (cfg.output.empty()) {
        std::cout << report;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file: " + cfg.output);
    out << report;
}

std::string plural(std::size_t n, const std::string& noun) {
    return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

void require_format(const RunConfig& cfg, const std::vector<std::string>& allowed) {
    for (const auto& f : allowed)
        if (cfg.format == f) return;
    throw ValidationError("format '" + cfg.format + "' is not supported by this command");
}

std::string point_set(const StoneSpace& S, const Bitset& points) {
    std::string out = "{";
    bool first = true;
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (!points.test(p)) continue;
        if (!first) out += ", ";
        out += S.point_names[p];
        first = false;
    }
    return out + "}";
}

int cmd_check(const RunConfig& cfg) {
    Theory t = parse_theory(read_file(cfg.input));
    Fragment frag = least_fragment(t.signature, t.axioms);
    if (cfg.format == "json") {
        nlohmann::json j{{"theory", t.name},
                         {"sorts", t.signature.sorts.size()},
                         {"ops", t.signature.functions.size()},
                         {"preds", t.signature.predicates.size()},
                         {"props", t.signature.propositions.size()},
                         {"axioms", t.axioms.size()},
                         {"fragment", to_string(frag)}};
        emit(cfg, j.dump(2) + "\n");
        return 0;
    }
    require_format(cfg, {"text"});
    std::ostringstream out;
    if (t.signature.sorts.size()) out << plural(t.signature.sorts.size(), "sort") << ", ";
    if (t.signature.functions.size()) out << plural(t.signature.functions.size(), "op") << ", ";
    if (t.signature.predicates.size())
        out << plural(t.signature.predicates.size(), "pred") << ", ";
    if (t.signature.propositions.size())
        out << plural(t.signature.propositions.size(), "prop") << ", ";
    out << plural(t.axioms.size(), "axiom") << ", fragment " << to_string(frag) << "\n";
    emit(cfg, out.str());
    return 0;
}

int cmd_lt(const RunConfig& cfg) {
    Theory t = parse_theory(read_file(cfg.input));
    FiniteBooleanAlgebra lt = lindenbaum_tarski(t);
    if (cfg.format == "json") {
        emit(cfg, algebra_json(lt).dump(2) + "\n");
        return 0;
    }
    if (cfg.format == "dot") {
        emit(cfg, algebra_dot(lt));
        return 0;
    }
    require_format(cfg, {"text"});
    std::ostringstream out;
    if (lt.is_degenerate()) {
        out << "degenerate (1 element)\n";
    } else {
        out << lt.element_count() << " elements, " << plural(lt.atom_count(), "atom") << "\n";
        for (const auto& [name, elem] : lt.generators)
            out << "[" << name << "] = " << lt.element_name(elem) << "\n";
    }
    emit(cfg, out.str());
    return 0;
}

int cmd_stone(const RunConfig& cfg) {
    Theory t = parse_theory(read_file(cfg.input));
    FiniteBooleanAlgebra lt = lindenbaum_tarski(t);
    StoneSpace S = stone_space(lt);
    if (cfg.format == "json") {
        emit(cfg, stone_space_json(S).dump(2) + "\n");
        return 0;
    }
    if (cfg.format == "dot") {
        emit(cfg, stone_space_dot(S));
        return 0;
    }
    require_format(cfg, {"text"});
    std::ostringstream out;
    out << plural(S.points, "point") << "\n";
    for (const auto& [name, points] : S.basis)
        out << "D(" << name << ") = " << point_set(S, points) << "\n";
    if (cfg.roundtrip) {
        BooleanIso iso = stone_round_trip(lt);
        out << "roundtrip OK (" << iso.mapping.size() << " elements)\n";
    }
    emit(cfg, out.str());
    return 0;
}

int cmd_models(const RunConfig& cfg) {
    Theory t = parse_theory(read_file(cfg.input));
    if (least_fragment(t.signature, t.axioms) == Fragment::EQUATIONAL) {
        AlgebraicTheory alg = AlgebraicTheory::from_theory(t);
        EnumOptions opts;
        opts.workers = cfg.workers;
        if (cfg.budget) opts.node_budget = cfg.budget;
        auto models = enumerate_models(alg, cfg.size, opts);
        std::vector<IsoClass> classes;
        if (cfg.upto_iso || cfg.format == "dot") classes = enumerate_up_to_iso(alg, cfg.size, opts);

        if (cfg.format == "json") {
            nlohmann::json j = cfg.upto_iso ? iso_classes_json(cfg.size, models, classes)
                                            : models_json(cfg.size, models);
            emit(cfg, j.dump(2) + "\n");
            return 0;
        }
        if (cfg.format == "dot") {
            emit(cfg, models_category_dot(classes));
            return 0;
        }
        require_format(cfg, {"text"});
        std::string text = std::to_string(models.size()) + " labeled\n";
        if (cfg.upto_iso) {
            text += std::to_string(classes.size()) +
                    (classes.size() == 1 ? " class\n" : " classes\n");
            for (std::size_t i = 0; i < classes.size(); ++i)
                text += "class " + std::to_string(i) + ": orbit " +
                        std::to_string(classes[i].orbit_size) + "\n";
        }
        emit(cfg, text);
        return 0;
    }

    // Coherent fallback: labeled structures at the uniform per-sort size.
    if (!fits_coherent(t))
        throw FragmentViolation("theory '" + t.name + "' fits no model-enumeration fragment");
    StructOptions opts;
    opts.workers = cfg.workers;
    if (cfg.budget) opts.candidate_budget = cfg.budget;
    std::vector<SizeRange> bounds(t.signature.sorts.size(), SizeRange{cfg.size, cfg.size});
    auto structures = enumerate_structures(t, bounds, opts);

    std::size_t class_count = 0;
    std::vector<bool> claimed(structures.size(), false);
    if (cfg.upto_iso) {
        for (std::size_t i = 0; i < structures.size(); ++i) {
            if (claimed[i]) continue;
            ++class_count;
            for (std::size_t j = i + 1; j < structures.size(); ++j)
                if (!claimed[j] &&
                    !isomorphisms(t.signature, structures[i], structures[j], opts.iso_budget)
                         .empty())
                    claimed[j] = true;
        }
    }

    if (cfg.format == "json") {
        nlohmann::json j{{"size", cfg.size}, {"labeled", structures.size()}};
        if (cfg.upto_iso) j["classes"] = class_count;
        emit(cfg, j.dump(2) + "\n");
        return 0;
    }
    require_format(cfg, {"text"});
    std::string text = std::to_string(structures.size()) + " labeled\n";
    if (cfg.upto_iso)
        text += std::to_string(class_count) + (class_count == 1 ? " class\n" : " classes\n");
    emit(cfg, text);
    return 0;
}

int cmd_groupoid(const RunConfig& cfg) {
    Theory t = parse_theory(read_file(cfg.input));
    StructOptions opts;
    opts.workers = cfg.workers;
    if (cfg.budget) opts.candidate_budget = cfg.budget;
    std::vector<SizeRange> bounds(t.signature.sorts.size(), SizeRange{1, cfg.max});
    ModelGroupoid G = groupoid(t, bounds, opts);

    if (!cfg.dot_path.empty()) {
        std::ofstream dot(cfg.dot_path, std::ios::binary);
        if (!dot) throw ValidationError("cannot write output file: " + cfg.dot_path);
        dot << groupoid_dot(G);
    }

    if (cfg.format == "json") {
        emit(cfg, groupoid_json(G, cfg.basis_depth, opts).dump(2) + "\n");
        return 0;
    }
    if (cfg.format == "dot") {
        emit(cfg, groupoid_dot(G));
        return 0;
    }
    require_format(cfg, {"text"});
    std::ostringstream out;
    if (G.objects.empty()) {
        out << "empty groupoid\n";
    } else {
        out << G.objects.size() << " objects; |Aut| = ";
        for (std::size_t i = 0; i < G.objects.size(); ++i) {
            if (i) out << ",";
            out << G.automorphism_count(i);
        }
        out << "\n";
        std::size_t classes = 0;
        std::vector<bool> claimed(G.objects.size(), false);
        for (std::size_t i = 0; i < G.objects.size(); ++i) {
            if (claimed[i]) continue;
            ++classes;
            for (std::size_t j = i + 1; j < G.objects.size(); ++j)
                if (!G.homs[i][j].empty()) claimed[j] = true;
        }
        out << classes << (classes == 1 ? " iso class\n" : " iso classes\n");
    }
    emit(cfg, out.str());
    return 0;
}

int cmd_syn(const RunConfig& cfg) {
    Theory t = parse_theory(read_file(cfg.input));
    AlgebraicTheory alg = AlgebraicTheory::from_theory(t);
    SynOptions opts;
    if (cfg.budget) opts.node_budget = cfg.budget;
    SynBackend backend =
        cfg.backend == "modeleval" ? SynBackend::MODELEVAL : SynBackend::REWRITE;
    if (cfg.backend != "rewrite" && cfg.backend != "modeleval")
        throw ValidationError("backend must be rewrite or modeleval");
    SynCalculus calc(alg, backend, opts);
    std::size_t n = cfg.arity.at(0), m = cfg.arity.at(1);
    std::size_t depth = cfg.syn_depth;

    if (cfg.format == "json") {
        emit(cfg, syn_json(calc, n, m, depth).dump(2) + "\n");
        return 0;
    }
    require_format(cfg, {"text"});
    std::ostringstream out;
    if (m == 1) {
        const auto& classes = calc.term_classes(n, depth);
        out << classes.size() << (classes.size() == 1 ? " class: " : " classes: ");
        for (std::size_t i = 0; i < classes.size(); ++i) {
            if (i) out << ", ";
            out << print_term(classes[i].front());
        }
        out << "\n";
    } else {
        auto morphisms = calc.syn_morphisms(n, m, depth);
        out << morphisms.size() << (morphisms.size() == 1 ? " morphism: " : " morphisms: ");
        for (std::size_t i = 0; i < morphisms.size(); ++i) {
            if (i) out << ", ";
            out << print_syn(morphisms[i]);
        }
        out << "\n";
    }
    emit(cfg, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"categorical-logic workbench: theories, algebras, Stone spaces, "
                 "model groupoids"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", cfg.input, "theory file")->required();
        sub->add_option("--format", cfg.format, "output format: text, json, or dot")
            ->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--output", cfg.output, "write the report to this path");
        sub->add_option("--workers", cfg.workers, "parallel workers for enumeration")
            ->check(CLI::PositiveNumber);
        sub->add_option("--budget", cfg.budget, "enumeration budget override")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* check = app.add_subcommand("check", "parse and validate a theory");
    add_common(check);

    CLI::App* lt = app.add_subcommand("lt", "Lindenbaum-Tarski algebra of a propositional theory");
    add_common(lt);

    CLI::App* stone = app.add_subcommand("stone", "Stone space of the Lindenbaum-Tarski algebra");
    add_common(stone);
    stone->add_flag("--roundtrip", cfg.roundtrip, "verify the b -> D(b) isomorphism");

    CLI::App* models = app.add_subcommand("models", "enumerate finite models");
    add_common(models);
    models->add_option("--size", cfg.size, "carrier size")->check(CLI::PositiveNumber);
    models->add_flag("--upto-iso", cfg.upto_iso, "group models into isomorphism classes");

    CLI::App* grp = app.add_subcommand("groupoid", "model groupoid of a coherent theory");
    add_common(grp);
    grp->add_option("--max", cfg.max, "maximum carrier size per sort (sizes run 1..max)")
        ->check(CLI::NonNegativeNumber);
    grp->add_option("--dot", cfg.dot_path, "also write a DOT export to this path");
    grp->add_option("--depth", cfg.basis_depth, "sentence depth for the json basis (default 1)");

    CLI::App* syn = app.add_subcommand("syn", "syntactic-category hom-sets of an equational theory");
    add_common(syn);
    syn->add_option("--arity", cfg.arity, "source and target arity (two numbers)")
        ->expected(2);
    syn->add_option("--depth", cfg.syn_depth, "term depth bound (default 3)");
    syn->add_option("--backend", cfg.backend, "term-equality backend: rewrite or modeleval")
        ->check(CLI::IsMember({"rewrite", "modeleval"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (check->parsed()) return cmd_check(cfg);
        if (lt->parsed()) return cmd_lt(cfg);
        if (stone->parsed()) return cmd_stone(cfg);
        if (models->parsed()) return cmd_models(cfg);
        if (grp->parsed()) return cmd_groupoid(cfg);
        if (syn->parsed()) return cmd_syn(cfg);
    } catch (const catlog::InternalInvariantViolation& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const catlog::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
