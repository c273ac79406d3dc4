#include "catlog/exports.hpp"

#include <sstream>

namespace catlog {

namespace {

std::vector<std::size_t> bit_indices(const Bitset& b) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b.test(i)) out.push_back(i);
    return out;
}

// DOT string literal: quotes and backslashes escaped.
std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += "\"";
    return out;
}

} // namespace

nlohmann::json stone_space_json(const StoneSpace& S) {
    nlohmann::json basis = nlohmann::json::object();
    for (const auto& [name, points] : S.basis) basis[name] = bit_indices(points);
    return nlohmann::json{{"points", S.point_names}, {"basis", basis}};
}

std::string stone_space_dot(const StoneSpace& S) {
    std::ostringstream out;
    out << "graph stone {\n";
    for (std::size_t p = 0; p < S.points; ++p) {
        std::string label = S.point_names[p] + ":";
        for (const auto& [name, points] : S.basis)
            if (points.test(p)) label += " " + name;
        out << "  p" << p << " [label=" << dot_quote(label) << "];\n";
    }
    out << "}\n";
    return out.str();
}

nlohmann::json algebra_json(const FiniteBooleanAlgebra& B) {
    nlohmann::json generators = nlohmann::json::object();
    for (const auto& [name, elem] : B.generators) generators[name] = B.element_name(elem);
    return nlohmann::json{{"atoms", B.atom_count()},
                          {"atom_names", B.atom_names()},
                          {"elements", B.element_count()},
                          {"generators", generators}};
}

std::string algebra_dot(const FiniteBooleanAlgebra& B, std::size_t atom_bound) {
    auto elems = B.elements(atom_bound);
    std::ostringstream out;
    out << "graph algebra {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < elems.size(); ++i)
        out << "  e" << i << " [label=" << dot_quote(B.element_name(elems[i])) << "];\n";
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j)
            if (elems[i].is_subset_of(elems[j]) &&
                elems[j].count() == elems[i].count() + 1)
                out << "  e" << i << " -- e" << j << ";\n";
    out << "}\n";
    return out.str();
}

nlohmann::json algebra_tables_json(const FiniteAlgebra& M) {
    return nlohmann::json{{"size", M.n}, {"tables", M.tables}};
}

nlohmann::json models_json(std::size_t size, const std::vector<FiniteAlgebra>& models) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& m : models) list.push_back(algebra_tables_json(m));
    return nlohmann::json{{"size", size}, {"labeled", models.size()}, {"models", list}};
}

nlohmann::json iso_classes_json(std::size_t size, const std::vector<FiniteAlgebra>& models,
                                const std::vector<IsoClass>& classes, std::size_t hom_bound) {
    nlohmann::json out = models_json(size, models);
    nlohmann::json class_list = nlohmann::json::array();
    for (const auto& c : classes)
        class_list.push_back(nlohmann::json{{"representative", algebra_tables_json(c.representative)},
                                            {"orbit_size", c.orbit_size}});
    out["classes"] = class_list;

    nlohmann::json hom_list = nlohmann::json::array();
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = 0; j < classes.size(); ++j) {
            auto homs =
                homomorphisms(classes[i].representative, classes[j].representative, hom_bound);
            if (homs.empty()) continue;
            nlohmann::json maps = nlohmann::json::array();
            for (const auto& h : homs) maps.push_back(h.map);
            hom_list.push_back(nlohmann::json{
                {"src", i}, {"dst", j}, {"count", homs.size()}, {"maps", maps}});
        }
    out["homs"] = hom_list;
    return out;
}

std::string models_category_dot(const std::vector<IsoClass>& classes, std::size_t hom_bound) {
    std::ostringstream out;
    out << "digraph models {\n";
    for (std::size_t i = 0; i < classes.size(); ++i)
        out << "  c" << i << " [label=" << dot_quote("#" + std::to_string(i) + " n=" +
                                                     std::to_string(classes[i].representative.n) +
                                                     " orbit=" +
                                                     std::to_string(classes[i].orbit_size))
            << "];\n";
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = 0; j < classes.size(); ++j) {
            std::size_t count =
                homomorphisms(classes[i].representative, classes[j].representative, hom_bound)
                    .size();
            if (count > 0)
                out << "  c" << i << " -> c" << j << " [label=\"" << count << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

nlohmann::json syn_json(const SynCalculus& calc, std::size_t src_arity, std::size_t dst_arity,
                        std::size_t depth) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& cls : calc.term_classes(src_arity, depth))
        classes.push_back(print_term(cls.front()));
    nlohmann::json morphisms = nlohmann::json::array();
    for (const auto& m : calc.syn_morphisms(src_arity, dst_arity, depth)) {
        nlohmann::json tuple = nlohmann::json::array();
        for (const auto& t : m.terms) tuple.push_back(print_term(t));
        morphisms.push_back(tuple);
    }
    return nlohmann::json{{"src_arity", src_arity},
                          {"dst_arity", dst_arity},
                          {"depth", depth},
                          {"backend", to_string(calc.backend())},
                          {"classes", classes},
                          {"morphisms", morphisms}};
}

nlohmann::json groupoid_json(const ModelGroupoid& G, std::size_t basis_depth,
                             const StructOptions& opts) {
    nlohmann::json objects = nlohmann::json::array();
    for (std::size_t i = 0; i < G.objects.size(); ++i)
        objects.push_back(nlohmann::json{{"sizes", G.objects[i].sizes},
                                         {"automorphisms", G.automorphism_count(i)}});
    nlohmann::json isos = nlohmann::json::array();
    for (std::size_t i = 0; i < G.objects.size(); ++i)
        for (std::size_t j = 0; j < G.objects.size(); ++j)
            if (i != j && !G.homs[i][j].empty())
                isos.push_back(
                    nlohmann::json{{"src", i}, {"dst", j}, {"count", G.homs[i][j].size()}});
    nlohmann::json basis = nlohmann::json::object();
    for (const auto& sentence :
         sentence_corpus(G.theory.signature, basis_depth, opts.corpus_bound))
        basis[print_formula(sentence)] = bit_indices(basic_open(G, sentence, opts).members);
    return nlohmann::json{{"objects", objects}, {"isos", isos}, {"basis", basis}};
}

std::string groupoid_dot(const ModelGroupoid& G) {
    std::ostringstream out;
    out << "graph groupoid {\n";
    for (std::size_t i = 0; i < G.objects.size(); ++i) {
        std::string sizes;
        for (std::size_t s = 0; s < G.objects[i].sizes.size(); ++s) {
            if (s) sizes += ",";
            sizes += std::to_string(G.objects[i].sizes[s]);
        }
        out << "  m" << i << " [label="
            << dot_quote("#" + std::to_string(i) + " |" + sizes + "| aut=" +
                         std::to_string(G.automorphism_count(i)))
            << "];\n";
    }
    for (std::size_t i = 0; i < G.objects.size(); ++i)
        for (std::size_t j = i + 1; j < G.objects.size(); ++j)
            if (!G.homs[i][j].empty())
                out << "  m" << i << " -- m" << j << " [label=\"" << G.homs[i][j].size()
                    << "\"];\n";
    out << "}\n";
    return out.str();
}

} // namespace catlog
