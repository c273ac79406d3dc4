#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "catlog/equational.hpp"
#include "catlog/parser.hpp"
#include "doctest.h"

namespace {

struct RunResult {
    std::string out;
    int exit_code = -1;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(CATLOG_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus(const std::string& name) {
    return std::string(CORPUS_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string golden(const std::string& name) {
    return read_file(std::string(GOLDEN_DIR) + "/" + name);
}

void check_golden(const std::string& args, const std::string& golden_name) {
    CAPTURE(args);
    RunResult r = run(args);
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden(golden_name));
}

// Minimal DOT structural validator: a single graph/digraph block whose edges
// reference declared nodes only.
void check_dot(const std::string& text) {
    std::istringstream in(text);
    std::string first;
    in >> first;
    bool directed = first == "digraph";
    REQUIRE((first == "graph" || first == "digraph"));
    std::set<std::string> nodes;
    std::string line;
    std::getline(in, line); // rest of header
    bool closed = false;
    while (std::getline(in, line)) {
        if (line == "}") {
            closed = true;
            continue;
        }
        if (line.empty() || line.find("rankdir") != std::string::npos) continue;
        CHECK_FALSE(closed);
        auto trim_id = [](std::string s) {
            while (!s.empty() && !(std::isalnum(static_cast<unsigned char>(s.back())) ||
                                   s.back() == '_'))
                s.pop_back();
            return s;
        };
        std::istringstream ls(line);
        std::string a;
        ls >> a;
        a = trim_id(a);
        std::string arrow = directed ? "->" : "--";
        auto pos = line.find(arrow);
        if (pos == std::string::npos) {
            nodes.insert(a); // node statement
            CHECK(line.find(';') != std::string::npos);
        } else {
            std::istringstream rest(line.substr(pos + 2));
            std::string b;
            rest >> b;
            b = trim_id(b);
            CHECK(nodes.count(a) == 1);
            CHECK(nodes.count(b) == 1);
        }
    }
    CHECK(closed);
}

} // namespace

TEST_CASE("cli text reports match the golden files") {
    check_golden("check " + corpus("semigroup.thy"), "check_semigroup.txt");
    check_golden("check " + corpus("prop_implication.thy"), "check_prop_implication.txt");
    check_golden("check " + corpus("unary_pred.thy"), "check_unary_pred.txt");
    check_golden("lt " + corpus("prop_implication.thy"), "lt_prop_implication.txt");
    check_golden("lt " + corpus("inconsistent.thy"), "lt_inconsistent.txt");
    check_golden("lt " + corpus("prop_free3.thy"), "lt_prop_free3.txt");
    check_golden("stone " + corpus("prop_free1.thy") + " --roundtrip",
                 "stone_prop_free1_roundtrip.txt");
    check_golden("stone " + corpus("prop_implication.thy") + " --roundtrip",
                 "stone_prop_implication_roundtrip.txt");
    check_golden("models " + corpus("semigroup.thy") + " --size 2", "models_semigroup_2.txt");
    check_golden("models " + corpus("group.thy") + " --size 4 --upto-iso",
                 "models_group_4_iso.txt");
    check_golden("models " + corpus("group.thy") + " --size 1", "models_group_1.txt");
    check_golden("models " + corpus("prop_or.thy") + " --upto-iso", "models_prop_or_iso.txt");
    check_golden("groupoid " + corpus("pure_equality.thy") + " --max 3",
                 "groupoid_pure_equality_3.txt");
    check_golden("groupoid " + corpus("unary_pred.thy") + " --max 2",
                 "groupoid_unary_pred_2.txt");
    check_golden("groupoid " + corpus("pure_equality.thy") + " --max 0", "groupoid_empty.txt");
    check_golden("groupoid " + corpus("at_least_two.thy") + " --max 3",
                 "groupoid_at_least_two_3.txt");
    check_golden("syn " + corpus("involution.thy"), "syn_involution_default.txt");
    check_golden("syn " + corpus("group.thy") + " --arity 2 1 --depth 0",
                 "syn_group_2_1_d0.txt");
    check_golden("syn " + corpus("involution.thy") + " --arity 1 2 --depth 1",
                 "syn_involution_1_2_d1.txt");
}

TEST_CASE("cli exit codes separate user errors from reports") {
    CHECK(run("check " + corpus("bad_arity.thy")).exit_code == 1);
    CHECK(run("check " + corpus("bad_arity.thy")).out.empty()); // diagnostics on stderr
    CHECK(run("check " + corpus("empty.thy")).exit_code == 1);
    CHECK(run("check " + corpus("no_such_file.thy")).exit_code == 1);
    CHECK(run("stone " + corpus("inconsistent.thy")).exit_code == 1);
    CHECK(run("lt " + corpus("group.thy")).exit_code == 1);
    CHECK(run("syn " + corpus("prop_free1.thy")).exit_code == 1);
    CHECK(run("check " + corpus("semigroup.thy") + " --no-such-flag").exit_code == 1);
    CHECK(run("check " + corpus("semigroup.thy") + " --format dot").exit_code == 1);
    CHECK(run("syn " + corpus("involution.thy") + " --backend bogus").exit_code == 1);
    CHECK(run("models " + corpus("semigroup.thy") + " --size 3 --budget 10").exit_code == 1);
    CHECK(run("models " + corpus("prop_implication.thy") + " --size 1").exit_code == 1);
}

TEST_CASE("cli json exports re-parse and validate") {
    using nlohmann::json;

    SUBCASE("check") {
        json j = json::parse(run("check " + corpus("semigroup.thy") + " --format json").out);
        CHECK(j["sorts"] == 1);
        CHECK(j["ops"] == 1);
        CHECK(j["axioms"] == 1);
        CHECK(j["fragment"] == "EQUATIONAL");
    }

    SUBCASE("lt") {
        json j = json::parse(run("lt " + corpus("prop_implication.thy") + " --format json").out);
        CHECK(j["atoms"] == 3);
        CHECK(j["elements"] == 8);
        CHECK(j["atom_names"].size() == 3);
        CHECK(j["generators"]["p"] == "001");
        CHECK(j["generators"]["q"] == "011");
        for (const auto& [name, value] : j["generators"].items())
            CHECK(value.get<std::string>().size() == j["atoms"].get<std::size_t>());
    }

    SUBCASE("stone") {
        json j = json::parse(run("stone " + corpus("prop_free2.thy") + " --format json").out);
        std::size_t points = j["points"].size();
        CHECK(points == 4);
        CHECK(j["basis"].size() == 16);
        // Module validator: D(b) is exactly the set of ultrafilters on atoms
        // below b, i.e. the '1' positions of the element's atom bitstring.
        for (const auto& [name, indices] : j["basis"].items()) {
            std::set<std::size_t> expected;
            for (std::size_t i = 0; i < name.size(); ++i)
                if (name[i] == '1') expected.insert(i);
            std::set<std::size_t> got(indices.begin(), indices.end());
            CHECK(got == expected);
            for (std::size_t p : got) CHECK(p < points);
        }
    }

    SUBCASE("models") {
        json j = json::parse(
            run("models " + corpus("group.thy") + " --size 3 --upto-iso --format json").out);
        catlog::Theory t = catlog::parse_theory(read_file(corpus("group.thy")));
        catlog::AlgebraicTheory alg = catlog::AlgebraicTheory::from_theory(t);
        CHECK(j["labeled"] == 3);
        REQUIRE(j["models"].size() == 3);
        for (const auto& m : j["models"]) {
            catlog::FiniteAlgebra M;
            M.n = m["size"].get<std::size_t>();
            for (const auto& f : alg.sig().functions)
                M.arities.push_back(f.arg_sorts.size());
            M.tables = m["tables"].get<std::vector<std::vector<std::size_t>>>();
            CHECK(satisfies_all(alg, M));
        }
        std::size_t orbit_total = 0;
        for (const auto& c : j["classes"]) orbit_total += c["orbit_size"].get<std::size_t>();
        CHECK(orbit_total == j["labeled"].get<std::size_t>());
        for (const auto& h : j["homs"]) {
            CHECK(h["count"].get<std::size_t>() == h["maps"].size());
            CHECK(h["src"].get<std::size_t>() < j["classes"].size());
            CHECK(h["dst"].get<std::size_t>() < j["classes"].size());
        }
    }

    SUBCASE("groupoid") {
        json j = json::parse(
            run("groupoid " + corpus("unary_pred.thy") + " --max 2 --format json").out);
        std::size_t objects = j["objects"].size();
        CHECK(objects == 6);
        for (const auto& iso : j["isos"]) {
            CHECK(iso["src"].get<std::size_t>() < objects);
            CHECK(iso["dst"].get<std::size_t>() < objects);
            bool mirrored = false;
            for (const auto& other : j["isos"])
                mirrored = mirrored || (other["src"] == iso["dst"] &&
                                        other["dst"] == iso["src"] &&
                                        other["count"] == iso["count"]);
            CHECK(mirrored);
        }
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < objects; ++i) all.push_back(i);
        CHECK(j["basis"]["true"].get<std::vector<std::size_t>>() == all);
        CHECK(j["basis"]["false"].empty());
        CHECK(j["basis"]["exists x1 : S. P(x1)"].get<std::vector<std::size_t>>() ==
              std::vector<std::size_t>{1, 3, 4, 5});
    }

    SUBCASE("syn") {
        json j = json::parse(run("syn " + corpus("involution.thy") + " --format json").out);
        CHECK(j["classes"] == json::array({"x1", "f(x1)"}));
        CHECK(j["morphisms"] == json::array({json::array({"x1"}), json::array({"f(x1)"})}));
        CHECK(j["backend"] == "rewrite");
    }
}

TEST_CASE("cli dot exports are well-formed graphs") {
    check_dot(run("lt " + corpus("prop_free2.thy") + " --format dot").out);
    check_dot(run("stone " + corpus("prop_free2.thy") + " --format dot").out);
    check_dot(run("models " + corpus("group.thy") + " --size 2 --format dot").out);
    check_dot(run("groupoid " + corpus("unary_pred.thy") + " --max 2 --format dot").out);
}

TEST_CASE("cli --output and --dot write files identical to stdout reports") {
    std::string tmp = std::string(CORPUS_DIR) + "/../.tmp_cli_out";
    RunResult direct = run("stone " + corpus("prop_free1.thy"));
    RunResult redirected =
        run("stone " + corpus("prop_free1.thy") + " --output " + tmp);
    CHECK(redirected.exit_code == 0);
    CHECK(redirected.out.empty());
    CHECK(read_file(tmp) == direct.out);

    std::string dot_tmp = tmp + ".dot";
    RunResult with_dot =
        run("groupoid " + corpus("unary_pred.thy") + " --max 2 --dot " + dot_tmp);
    CHECK(with_dot.out == golden("groupoid_unary_pred_2.txt"));
    check_dot(read_file(dot_tmp));
    CHECK(read_file(dot_tmp) ==
          run("groupoid " + corpus("unary_pred.thy") + " --max 2 --format dot").out);
    std::remove(tmp.c_str());
    std::remove(dot_tmp.c_str());
}

TEST_CASE("cli stdout is byte-identical across worker counts") {
    const std::vector<std::string> model_cmds = {
        "models " + corpus("semigroup.thy") + " --size 2 --upto-iso",
        "models " + corpus("group.thy") + " --size 3 --upto-iso",
        "models " + corpus("involution.thy") + " --size 3 --upto-iso",
        "models " + corpus("pure_equality.thy") + " --size 2 --upto-iso",
        "models " + corpus("unary_pred.thy") + " --size 2 --upto-iso",
        "models " + corpus("at_least_two.thy") + " --size 2",
        "models " + corpus("prop_or.thy") + " --upto-iso",
    };
    const std::vector<std::string> groupoid_cmds = {
        "groupoid " + corpus("pure_equality.thy") + " --max 3",
        "groupoid " + corpus("unary_pred.thy") + " --max 2",
        "groupoid " + corpus("at_least_two.thy") + " --max 3",
        "groupoid " + corpus("prop_or.thy"),
        "groupoid " + corpus("group.thy") + " --max 2",
        "groupoid " + corpus("semigroup.thy") + " --max 2",
        "groupoid " + corpus("involution.thy") + " --max 2",
    };
    for (const auto& base : model_cmds) {
        RunResult one = run(base + " --workers 1");
        CHECK(one.exit_code == 0);
        CHECK_FALSE(one.out.empty());
        for (int w : {2, 8}) {
            CAPTURE(base);
            CHECK(run(base + " --workers " + std::to_string(w)).out == one.out);
        }
    }
    for (const auto& base : groupoid_cmds) {
        RunResult one = run(base + " --workers 1");
        CHECK(one.exit_code == 0);
        CHECK_FALSE(one.out.empty());
        for (int w : {2, 8}) {
            CAPTURE(base);
            CHECK(run(base + " --workers " + std::to_string(w)).out == one.out);
        }
    }
}
