#include "doctest.h"

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace strata;
using namespace strata::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "strata");
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string parse_error(const std::function<void()>& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("signature text") {
    CHECK(parse_signature("2,1,-1,0") == std::vector<std::vector<int>>{{2, 1, -1, 0}});
    CHECK(parse_signature(" 0, 0 ; 0 ") == std::vector<std::vector<int>>{{0, 0}, {0}});
    CHECK(parse_error([] { parse_signature("2,,1"); }).find("position 3") != std::string::npos);
    CHECK(parse_error([] { parse_signature("2 x"); }).find("position 3") != std::string::npos);
    CHECK_FALSE(parse_error([] { parse_signature(""); }).empty());
    CHECK_FALSE(parse_error([] { parse_signature("99999999999"); }).empty());
}

TEST_CASE("residue text") {
    auto r = parse_residues("[(0,1),(0,2)];[(0,3)]");
    REQUIRE(r.size() == 2);
    CHECK(r[0] == ResidueCondition{{0, 1}, {0, 2}});
    CHECK(r[1] == ResidueCondition{{0, 3}});
    CHECK(parse_residues("").empty());
    CHECK(parse_error([] { parse_residues("[(0,1]"); }).find("position 6") != std::string::npos);
    CHECK(parse_error([] { parse_residues("[(0,1)]x"); }).find("expected ';'") != std::string::npos);
}

TEST_CASE("profile text") {
    CHECK(parse_profile("1,0") == Profile{1, 0});
    CHECK(parse_profile("") == Profile{});
    CHECK_FALSE(parse_error([] { parse_profile("1;0"); }).empty());
}

TEST_CASE("expressions follow the usual precedence") {
    test_support::CacheScope scope;
    auto X = make_stratum({2});
    auto x3 = evaluate(pow(xi(X), 3));
    auto p3 = evaluate(pow(psi(X, 1), 3));
    CHECK(evaluate(parse_expression(X, "xi^3")) == x3);
    CHECK(evaluate(parse_expression(X, "2*xi^3")) == 2 * x3);
    CHECK(evaluate(parse_expression(X, "1/2*xi^3 + psi(1)^3")) == x3 / 2 + p3);
    CHECK(evaluate(parse_expression(X, "xi^3 - xi^3")) == 0);
    CHECK(evaluate(parse_expression(X, "-psi(1)^3")) == -p3);
    CHECK(evaluate(parse_expression(X, "(xi + psi(1))^3")) == evaluate(pow(xi(X) + psi(X, 1), 3)));
    // right associative: 2^(3^1)
    CHECK(evaluate(parse_expression(X, "2^3^1*psi(1)^3")) == 8 * p3);
    CHECK(evaluate(parse_expression(X, "2^1^3*psi(1)^3")) == 2 * p3);
    CHECK(evaluate(parse_expression(X, "D(0)*xi^2")) == evaluate(TautClass::from_graph(X, {{0}, 0}) * pow(xi(X), 2)));
    CHECK(evaluate(parse_expression(X, "D(1,0;0)*xi")) ==
          evaluate(TautClass::from_graph(X, {*canonical_profile(X, {1, 0}), 0}) * xi(X)));

    CHECK(parse_error([&] { parse_expression(X, "xi^"); }).find("position") != std::string::npos);
    CHECK(parse_error([&] { parse_expression(X, "psi(2)"); }).find("no point 2") != std::string::npos);
    CHECK(parse_error([&] { parse_expression(X, "foo"); }).find("unknown name") != std::string::npos);
    CHECK(parse_error([&] { parse_expression(X, "D(7)"); }).find("no BIC 7") != std::string::npos);
    CHECK_FALSE(parse_error([&] { parse_expression(X, "xi^(1/2)"); }).empty());
    CHECK_FALSE(parse_error([&] { parse_expression(X, "xi^xi"); }).empty());
}

TEST_CASE("commands and exit codes") {
    test_support::CacheScope scope;
    auto r = run_cli({"--cache-dir", "", "euler", "--sig", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "-1/40\n");

    r = run_cli({"--cache-dir", "", "eval", "--sig", "1,1", "--expr", "xi^3*psi(1)"});
    CHECK(r.code == 0);
    CHECK(r.out == "-1/360\n");

    r = run_cli({"info", "--sig", "2,2"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("Total graphs: 394") != std::string::npos);

    r = run_cli({"eval", "--sig", "1,,1", "--expr", "xi"});
    CHECK(r.code == 2);
    CHECK(r.err.find("position") != std::string::npos);

    r = run_cli({"lookup", "--sig", "2", "--profile", "0,0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown profile") != std::string::npos);

    r = run_cli({"info", "--sig", "1"});
    CHECK(r.code == 2);

    r = run_cli({"frobnicate"});
    CHECK(r.code == 2);
}

TEST_CASE("oracle misses exit with their own code") {
    test_support::CacheScope scope(false, false);
    auto r = run_cli({"--cache-dir", "", "eval", "--sig", "3,1", "--expr", "psi(1)^6"});
    CHECK(r.code == 3);
    CHECK(r.err.find("missing key") != std::string::npos);
}

TEST_CASE("json listings load back into the library") {
    test_support::CacheScope scope;
    auto X = make_stratum({4});
    auto r = run_cli({"--format", "json", "bics", "--sig", "4"});
    REQUIRE(r.code == 0);
    auto arr = nlohmann::json::parse(r.out);
    REQUIRE(arr.size() == bics(X).size());
    for (auto& j : arr) {
        std::map<int, PointRef> dmp;
        for (auto& d : j.at("dmp")) dmp[d.at(0).get<int>()] = {d.at(1).get<int>(), d.at(2).get<int>()};
        auto G = make_elg(X, LevelGraph::from_json(j.at("graph")), dmp);
        int i = j.at("index").get<int>();
        CHECK(G->is_isomorphic(*bics(X)[i]));
        CHECK(j.at("automorphisms").get<int>() == bics(X)[i]->automorphisms());
    }

    r = run_cli({"--format", "json", "lookup", "--sig", "4", "--profile", "1,0"});
    if (r.code == 0) {
        auto l = nlohmann::json::parse(r.out);
        for (auto& j : l) {
            std::map<int, PointRef> dmp;
            for (auto& d : j.at("dmp")) dmp[d.at(0).get<int>()] = {d.at(1).get<int>(), d.at(2).get<int>()};
            auto G = make_elg(X, LevelGraph::from_json(j.at("graph")), dmp);
            EnhancedProfile ep{j.at("profile").get<Profile>(), j.at("component").get<int>()};
            CHECK(G->is_isomorphic(*lookup_graph(X, ep)));
        }
    }
}

TEST_CASE("cache commands") {
    test_support::CacheScope scope(false, false);
    auto dir = test_support::fresh_temp_dir("strata-cli");
    auto file = (dir / "values.jsonl").string();
    {
        std::ofstream f(file);
        f << R"({"sig":[2],"psis":[[1,3]],"value":"1/1920"})" << "\n";
    }
    auto r = run_cli({"--cache-dir", dir.string(), "cache", "import", file});
    CHECK(r.code == 0);
    CHECK(r.out == "imported 1 records\n");
    r = run_cli({"--cache-dir", dir.string(), "cache", "print", "--kind", "adm"});
    CHECK(r.out.find("1/1920") != std::string::npos);
    auto out = (dir / "out.jsonl").string();
    r = run_cli({"--cache-dir", dir.string(), "cache", "export", out, "--kind", "adm"});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(out));
    std::filesystem::remove_all(dir);
}
