#include "doctest.h"

#include <fstream>

#include "json.hpp"
#include "test_support.hpp"

using namespace strata;
namespace fs = std::filesystem;

namespace {

// string and dilaton equations, down to <tau_0^3>_0 and <tau_1>_1
Q witten(int g, std::vector<int> a) {
    int n = static_cast<int>(a.size());
    int s = 0;
    for (int x : a) s += x;
    if (s != 3 * g - 3 + n || 2 * g - 2 + n <= 0) return 0;
    if (g == 0 && n == 3) return 1;
    if (g == 1 && n == 1) return frac(1, 24);
    for (int i = 0; i < n; ++i) {
        if (a[i] == 1) {
            a.erase(a.begin() + i);
            return Q(2 * g - 2 + n - 1) * witten(g, a);
        }
    }
    for (int i = 0; i < n; ++i) {
        if (a[i] != 0) continue;
        a.erase(a.begin() + i);
        Q r = 0;
        for (size_t j = 0; j < a.size(); ++j) {
            if (a[j] == 0) continue;
            auto b = a;
            --b[j];
            r += witten(g, b);
        }
        return r;
    }
    return 0;
}

void all_exponents(int n, int total, std::vector<int>& cur, const std::function<void()>& f) {
    if (static_cast<int>(cur.size()) == n) {
        if (total == 0) f();
        return;
    }
    for (int e = 0; e <= total; ++e) {
        cur.push_back(e);
        all_exponents(n, total - e, cur, f);
        cur.pop_back();
    }
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("closed forms against string and dilaton recursion") {
    // in genus 0 only the number of points matters
    for (int n = 3; n <= 7; ++n) {
        std::vector<int> sig(n, -1);
        sig[0] = n - 3;  // sums to -2
        std::vector<int> cur;
        all_exponents(n, n - 3, cur, [&] {
            std::map<int, int> psis;
            for (int i = 0; i < n; ++i)
                if (cur[i]) psis[i + 1] = cur[i];
            CAPTURE(n);
            CHECK(*analytic_adm(adm_key(sig, psis)) == witten(0, cur));
        });
    }
    for (int n = 1; n <= 5; ++n) {
        std::vector<int> sig(n, 0);
        std::vector<int> cur;
        all_exponents(n, n, cur, [&] {
            std::map<int, int> psis;
            for (int i = 0; i < n; ++i)
                if (cur[i]) psis[i + 1] = cur[i];
            CHECK(*analytic_adm(adm_key(sig, psis)) == witten(1, cur));
        });
    }
    CHECK_FALSE(analytic_adm(adm_key({2}, {{1, 3}})).has_value());
}

TEST_CASE("adm keys ignore the order of points") {
    auto k1 = adm_key({-2, 4, -2}, {{2, 1}, {3, 1}});
    auto k2 = adm_key({4, -2, -2}, {{1, 1}, {2, 1}});
    auto k3 = adm_key({-2, -2, 4}, {{1, 1}, {3, 1}});
    CHECK(k1 == k2);
    CHECK(k1 == k3);
    CHECK(adm_key({1, 1}, {{1, 3}, {2, 1}}) == adm_key({1, 1}, {{1, 1}, {2, 3}}));
    CHECK_FALSE(adm_key({2, 0}, {{1, 1}}) == adm_key({2, 0}, {{2, 1}}));
}

TEST_CASE("xi keys ignore component order and pole names") {
    std::vector<std::vector<int>> a{{2, -2, -2}, {1, 1, -2, -2}};
    std::vector<std::vector<int>> b{{1, 1, -2, -2}, {2, -2, -2}};
    std::vector<ResidueCondition> ra{{{0, 1}, {1, 3}}, {{0, 2}, {1, 2}}};
    std::vector<ResidueCondition> rb{{{1, 1}, {0, 3}}, {{1, 2}, {0, 2}}};
    CHECK(xi_key(a, ra) == xi_key(b, rb));
    std::vector<ResidueCondition> rc{{{1, 2}, {0, 2}}, {{1, 1}, {0, 3}}};
    CHECK(xi_key(a, ra) == xi_key(b, rc));
    std::vector<ResidueCondition> swapped_poles{{{0, 2}, {1, 3}}, {{0, 1}, {1, 2}}};
    CHECK(xi_key(a, ra) == xi_key(a, swapped_poles));
    std::vector<ResidueCondition> one{{{0, 1}, {1, 3}}};
    CHECK_FALSE(xi_key(a, ra) == xi_key(a, one));
}

TEST_CASE("JSONL files round trip") {
    test_support::CacheScope scope(false, false);
    auto dir = test_support::fresh_temp_dir("strata-cache");
    auto& c = EvalCache::instance();
    c.set_dir(dir.string());
    auto ak = adm_key({2}, {{1, 3}});
    auto xk = xi_key({{2}}, {});
    c.put_adm(ak, frac(1, 1920));
    c.put_xi(xk, frac(-1, 640));
    REQUIRE(fs::exists(dir / "adm_evals.jsonl"));
    REQUIRE(fs::exists(dir / "top_xis.jsonl"));
    for (auto& l : lines_of(dir / "adm_evals.jsonl")) {
        auto j = nlohmann::json::parse(l);
        CHECK(j.contains("sig"));
        CHECK(j.contains("psis"));
        CHECK(j.at("value").is_string());
    }

    c.set_dir(dir.string());  // forces a reload from disk
    CHECK(c.adm(ak) == frac(1, 1920));
    CHECK(c.xi(xk) == frac(-1, 640));
    CHECK(c.adm_values().size() == 1);

    auto out = dir / "all.jsonl";
    c.export_all(out.string());
    CHECK(lines_of(out).size() == 2);

    auto dir2 = test_support::fresh_temp_dir("strata-cache");
    c.set_dir(dir2.string());
    CHECK_FALSE(c.adm(ak).has_value());
    CHECK(c.import_file(out.string()) == 2);
    CHECK(c.adm(ak) == frac(1, 1920));
    CHECK(c.xi(xk) == frac(-1, 640));
    CHECK(fs::exists(dir2 / "top_xis.jsonl"));

    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("corrupt cache lines name file and line") {
    test_support::CacheScope scope(false, false);
    auto dir = test_support::fresh_temp_dir("strata-cache");
    {
        std::ofstream f(dir / "bad.jsonl");
        f << R"({"sig":[2],"psis":[[1,3]],"value":"1/1920"})" << "\n" << "{not json\n";
    }
    try {
        EvalCache::instance().import_file((dir / "bad.jsonl").string());
        FAIL("no exception");
    } catch (const FileCorrupt& e) {
        CHECK(std::string(e.what()).find("bad.jsonl:2") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("missing values raise OracleMiss with the key") {
    test_support::CacheScope scope(false, false);
    try {
        adm_evaluate(adm_key({2}, {{1, 3}}));
        FAIL("no exception");
    } catch (const OracleMiss& e) {
        CHECK(e.exit_code() == 3);
        CHECK(e.key.find("(2,)") != std::string::npos);
    }
    // closed forms need no cache
    CHECK(adm_evaluate(adm_key({0, 0}, {{1, 2}})) == frac(1, 24));
}

TEST_CASE("printed tables") {
    std::map<AdmKey, Q> v{{adm_key({2}, {{1, 3}}), frac(1, 1920)}};
    auto t = print_adm_evals(v);
    CHECK(t.find("1/1920") != std::string::npos);
    CHECK(t.find(std::string(64, '-')) != std::string::npos);
}
