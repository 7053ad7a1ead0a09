#include "doctest.h"

#include "strata/clutch_split.hpp"
#include "test_support.hpp"

using namespace strata;
using test_support::brute_force_isos;
using test_support::relabel;

namespace {

std::vector<ELGPtr> graphs_up_to(StratumPtr X, int length) {
    std::vector<ELGPtr> out;
    for (int l = 1; l <= length; ++l)
        for (auto& ep : enhanced_profiles_of_length(X, l)) out.push_back(lookup_graph(X, ep));
    return out;
}

}  // namespace

TEST_CASE("level graph JSON round trip") {
    for (auto sig : {std::vector<int>{1, 1}, std::vector<int>{4}, std::vector<int>{2, 2, -2}}) {
        auto X = make_stratum(sig);
        for (auto& G : graphs_up_to(X, 3)) {
            auto j = G->LG.to_json();
            LevelGraph back = LevelGraph::from_json(nlohmann::json::parse(j.dump()));
            CHECK(back == G->LG);
            CHECK(back.to_json() == j);
        }
    }
}

TEST_CASE("constructor rejects malformed graphs") {
    // vertical edge orders must be k and -k-2
    CHECK_THROWS_AS(LevelGraph({1, 0}, {{1}, {2, 3}}, {{1, 3}}, {{1, 0}, {2, 2}, {3, -3}}, {0, -1}), IllegalGraph);
    CHECK_THROWS_AS(LevelGraph({1, 0}, {{1}, {1, 3}}, {{1, 3}}, {{1, 0}, {3, -2}}, {0, -1}), IllegalGraph);
    CHECK_THROWS_AS(LevelGraph({1}, {{1}}, {}, {}, {0}), IllegalGraph);
}

TEST_CASE("automorphism counts match brute force") {
    for (auto sig : {std::vector<int>{2}, std::vector<int>{1, 1}, std::vector<int>{0, 0}, std::vector<int>{4}}) {
        auto X = make_stratum(sig);
        for (auto& G : graphs_up_to(X, 2)) {
            if (G->LG.all_legs().size() > 6) continue;
            CAPTURE(G->str());
            CHECK(G->automorphisms() == static_cast<int>(brute_force_isos(*G, *G).size()));
        }
    }
}

TEST_CASE("canonical keys survive relabelling") {
    auto X = make_stratum({1, 1, 1, 1});
    const auto& bs = bics(X);
    for (size_t i = 0; i < bs.size(); i += 7) {
        auto R = relabel(*bs[i], static_cast<unsigned>(i));
        CHECK(R->key() == bs[i]->key());
        CHECK(R->automorphisms() == bs[i]->automorphisms());
        CHECK(bic_index(X, *R) == static_cast<int>(i));
    }
}

TEST_CASE("BICs are pairwise non-isomorphic and legal") {
    for (auto sig : {std::vector<int>{2}, std::vector<int>{1, 1}, std::vector<int>{4}}) {
        auto X = make_stratum(sig);
        const auto& bs = bics(X);
        for (size_t i = 0; i < bs.size(); ++i) {
            CHECK(bs[i]->is_legal());
            CHECK(bs[i]->LG.is_stable());
            CHECK(bs[i]->LG.is_connected());
            CHECK(bs[i]->LG.is_bic());
            for (size_t j = i + 1; j < bs.size(); ++j) {
                CHECK_FALSE(bs[i]->is_isomorphic(*bs[j]));
                if (bs[i]->LG.all_legs().size() <= 6) CHECK(brute_force_isos(*bs[i], *bs[j]).empty());
            }
        }
    }
}

TEST_CASE("bic_alt on single components") {
    CHECK(bic_alt({2}).size() == 2);
    CHECK(bic_alt({1, 1}).size() == 4);
    CHECK(bic_alt({4}).size() == 8);
    CHECK(bic_alt({1, 1}).size() == bics(make_stratum({1, 1})).size());
    // raw list covers each isomorphism class
    CHECK(bic_alt_noiso({1, 1}).size() >= bic_alt({1, 1}).size());
}

TEST_CASE("undegenerations of three-level graphs are the profile BICs") {
    auto X = make_stratum({4});
    for (auto& ep : enhanced_profiles_of_length(X, 2)) {
        auto G = lookup_graph(X, ep);
        CAPTURE(to_string(ep));
        CHECK(G->delta(1)->is_isomorphic(*bics(X)[ep.p[0]]));
        CHECK(G->delta(2)->is_isomorphic(*bics(X)[ep.p[1]]));
        CHECK(enhanced_profile_of(X, *relabel(*G, 3)) == ep);
    }
}

TEST_CASE("lookup accepts either order of a profile") {
    auto X = make_stratum({4});
    for (auto& p : lookup_list(X).at(2)) {
        Profile r(p.rbegin(), p.rend());
        const auto& a = lookup(X, p);
        const auto& b = lookup(X, r);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            bool found = false;
            for (auto& g : b) found = found || g->is_isomorphic(*a[i]);
            CHECK(found);
        }
    }
}

TEST_CASE("codimension one degenerations squish back") {
    auto X = make_stratum({2, 2});
    for (auto& ep : enhanced_profiles_of_length(X, 1))
        for (auto& big : codim_one_degenerations(X, ep)) {
            CHECK(big.length() == 2);
            CHECK(is_degeneration(X, big, ep));
        }
}

TEST_CASE("split and clutch on a disconnected stratum") {
    auto X = make_stratum(std::vector<std::vector<int>>{{0, 0}, {0}});
    for (auto& B : bics(X)) CHECK(clutch(split_bic(*B))->is_isomorphic(*B));
}
