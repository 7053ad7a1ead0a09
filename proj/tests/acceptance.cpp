// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Graphs are located through intrinsic descriptors (genera, prongs, edge counts),
// never through list positions.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "strata/euler.hpp"
#include "test_support.hpp"

using namespace strata;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream why;
    std::string note;
    template <class A, class B>
    void eq(const std::string& what, const A& got, const B& want) {
        if (!(got == want)) {
            ok = false;
            why << " [" << what << ": got " << show(got) << ", want " << show(want) << "]";
        }
    }
    void truth(const std::string& what, bool b) {
        if (!b) {
            ok = false;
            why << " [" << what << "]";
        }
    }
    template <class T>
    static std::string show(const T& v) {
        if constexpr (std::is_same_v<T, Q>) {
            return to_string(v);
        } else if constexpr (std::is_same_v<T, std::vector<int>>) {
            std::string s = "(";
            for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s + ")";
        } else if constexpr (std::is_same_v<T, std::set<int>> || std::is_same_v<T, std::multiset<Q>>) {
            std::string s = "{";
            for (auto it = v.begin(); it != v.end(); ++it) s += (it == v.begin() ? "" : ",") + show(*it);
            return s + "}";
        } else if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
        } else {
            std::ostringstream os;
            os << v;
            return os.str();
        }
    }
};

int failures = 0;

void criterion(int n, const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.why << " [exception: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.ok) ++failures;
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << n << " " << name;
    std::cout << " (" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s)";
    if (!c.note.empty()) std::cout << " " << c.note;
    std::cout << c.why.str() << std::endl;
}

Q q(long a, long b = 1) { return frac(a, b); }

bool has_long_edge(const LevelGraph& G) {
    for (auto& e : G.edges()) {
        int d = G.rel_level(G.vertex(e.b)) - G.rel_level(G.vertex(e.a));
        if (d > 1 || d < -1) return true;
    }
    return false;
}

std::set<int> prong_set(const LevelGraph& G) {
    std::set<int> s;
    for (auto& e : G.vertical_edges()) s.insert(G.prong(e));
    return s;
}

// two vertices joined by three edges of prong 1
bool is_triple_banana(const LevelGraph& G) {
    return G.num_vertices() == 2 && G.edges().size() == 3 && prong_set(G) == std::set<int>{1};
}

std::multiset<int> genus_multiset(const LevelGraph& G) {
    return {G.genera().begin(), G.genera().end()};
}

// the zigzag graph in (2,1,1), levels as given
LevelGraph zigzag_graph(std::vector<int> levels) {
    return LevelGraph({1, 1, 0, 0}, {{1, 2}, {3, 4}, {5, 6, 7}, {8, 9, 10, 11}},
                      {{1, 6}, {3, 7}, {4, 10}, {2, 11}},
                      {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 2}, {6, -2}, {7, -2},
                       {8, 1}, {9, 1}, {10, -2}, {11, -2}},
                      std::move(levels));
}

}  // namespace

int main() {
    fs::path dir = test_support::fresh_temp_dir("strata-acceptance");
    EvalCache::instance().set_dir(dir.string());
    EvalCache::instance().reset();

    criterion(1, "boundary counts per codimension", [](Check& c) {
        c.eq("(2,)", codim_counts(make_stratum({2})), std::vector<int>{1, 2, 1});
        c.eq("(4,)", codim_counts(make_stratum({4})), std::vector<int>{1, 8, 19, 16, 4});
        c.eq("(2,2)", codim_counts(make_stratum({2, 2})), std::vector<int>{1, 20, 86, 147, 110, 30});
        c.eq("(1,1,1,1)", codim_counts(make_stratum({1, 1, 1, 1})),
             std::vector<int>{1, 102, 1100, 4222, 7531, 6708, 2856, 456});
        auto total = [](const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); };
        c.eq("total (2,)", total(codim_counts(make_stratum({2}))), 4);
        c.eq("total (4,)", total(codim_counts(make_stratum({4}))), 48);
        c.eq("total (2,2)", total(codim_counts(make_stratum({2, 2}))), 394);
        c.eq("total (1,1,1,1)", total(codim_counts(make_stratum({1, 1, 1, 1}))), 22976);
    });

    criterion(2, "bic_alt component counts", [](Check& c) {
        c.eq("raw two-level graphs of (1,1)", bic_alt_noiso({1, 1}).size(), size_t{5});
        c.eq("BICs of (0,0)", bics(make_stratum({0, 0})).size(), size_t{1});
        c.eq("BICs of [(0,0),(0,)]", bics(make_stratum(std::vector<std::vector<int>>{{0, 0}, {0}})).size(),
             size_t{4});
    });

    criterion(3, "dimension identities", [](Check& c) {
        c.eq("dim (2,)", make_stratum({2})->dim(), 3);
        c.eq("dim (1,1)", make_stratum({1, 1})->dim(), 4);
        c.eq("dim (2,2)", make_stratum({2, 2})->dim(), 6);
        c.eq("dim (1,1,1,1)", make_stratum({1, 1, 1, 1})->dim(), 8);
        auto X = make_stratum({4});
        for (auto& B : bics(X))
            c.eq("top+bot of " + B->str(), B->top().S->dim() + B->bot().S->dim(), 4);
    });

    criterion(4, "legality fixtures", [](Check& c) {
        // long zigzag: same graph, the two bottom levels swapped
        auto X = make_stratum({2, 1, 1});
        std::map<int, PointRef> dmp{{5, {0, 0}}, {8, {0, 1}}, {9, {0, 2}}};
        auto left = make_elg(X, zigzag_graph({0, 0, -1, -2}), dmp);
        auto right = make_elg(X, zigzag_graph({0, 0, -2, -1}), dmp);
        c.eq("long zigzag left legal", left->is_legal(), false);
        c.eq("long zigzag right legal", right->is_legal(), true);

        // zigzag: degenerations of the bottom level of the two-level graph
        auto Z = make_elg(X, zigzag_graph({0, 0, -1, -1}), dmp);
        c.truth("zigzag two-level graph legal", Z->is_legal());
        LevelStratum L = Z->level(1);
        c.eq("bottom level dimension", L.S->dim(), 1);
        c.eq("bottom level residue conditions", L.S->res_cond().size(), size_t{2});
        std::map<int, PointRef> mdmp;
        for (int i = 1; i <= 7; ++i) mdmp[i] = L.leg_dict.at(i + 4);
        auto level_graph = [&](std::vector<int> levels) {
            LevelGraph G({0, 0}, {{1, 2, 3}, {4, 5, 6, 7}}, {},
                         {{1, 2}, {2, -2}, {3, -2}, {4, 1}, {5, 1}, {6, -2}, {7, -2}}, std::move(levels));
            return make_elg(L.S, G, mdmp);
        };
        c.eq("zigzag center legal", level_graph({-1, 0})->is_legal(), true);
        c.eq("zigzag right legal", level_graph({0, -1})->is_legal(), false);

        c.eq("(1,-1) empty", make_stratum({1, -1})->is_empty(), true);
    });

    criterion(5, "automorphisms in (4,)", [](Check& c) {
        auto X = make_stratum({4});
        auto sym = make_elg(X, LevelGraph({2, 0}, {{1, 2}, {3, 4, 5}}, {{1, 4}, {2, 5}},
                                          {{1, 1}, {2, 1}, {3, 4}, {4, -3}, {5, -3}}, {0, -1}),
                            {{3, {0, 0}}});
        auto asym = make_elg(X, LevelGraph({2, 0}, {{1, 2}, {3, 4, 5}}, {{1, 4}, {2, 5}},
                                           {{1, 2}, {2, 0}, {3, 4}, {4, -4}, {5, -2}}, {0, -1}),
                             {{3, {0, 0}}});
        c.eq("symmetric banana", sym->automorphisms(), 2);
        c.eq("asymmetric banana", asym->automorphisms(), 1);
        c.eq("banana isomorphic", sym->is_isomorphic(*asym), false);
        int triple = 0;
        std::set<int> counts;
        for (auto& B : bics(X)) {
            counts.insert(B->automorphisms());
            if (is_triple_banana(B->LG)) {
                ++triple;
                c.eq("triple banana", B->automorphisms(), 6);
            }
        }
        c.eq("triple bananas found", triple, 1);
        c.eq("automorphism counts", counts, std::set<int>{1, 2, 6});
    });

    criterion(6, "reducibility statistics in (4,)", [](Check& c) {
        auto X = make_stratum({4});
        c.eq("length-2 enhanced profiles", enhanced_profiles_of_length(X, 2).size(), size_t{19});
        const auto& profiles = lookup_list(X).at(2);
        int one = 0, two = 0;
        for (auto& p : profiles) {
            size_t n = lookup(X, p).size();
            one += n == 1;
            two += n == 2;
        }
        c.eq("profiles with one component", one, 15);
        c.eq("profiles with two components", two, 2);

        std::vector<EnhancedProfile> left, right;
        for (auto& ep : enhanced_profiles_of_length(X, 2)) {
            const auto& G = lookup_graph(X, ep)->LG;
            if (prong_set(G) != std::set<int>{1, 3}) continue;
            if (G.edges().size() == 4 && !has_long_edge(G)) left.push_back(ep);
            if (G.edges().size() == 3 && has_long_edge(G)) right.push_back(ep);
        }
        c.eq("left graphs", left.size(), size_t{1});
        c.eq("right graphs", right.size(), size_t{1});
        if (left.size() == 1 && right.size() == 1) {
            c.truth("same profile", left[0].p == right[0].p);
            auto gl = lookup_graph(X, left[0]), gr = lookup_graph(X, right[0]);
            c.truth("genus multisets differ", genus_multiset(gl->LG) != genus_multiset(gr->LG));
            c.truth("not isomorphic", !gl->is_isomorphic(*gr));
            for (auto& g : {gl, gr})
                for (int i : {1, 2})
                    c.truth("delta(" + std::to_string(i) + ") is the profile BIC",
                            g->delta(i)->is_isomorphic(*bics(X)[g == gl ? left[0].p[i - 1] : right[0].p[i - 1]]));
            c.eq("profile has two components", lookup(X, left[0].p).size(), size_t{2});
        }

        int found = 0;
        for (size_t t = 0; t < bics(X).size(); ++t) {
            const auto& B = bics(X)[t];
            if (!is_triple_banana(B->LG)) continue;
            for (auto& [b, preimage] : bot_to_bic_inv(X, static_cast<int>(t))) {
                if (preimage.size() != 3) continue;
                ++found;
                c.eq("triple banana bottom components", lookup(X, {static_cast<int>(t), b}).size(), size_t{1});
            }
        }
        c.eq("three-element preimages", found, 1);
    });

    criterion(7, "clutch and split round trips", [](Check& c) {
        auto X = make_stratum({1, 1});
        for (auto& B : bics(X)) c.truth("clutch(split) " + B->str(), clutch(split_bic(*B))->is_isomorphic(*B));
        for (auto sig : {std::vector<int>{1, 1}, std::vector<int>{2, 2, -2}}) {
            auto Y = make_stratum(sig);
            int n = 0;
            for (auto& ep : enhanced_profiles_of_length(Y, 2)) {
                ++n;
                auto G = lookup_graph(Y, ep);
                c.truth("clutch(doublesplit) " + to_string(ep), clutch(doublesplit(Y, ep))->is_isomorphic(*G));
            }
            c.truth("some length-2 profiles", n > 0);
        }
    });

    criterion(8, "intersection numbers", [](Check& c) {
        auto X = make_stratum({2});
        c.eq("(2,) psi1^3", evaluate(pow(psi(X, 1), 3)), q(1, 1920));
        c.eq("(2,) xi^3", evaluate(pow(xi(X), 3)), q(-1, 640));
        c.eq("(2,) psi1", evaluate(psi(X, 1)), q(0));
        auto Y = make_stratum({1, 1});
        c.eq("(1,1) xi^2 psi1 psi2", evaluate(pow(xi(Y), 2) * psi(Y, 1) * psi(Y, 2)), q(-1, 720));
        c.eq("(1,1) xi^3 psi1", evaluate(pow(xi(Y), 3) * psi(Y, 1)), q(-1, 360));
        int ct = 0;
        for (size_t b = 0; b < bics(Y).size(); ++b) {
            const auto& G = bics(Y)[b]->LG;
            auto top = G.vertices_on_level(0);
            if (G.edges().size() == 1 && top.size() == 1 && G.genus(top[0]) == 2) {
                ++ct;
                c.eq("top_xi_at_level of the genus 2 compact type BIC",
                     top_xi_at_level(Y, {{static_cast<int>(b)}, 0}, 0), q(-1, 640));
            }
        }
        c.eq("genus 2 compact type BICs", ct, 1);
        auto R = make_stratum({23, 5, -13, -17});
        c.eq("residue stratum class", evaluate(res_stratum_class(R, {{0, 2}})), q(5));
    });

    criterion(9, "Euler characteristics", [](Check& c) {
        c.eq("chi(2,)", euler_characteristic(make_stratum({2})), q(-1, 40));
        auto t0 = std::chrono::steady_clock::now();
        c.eq("chi(4,)", euler_characteristic(make_stratum({4})), q(-55, 504));
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.truth("chi(4,) within 10 s", s < 10.0);
    });

    criterion(10, "property suites", [](Check& c) {
        // isomorphisms against all leg bijections
        int pairs = 0, maps = 0;
        for (auto sig : {std::vector<int>{2}, std::vector<int>{1, 1}, std::vector<int>{0, 0}, std::vector<int>{4}}) {
            auto X = make_stratum(sig);
            std::vector<ELGPtr> graphs;
            for (int l = 1; l <= 2; ++l)
                for (auto& ep : enhanced_profiles_of_length(X, l))
                    if (lookup_graph(X, ep)->LG.all_legs().size() <= 6) graphs.push_back(lookup_graph(X, ep));
            for (size_t i = 0; i < graphs.size(); ++i) {
                auto shuffled = test_support::relabel(*graphs[i], static_cast<unsigned>(i) + 7);
                for (auto* other : {graphs[i].get(), shuffled.get()}) {
                    ++pairs;
                    auto expect = test_support::brute_force_isos(*graphs[i], *other);
                    maps += static_cast<int>(expect.size());
                    c.truth("some isomorphism to a relabelled copy", !expect.empty());
                    c.truth("iso stream of " + graphs[i]->str(), test_support::iso_stream(*graphs[i], *other) == expect);
                }
                for (size_t j = 0; j < graphs.size(); ++j) {
                    if (i == j) continue;
                    ++pairs;
                    c.truth("iso stream between distinct graphs",
                            test_support::iso_stream(*graphs[i], *graphs[j]) ==
                                test_support::brute_force_isos(*graphs[i], *graphs[j]));
                }
            }
        }
        c.truth("pairs checked", pairs > 50);
        int legs_checked = 0;

        // leg choice on the one-dimensional graphs of (4,)
        auto X = make_stratum({4});
        std::multiset<Q> nonzero;
        for (auto& ep : enhanced_profiles_of_length(X, X->dim() - 1)) {
            const auto& info = level_info(X, ep);
            auto D = TautClass::from_graph(X, ep);
            Q expected = evaluate(xi(X) * D);
            for (int l = 0; l <= ep.length(); ++l) {
                if (info.level_dim[l] != 1) continue;
                if (expected != 0) nonzero.insert(expected);
                for (auto& [leg, lev] : info.leg_level) {
                    if (lev != l) continue;
                    ++legs_checked;
                    c.eq("xi at level " + std::to_string(l) + " with leg " + std::to_string(leg) + " on " +
                             to_string(ep),
                         evaluate(xi_at_level(X, l, ep, leg)), expected);
                }
            }
        }
        c.note = std::to_string(pairs) + " graph pairs, " + std::to_string(maps) + " isomorphisms, " +
                 std::to_string(legs_checked) + " leg choices";
        c.eq("nonzero leg test values", nonzero, std::multiset<Q>{q(1, 48), q(1, 48), q(1, 48), q(1, 24)});

        // triple BIC products on (2,) in every order and bracketing
        auto Y = make_stratum({2});
        int nb = static_cast<int>(bics(Y).size());
        std::vector<TautClass> D;
        for (int b = 0; b < nb; ++b) D.push_back(TautClass::from_graph(Y, {{b}, 0}));
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
                for (int k = 0; k < nb; ++k) {
                    Q ref = evaluate((D[i] * D[j]) * D[k]);
                    int idx[3] = {i, j, k};
                    std::sort(idx, idx + 3);
                    do {
                        std::string tag = std::to_string(idx[0]) + std::to_string(idx[1]) + std::to_string(idx[2]);
                        c.eq("(D D) D " + tag, evaluate((D[idx[0]] * D[idx[1]]) * D[idx[2]]), ref);
                        c.eq("D (D D) " + tag, evaluate(D[idx[0]] * (D[idx[1]] * D[idx[2]])), ref);
                    } while (std::next_permutation(idx, idx + 3));
                }

        // normal bundle against self intersection
        for (int b = 0; b < nb; ++b) {
            EnhancedProfile ep{{b}, 0};
            c.truth("NB(D) == D^2 for BIC " + std::to_string(b), normal_bundle(Y, ep) == D[b] * D[b]);
        }

        // transversal pair
        c.truth("cnb UNIT", std::holds_alternative<Unit>(cnb(Y, {{1}, 0}, {{0}, 0})));
    });

    std::error_code ec;
    fs::remove_all(dir, ec);
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " failing criteria" << std::endl;
    return failures ? 1 : 0;
}
