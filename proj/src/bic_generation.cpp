#include "strata/bic_generation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

namespace strata {

namespace {

struct Generator {
    std::vector<int> sig;
    int g = 0, n = 0;
    bool noiso = false;
    std::set<std::vector<int>> seen;
    std::set<std::string> seen_raw;
    std::vector<std::pair<std::vector<int>, LevelGraph>> out;

    // current configuration
    int t = 0, b = 0;
    std::vector<int> vert_of_point;
    std::vector<int> genus;
    std::vector<int> budget;  // top: sum(k-1) left, bottom: sum(k+1) left
    std::vector<int> deg;
    std::vector<std::array<int, 3>> edges;  // top v, bottom w, prong

    void run() {
        n = static_cast<int>(sig.size());
        g = (std::accumulate(sig.begin(), sig.end(), 0) + 2) / 2;
        int maxv = 2 * g - 2 + n;
        for (t = 1; t < maxv; ++t)
            for (b = 1; t + b <= maxv; ++b) {
                vert_of_point.assign(n, -1);
                place_points(0, 0, 0);
            }
    }

    // restricted growth: a point goes to an opened vertex or opens the next one
    void place_points(int i, int open_top, int open_bot) {
        if (i == n) {
            if (open_bot < b) return;  // bottom vertices need marked points
            choose_genera(open_top);
            return;
        }
        for (int v = 0; v < std::min(open_top + 1, t); ++v) {
            vert_of_point[i] = v;
            place_points(i + 1, std::max(open_top, v + 1), open_bot);
        }
        for (int w = 0; w < std::min(open_bot + 1, b); ++w) {
            vert_of_point[i] = t + w;
            place_points(i + 1, open_top, std::max(open_bot, w + 1));
        }
        vert_of_point[i] = -1;
    }

    void choose_genera(int open_top) {
        int V = t + b;
        std::vector<int> M(V, 0);
        for (int i = 0; i < n; ++i) M[vert_of_point[i]] += sig[i];
        genus.assign(V, 0);
        std::function<void(int, int)> rec = [&](int v, int used) {
            if (v == V) {
                start_edges(M);
                return;
            }
            int lo = 0, hi = g - used;
            if (v < t) {
                int need = M[v] + 2;  // 2g_v - 2 >= M_v
                lo = need <= 0 ? 0 : (need + 1) / 2;
                // identical empty top vertices: nonincreasing genera
                if (v >= open_top && v > 0 && v - 1 >= open_top) hi = std::min(hi, genus[v - 1]);
            } else {
                if (M[v] < 0) return;
                hi = std::min(hi, M[v] / 2);
            }
            for (int gv = lo; gv <= hi; ++gv) {
                genus[v] = gv;
                rec(v + 1, used + gv);
            }
        };
        rec(0, 0);
    }

    void start_edges(const std::vector<int>& M) {
        int V = t + b;
        budget.assign(V, 0);
        deg.assign(V, 0);
        int sum_s = 0, sum_r = 0;
        for (int v = 0; v < t; ++v) {
            budget[v] = 2 * genus[v] - 2 - M[v];
            if (budget[v] < 0) return;
            sum_s += budget[v];
        }
        for (int w = t; w < V; ++w) {
            budget[w] = M[w] - 2 * genus[w] + 2;
            if (budget[w] < 2) return;
            sum_r += budget[w];
        }
        int G = std::accumulate(genus.begin(), genus.end(), 0);
        int E = g - 1 - G + V;
        if (E < std::max(t, b) || sum_r - sum_s != 2 * E) return;
        edges.clear();
        edge_rec(0, 1 << 30);
    }

    void edge_rec(int cell, int maxk) {
        int v = cell / b, w = t + cell % b;
        if (cell == t * b) {
            for (int x = t; x < t + b; ++x)
                if (budget[x] != 0 || deg[x] == 0) return;
            emit();
            return;
        }
        // add another edge in this cell
        for (int k = std::min({maxk, budget[v] + 1, budget[w] - 1}); k >= 1; --k) {
            budget[v] -= k - 1;
            budget[w] -= k + 1;
            deg[v]++;
            deg[w]++;
            edges.push_back({v, w, k});
            edge_rec(cell, k);
            edges.pop_back();
            deg[v]--;
            deg[w]--;
            budget[v] += k - 1;
            budget[w] += k + 1;
        }
        // close the cell
        if (cell % b == b - 1 && (budget[v] != 0 || deg[v] == 0)) return;
        edge_rec(cell + 1, 1 << 30);
    }

    void emit() {
        if (!noiso) {
            emit_edges(edges);
            return;
        }
        // bottom half-edge slots are ordered (by vertex, then decreasing prong);
        // every distinct sequence of top endpoints is a separate raw graph
        auto es = edges;
        std::sort(es.begin(), es.end(), [](const auto& x, const auto& y) {
            return std::make_tuple(x[1], -x[2], x[0]) < std::make_tuple(y[1], -y[2], y[0]);
        });
        std::function<void(size_t)> rec = [&](size_t start) {
            if (start == es.size()) {
                emit_edges(es);
                return;
            }
            size_t end = start;
            while (end < es.size() && es[end][1] == es[start][1] && es[end][2] == es[start][2]) ++end;
            std::vector<int> tops;
            for (size_t i = start; i < end; ++i) tops.push_back(es[i][0]);
            std::sort(tops.begin(), tops.end());
            do {
                for (size_t i = start; i < end; ++i) es[i][0] = tops[i - start];
                rec(end);
            } while (std::next_permutation(tops.begin(), tops.end()));
        };
        rec(0);
    }

    void emit_edges(const std::vector<std::array<int, 3>>& edge_list) {
        int V = t + b;
        std::vector<std::vector<int>> legs(V);
        std::map<int, int> orders;
        for (int i = 0; i < n; ++i) {
            legs[vert_of_point[i]].push_back(i + 1);
            orders[i + 1] = sig[i];
        }
        std::vector<Edge> es;
        int next = n + 1;
        for (auto& [v, w, k] : edge_list) {
            legs[v].push_back(next);
            orders[next] = k - 1;
            legs[w].push_back(next + 1);
            orders[next + 1] = -k - 1;
            es.push_back({next, next + 1});
            next += 2;
        }
        std::vector<int> levels(V, 0);
        for (int w = t; w < V; ++w) levels[w] = -1;
        LevelGraph G(genus, legs, es, orders, levels);
        if (!G.is_stable() || !G.is_connected()) return;
        std::map<int, int> lab;
        for (int i = 1; i <= n; ++i) lab[i] = i - 1;
        auto key = canonical_key(G, lab);
        if (noiso) {
            if (!G.is_legal() || !seen_raw.insert(G.str()).second) return;
            out.emplace_back(std::move(key), std::move(G));
            return;
        }
        if (seen.count(key)) return;
        if (!G.is_legal()) return;
        seen.insert(key);
        out.emplace_back(std::move(key), std::move(G));
    }
};

struct AltCache {
    std::mutex mu;
    std::map<std::vector<int>, std::vector<LevelGraph>> m;
};

AltCache& alt_cache() {
    static AltCache c;
    return c;
}

}  // namespace

std::vector<LevelGraph> bic_alt(const std::vector<int>& sig) {
    {
        std::lock_guard<std::mutex> lock(alt_cache().mu);
        auto it = alt_cache().m.find(sig);
        if (it != alt_cache().m.end()) return it->second;
    }
    Signature check(sig);
    Generator gen;
    gen.sig = sig;
    gen.run();
    std::sort(gen.out.begin(), gen.out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<LevelGraph> res;
    for (auto& [k, G] : gen.out) res.push_back(G);
    std::lock_guard<std::mutex> lock(alt_cache().mu);
    alt_cache().m[sig] = res;
    return res;
}

std::vector<LevelGraph> bic_alt_noiso(const std::vector<int>& sig) {
    Signature check(sig);
    Generator gen;
    gen.sig = sig;
    gen.noiso = true;
    gen.run();
    std::stable_sort(gen.out.begin(), gen.out.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<LevelGraph> res;
    for (auto& [k, G] : gen.out) res.push_back(G);
    return res;
}

std::vector<int> bic_sort_key(const EmbeddedLevelGraph& G) {
    std::vector<int> k;
    const auto& LG = G.LG;
    k.push_back(LG.num_vertices());
    for (int l = 0; l < LG.num_levels(); ++l) {
        std::vector<int> gs;
        for (int v : LG.vertices_on_level(l)) gs.push_back(LG.genus(v));
        std::sort(gs.begin(), gs.end());
        k.push_back(static_cast<int>(gs.size()));
        k.insert(k.end(), gs.begin(), gs.end());
    }
    std::vector<int> pr;
    for (auto& e : LG.edges()) pr.push_back(LG.prong(e));
    std::sort(pr.begin(), pr.end());
    k.push_back(static_cast<int>(pr.size()));
    k.insert(k.end(), pr.begin(), pr.end());
    k.insert(k.end(), G.key().begin(), G.key().end());
    return k;
}

std::vector<ELGPtr> generate_bics(StratumPtr X) {
    int nc = X->num_components();
    // per component: options (graph, level of smooth factor or 2 for a BIC)
    struct Factor {
        LevelGraph G;
        int smooth_level;  // 0 or -1 for a smooth factor, 1 for a BIC
    };
    std::vector<std::vector<Factor>> options(nc);
    for (int c = 0; c < nc; ++c) {
        const auto& s = X->sig_list()[c];
        for (auto& G : bic_alt(s.orders())) options[c].push_back({G, 1});
        if (nc > 1) {
            std::vector<int> legs(s.n());
            std::map<int, int> orders;
            for (int i = 0; i < s.n(); ++i) {
                legs[i] = i + 1;
                orders[i + 1] = s[i];
            }
            options[c].push_back({LevelGraph({s.g()}, {legs}, {}, orders, {0}), 0});
            options[c].push_back({LevelGraph({s.g()}, {legs}, {}, orders, {0}), -1});
        }
    }
    std::vector<ELGPtr> found;
    std::set<std::vector<int>> seen;
    std::vector<int> choice(nc, 0);
    std::function<void(int)> rec = [&](int c) {
        if (c == nc) {
            bool has_top = false, has_bot = false;
            std::vector<int> genera, levels;
            std::vector<std::vector<int>> legs;
            std::vector<Edge> edges;
            std::map<int, int> orders;
            std::map<int, PointRef> dmp;
            int next = 1;
            for (int k = 0; k < nc; ++k) {
                const auto& f = options[k][choice[k]];
                const auto& G = f.G;
                int n_k = X->sig_list()[k].n();
                std::map<int, int> ren;
                for (int v = 0; v < G.num_vertices(); ++v) {
                    std::vector<int> lv;
                    for (int l : G.legs_of(v)) {
                        ren[l] = next;
                        orders[next] = G.order(l);
                        if (l <= n_k) dmp[next] = {k, l - 1};
                        lv.push_back(next++);
                    }
                    legs.push_back(lv);
                    genera.push_back(G.genus(v));
                    int lvl = f.smooth_level == 1 ? G.level_of(v) : f.smooth_level;
                    levels.push_back(lvl);
                    (lvl == 0 ? has_top : has_bot) = true;
                }
                for (auto& e : G.edges()) edges.push_back({ren[e.a], ren[e.b]});
            }
            if (!has_top || !has_bot) return;
            auto elg = make_elg(X, LevelGraph(genera, legs, edges, orders, levels), dmp);
            if (seen.count(elg->key())) return;
            if (!elg->is_legal()) return;
            seen.insert(elg->key());
            found.push_back(elg);
            return;
        }
        for (size_t i = 0; i < options[c].size(); ++i) {
            choice[c] = static_cast<int>(i);
            rec(c + 1);
        }
    };
    rec(0);
    std::vector<std::pair<std::vector<int>, ELGPtr>> keyed;
    for (auto& e : found) keyed.emplace_back(bic_sort_key(*e), e);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<ELGPtr> res;
    for (auto& [k, e] : keyed) res.push_back(e);
    return res;
}

namespace {

BicData& bic_data(StratumPtr X) {
    if (!X->bic_data) {
        auto d = std::make_shared<BicData>();
        d->bics = generate_bics(X);
        for (size_t i = 0; i < d->bics.size(); ++i) d->index[d->bics[i]->key()] = static_cast<int>(i);
        d->smooth = smooth_graph(X);
        X->bic_data = d;
    }
    return *X->bic_data;
}

}  // namespace

const std::vector<ELGPtr>& bics(StratumPtr X) { return bic_data(X).bics; }

const ELGPtr& smooth_lg(StratumPtr X) { return bic_data(X).smooth; }

int bic_index(StratumPtr X, const EmbeddedLevelGraph& G) {
    if (G.X != X) throw InternalInconsistency("graph embedded in another stratum");
    auto& d = bic_data(X);
    auto it = d.index.find(G.key());
    return it == d.index.end() ? -1 : it->second;
}

}  // namespace strata
