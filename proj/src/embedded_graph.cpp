#include "strata/embedded_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace strata {

namespace {

struct UF {
    std::vector<int> p;
    explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

struct ColouredGraph {
    const LevelGraph* G;
    const std::map<int, int>* lab;
    std::vector<std::vector<int>> inv;
    std::vector<int> colour;
    int num_colours = 0;
    // per vertex: (neighbour, my order, their order) for each incident edge end
    std::vector<std::vector<std::array<int, 3>>> inc;

    ColouredGraph(const LevelGraph& g, const std::map<int, int>& l) : G(&g), lab(&l) {
        int n = g.num_vertices();
        inv.resize(n);
        inc.resize(n);
        std::set<int> edge_legs;
        for (auto& e : g.edges()) {
            edge_legs.insert(e.a);
            edge_legs.insert(e.b);
            int u = g.vertex(e.a), w = g.vertex(e.b);
            inc[u].push_back({w, g.order(e.a), g.order(e.b)});
            inc[w].push_back({u, g.order(e.b), g.order(e.a)});
        }
        for (int v = 0; v < n; ++v) {
            std::vector<int> marks, eord;
            for (int leg : g.legs_of(v)) {
                if (edge_legs.count(leg))
                    eord.push_back(g.order(leg));
                else
                    marks.push_back(l.at(leg));
            }
            std::sort(marks.begin(), marks.end());
            std::sort(eord.begin(), eord.end());
            auto& x = inv[v];
            x.push_back(g.level_of(v));
            x.push_back(g.genus(v));
            x.push_back(static_cast<int>(marks.size()));
            x.insert(x.end(), marks.begin(), marks.end());
            x.push_back(static_cast<int>(eord.size()));
            x.insert(x.end(), eord.begin(), eord.end());
        }
        assign(inv);
        for (int round = 0; round < n; ++round) {
            std::vector<std::vector<int>> sig(n);
            for (int v = 0; v < n; ++v) {
                std::vector<std::array<int, 3>> nb;
                for (auto& t : inc[v]) nb.push_back({colour[t[0]], t[1], t[2]});
                std::sort(nb.begin(), nb.end());
                sig[v].push_back(colour[v]);
                for (auto& t : nb) sig[v].insert(sig[v].end(), t.begin(), t.end());
            }
            int before = num_colours;
            assign(sig);
            if (num_colours == before) break;
        }
    }

    void assign(const std::vector<std::vector<int>>& sig) {
        std::vector<std::vector<int>> d = sig;
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        colour.assign(sig.size(), 0);
        for (size_t v = 0; v < sig.size(); ++v)
            colour[v] = static_cast<int>(std::lower_bound(d.begin(), d.end(), sig[v]) - d.begin());
        num_colours = static_cast<int>(d.size());
    }

    std::vector<int> serialize(const std::vector<int>& order) const {
        int n = G->num_vertices();
        std::vector<int> pos(n);
        for (int i = 0; i < n; ++i) pos[order[i]] = i;
        std::vector<int> key;
        key.push_back(n);
        for (int v : order) key.insert(key.end(), inv[v].begin(), inv[v].end());
        std::vector<std::array<int, 4>> es;
        for (auto& e : G->edges()) {
            int pu = pos[G->vertex(e.a)], pw = pos[G->vertex(e.b)];
            if (G->is_horizontal(e) && pu > pw) std::swap(pu, pw);
            es.push_back({pu, pw, G->order(e.a), G->order(e.b)});
        }
        std::sort(es.begin(), es.end());
        key.push_back(static_cast<int>(es.size()));
        for (auto& t : es) key.insert(key.end(), t.begin(), t.end());
        return key;
    }
};

}  // namespace

std::vector<int> canonical_key(const LevelGraph& G, const std::map<int, int>& marked_label) {
    ColouredGraph cg(G, marked_label);
    int n = G.num_vertices();
    std::vector<std::vector<int>> classes(cg.num_colours);
    for (int v = 0; v < n; ++v) classes[cg.colour[v]].push_back(v);
    std::vector<int> best;
    std::vector<int> order;
    std::function<void(size_t)> rec = [&](size_t c) {
        if (c == classes.size()) {
            auto k = cg.serialize(order);
            if (best.empty() || k < best) best = std::move(k);
            return;
        }
        auto cls = classes[c];
        do {
            size_t base = order.size();
            order.insert(order.end(), cls.begin(), cls.end());
            rec(c + 1);
            order.resize(base);
        } while (std::next_permutation(cls.begin(), cls.end()));
    };
    rec(0);
    return best;
}

void for_each_isomorphism(const LevelGraph& G1, const std::map<int, int>& lab1, const LevelGraph& G2,
                          const std::map<int, int>& lab2,
                          const std::function<bool(const Isomorphism&)>& cb) {
    int n = G1.num_vertices();
    if (n != G2.num_vertices() || G1.edges().size() != G2.edges().size()) return;
    ColouredGraph c1(G1, lab1), c2(G2, lab2);
    // colour ids are only comparable when the invariant multisets agree
    {
        std::vector<std::vector<int>> a = c1.inv, b = c2.inv;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return;
        if (c1.num_colours != c2.num_colours) return;
    }
    // multiset of (order_u, order_w) between ordered vertex pairs
    auto pair_edges = [](const LevelGraph& G) {
        std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> m;
        for (auto& e : G.edges()) {
            int u = G.vertex(e.a), w = G.vertex(e.b);
            m[{u, w}].push_back({G.order(e.a), G.order(e.b)});
            if (u != w) m[{w, u}].push_back({G.order(e.b), G.order(e.a)});
        }
        for (auto& [k, v] : m) std::sort(v.begin(), v.end());
        return m;
    };
    auto pe1 = pair_edges(G1), pe2 = pair_edges(G2);
    auto get = [](const auto& m, int u, int w) {
        static const std::vector<std::pair<int, int>> empty;
        auto it = m.find({u, w});
        return it == m.end() ? empty : it->second;
    };
    std::vector<int> vorder(n);
    std::iota(vorder.begin(), vorder.end(), 0);
    std::vector<int> csize(c1.num_colours, 0);
    for (int v = 0; v < n; ++v) csize[c1.colour[v]]++;
    std::stable_sort(vorder.begin(), vorder.end(),
                     [&](int a, int b) { return csize[c1.colour[a]] < csize[c1.colour[b]]; });

    std::vector<int> phi(n, -1);
    std::vector<bool> used(n, false);
    bool stop = false;

    auto edge_stage = [&]() {
        // group G1 edges by image vertex pair and orders; match against G2 edges
        struct Group {
            std::vector<int> src, dst;
            bool loop = false;
        };
        std::map<std::array<int, 4>, Group> groups;
        auto keyof = [](const LevelGraph& G, const Edge& e, int u, int w) {
            std::array<int, 4> k{u, w, G.order(e.a), G.order(e.b)};
            if (G.is_horizontal(e) && u > w) k = {w, u, G.order(e.b), G.order(e.a)};
            return k;
        };
        for (size_t k = 0; k < G1.edges().size(); ++k) {
            auto& e = G1.edges()[k];
            int u = phi[G1.vertex(e.a)], w = phi[G1.vertex(e.b)];
            auto& gr = groups[keyof(G1, e, u, w)];
            gr.src.push_back(static_cast<int>(k));
            gr.loop = (u == w);
        }
        for (size_t k = 0; k < G2.edges().size(); ++k) {
            auto& e = G2.edges()[k];
            auto it = groups.find(keyof(G2, e, G2.vertex(e.a), G2.vertex(e.b)));
            if (it == groups.end()) return;
            it->second.dst.push_back(static_cast<int>(k));
        }
        std::vector<Group*> gl;
        for (auto& [k, g] : groups) {
            if (g.src.size() != g.dst.size()) return;
            gl.push_back(&g);
        }
        Isomorphism iso;
        iso.vertex_map = phi;
        std::map<int, int> label_leg2;
        for (auto& [leg, l] : lab2) label_leg2[l] = leg;
        for (int leg : G1.marked_legs()) iso.leg_map[leg] = label_leg2.at(lab1.at(leg));
        std::function<void(size_t)> rec = [&](size_t gi) {
            if (stop) return;
            if (gi == gl.size()) {
                if (!cb(iso)) stop = true;
                return;
            }
            auto& g = *gl[gi];
            std::vector<int> perm = g.dst;
            std::sort(perm.begin(), perm.end());
            do {
                size_t m = g.src.size();
                int nflip = g.loop ? (1 << m) : 1;
                for (int mask = 0; mask < nflip && !stop; ++mask) {
                    for (size_t j = 0; j < m; ++j) {
                        auto& e1 = G1.edges()[g.src[j]];
                        auto& e2 = G2.edges()[perm[j]];
                        bool flip = false;
                        if (g.loop)
                            flip = (mask >> j) & 1;
                        else if (G1.is_horizontal(e1))
                            flip = phi[G1.vertex(e1.a)] != G2.vertex(e2.a);
                        iso.leg_map[e1.a] = flip ? e2.b : e2.a;
                        iso.leg_map[e1.b] = flip ? e2.a : e2.b;
                    }
                    rec(gi + 1);
                }
            } while (!stop && std::next_permutation(perm.begin(), perm.end()));
        };
        rec(0);
    };

    std::function<void(int)> vrec = [&](int i) {
        if (stop) return;
        if (i == n) {
            edge_stage();
            return;
        }
        int v = vorder[i];
        for (int w = 0; w < n && !stop; ++w) {
            if (used[w] || c2.colour[w] != c1.colour[v] || c1.inv[v] != c2.inv[w]) continue;
            bool ok = get(pe1, v, v) == get(pe2, w, w);
            for (int j = 0; j < i && ok; ++j) {
                int u = vorder[j];
                ok = get(pe1, v, u) == get(pe2, w, phi[u]);
            }
            if (!ok) continue;
            phi[v] = w;
            used[w] = true;
            vrec(i + 1);
            used[w] = false;
            phi[v] = -1;
        }
    };
    vrec(0);
}

std::map<PointRef, int> LevelStratum::inverse() const {
    std::map<PointRef, int> m;
    for (auto& [l, p] : leg_dict) m[p] = l;
    return m;
}

EmbeddedLevelGraph::EmbeddedLevelGraph(StratumPtr X_, LevelGraph LG_, std::map<int, PointRef> dmp_)
    : X(X_), LG(std::move(LG_)), dmp(std::move(dmp_)) {
    auto marked = LG.marked_legs();
    if (marked.size() != dmp.size() || static_cast<int>(dmp.size()) != X->n())
        throw IllegalGraph("marked legs do not match the points of the stratum");
    for (int l : marked) {
        auto it = dmp.find(l);
        if (it == dmp.end()) throw IllegalGraph("unmarked leg " + std::to_string(l));
        if (LG.order(l) != X->order(it->second)) throw IllegalGraph("order mismatch at leg");
        if (!dmp_inv.emplace(it->second, l).second) throw IllegalGraph("point marked twice");
    }
}

ELGPtr make_elg(StratumPtr X, LevelGraph LG, std::map<int, PointRef> dmp) {
    return std::make_shared<EmbeddedLevelGraph>(X, std::move(LG), std::move(dmp));
}

ELGPtr smooth_graph(StratumPtr X) {
    std::vector<int> genera, levels;
    std::vector<std::vector<int>> legs;
    std::map<int, int> orders;
    std::map<int, PointRef> dmp;
    int next = 1;
    for (int c = 0; c < X->num_components(); ++c) {
        auto& s = X->sig_list()[c];
        genera.push_back(s.g());
        levels.push_back(0);
        legs.emplace_back();
        for (int i = 0; i < s.n(); ++i) {
            legs.back().push_back(next);
            orders[next] = s[i];
            dmp[next] = {c, i};
            ++next;
        }
    }
    return make_elg(X, LevelGraph(genera, legs, {}, orders, levels), dmp);
}

std::map<int, int> EmbeddedLevelGraph::labels() const {
    std::map<int, int> lab;
    for (auto& [l, p] : dmp) lab[l] = p.comp * 10000 + p.idx;
    return lab;
}

ResidueLegs EmbeddedLevelGraph::residue_legs() const {
    ResidueLegs r;
    for (auto& rc : X->res_cond()) {
        std::vector<int> ls;
        for (auto p : rc) ls.push_back(dmp_inv.at(p));
        r.rc_legs.push_back(ls);
    }
    for (auto p : X->free_poles()) r.free_legs.push_back(dmp_inv.at(p));
    return r;
}

LevelStratum extract_level(const LevelGraph& G, const std::map<int, PointRef>& dmp, StratumPtr X,
                           int rel) {
    auto verts = G.vertices_on_level(rel);
    if (verts.empty()) throw InternalInconsistency("empty level");
    LevelStratum L;
    std::vector<std::vector<int>> sigs;
    for (size_t c = 0; c < verts.size(); ++c) {
        std::vector<int> sig;
        int v = verts[c];
        for (size_t i = 0; i < G.legs_of(v).size(); ++i) {
            int leg = G.legs_of(v)[i];
            sig.push_back(G.order(leg));
            L.leg_dict[leg] = {static_cast<int>(c), static_cast<int>(i)};
        }
        sigs.push_back(sig);
    }
    int nv = G.num_vertices();
    int nrc = static_cast<int>(X->res_cond().size());
    int sink = nv + nrc;
    UF uf(nv + nrc + 1);
    int lvl = -rel;
    auto above = [&](int v) { return G.level_of(v) > lvl; };
    for (auto& e : G.edges()) {
        int a = G.vertex(e.a), b = G.vertex(e.b);
        if (above(a) && above(b)) uf.unite(a, b);
    }
    std::map<PointRef, int> inv;
    for (auto& [l, p] : dmp) inv[p] = l;
    std::map<int, int> leg_rc;  // marked leg -> rc index
    for (int k = 0; k < nrc; ++k)
        for (auto p : X->res_cond()[k]) {
            int leg = inv.at(p);
            leg_rc[leg] = k;
            if (above(G.vertex(leg))) uf.unite(G.vertex(leg), nv + k);
        }
    for (auto p : X->free_poles()) {
        int leg = inv.at(p);
        if (above(G.vertex(leg))) uf.unite(G.vertex(leg), sink);
    }
    std::map<int, int> lower_leg_upper_vertex;
    for (auto& e : G.edges())
        if (!G.is_horizontal(e)) lower_leg_upper_vertex[e.b] = G.vertex(e.a);
    std::map<int, std::vector<PointRef>> groups;
    for (int v : verts)
        for (int leg : G.legs_of(v)) {
            int o = G.order(leg);
            if (o >= -1) continue;
            int root;
            auto it = lower_leg_upper_vertex.find(leg);
            if (it != lower_leg_upper_vertex.end()) {
                if (!above(it->second)) continue;
                root = uf.find(it->second);
            } else if (dmp.count(leg)) {
                auto jt = leg_rc.find(leg);
                root = jt != leg_rc.end() ? uf.find(nv + jt->second) : uf.find(sink);
            } else {
                continue;
            }
            if (root == uf.find(sink)) continue;
            groups[root].push_back(L.leg_dict.at(leg));
        }
    std::vector<ResidueCondition> rcs;
    for (auto& [r, ps] : groups) rcs.push_back(ps);
    L.S = make_stratum(sigs, rcs);
    return L;
}

LevelStratum EmbeddedLevelGraph::level(int rel) const { return extract_level(LG, dmp, X, rel); }

const LevelStratum& EmbeddedLevelGraph::top() const {
    if (!top_) top_ = level(0);
    return *top_;
}

const LevelStratum& EmbeddedLevelGraph::bot() const {
    if (!bot_) bot_ = level(LG.num_levels() - 1);
    return *bot_;
}

bool EmbeddedLevelGraph::is_legal() const {
    if (!LG.is_legal(residue_legs())) return false;
    for (int l = 0; l < LG.num_levels(); ++l)
        if (level(l).S->is_empty()) return false;
    return true;
}

const std::vector<int>& EmbeddedLevelGraph::key() const {
    if (!key_) {
        key_ = canonical_key(LG, labels());
        hash_ = VecHash{}(*key_);
    }
    return *key_;
}

std::size_t EmbeddedLevelGraph::key_hash() const {
    key();
    return hash_;
}

void EmbeddedLevelGraph::isomorphisms(const EmbeddedLevelGraph& other,
                                      const std::function<bool(const Isomorphism&)>& cb) const {
    if (X != other.X) return;
    for_each_isomorphism(LG, labels(), other.LG, other.labels(), cb);
}

bool EmbeddedLevelGraph::is_isomorphic(const EmbeddedLevelGraph& other) const {
    return X == other.X && key() == other.key();
}

std::vector<Isomorphism> EmbeddedLevelGraph::automorphism_list() const {
    std::vector<Isomorphism> out;
    isomorphisms(*this, [&](const Isomorphism& i) {
        out.push_back(i);
        return true;
    });
    return out;
}

int EmbeddedLevelGraph::automorphisms() const {
    if (aut_ < 0) {
        int c = 0;
        isomorphisms(*this, [&](const Isomorphism&) {
            ++c;
            return true;
        });
        aut_ = c;
    }
    return aut_;
}

ELGPtr EmbeddedLevelGraph::squish_vertical(int i) const {
    return make_elg(X, LG.squish_vertical(i), dmp);
}

ELGPtr EmbeddedLevelGraph::delta(int i) const { return make_elg(X, LG.delta(i), dmp); }

namespace {

std::string and_list(const std::vector<int>& xs) {
    std::ostringstream os;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) os << (i + 1 == xs.size() ? " and " : ", ");
        os << xs[i];
    }
    return os.str();
}

}  // namespace

std::string EmbeddedLevelGraph::explain() const {
    std::ostringstream os;
    os << "LevelGraph embedded into stratum " << X->str() << " with:\n";
    int L = LG.num_levels();
    for (int l = 0; l < L; ++l) {
        os << "On level " << l << ":\n";
        for (int v : LG.vertices_on_level(l))
            os << "* A vertex (number " << v << ") of genus " << LG.genus(v) << "\n";
    }
    std::set<int> mlevels;
    for (auto& [leg, p] : dmp) mlevels.insert(LG.rel_level(LG.vertex(leg)));
    std::vector<int> ml(mlevels.begin(), mlevels.end());
    os << "The marked points are on level" << (ml.size() > 1 ? "s " : " ") << and_list(ml) << ".\n";
    os << "More precisely, we have:\n";
    for (auto& [p, leg] : dmp_inv) {
        int v = LG.vertex(leg);
        os << "* Marked point " << to_string(p) << " of order " << X->order(p) << " on vertex " << v
           << " on level " << LG.rel_level(v) << "\n";
    }
    int ne = static_cast<int>(LG.edges().size());
    os << "Finally, we have " << (ne == 1 ? std::string("one edge") : std::to_string(ne) + " edges")
       << ". More precisely:\n";
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (auto& e : LG.edges()) groups[{LG.vertex(e.a), LG.vertex(e.b)}].push_back(LG.prong(e));
    for (auto& [uv, prongs] : groups) {
        auto [u, w] = uv;
        os << "* " << (prongs.size() == 1 ? std::string("one edge") : std::to_string(prongs.size()) + " edges")
           << " between vertex " << u << " (on level " << LG.rel_level(u) << ") and vertex " << w
           << " (on level " << LG.rel_level(w) << ") with prong" << (prongs.size() > 1 ? "s " : " ")
           << and_list(prongs) << ".\n";
    }
    return os.str();
}

std::string EmbeddedLevelGraph::str() const {
    std::ostringstream os;
    os << "EmbeddedLevelGraph(LG=" << LG.str() << ",dmp={";
    bool first = true;
    for (auto& [l, p] : dmp) {
        os << (first ? "" : ", ") << l << ": " << to_string(p);
        first = false;
    }
    os << "},dlevels={";
    for (int l = 0; l < LG.num_levels(); ++l) os << (l ? ", " : "") << -l << ": " << -l;
    os << "})";
    return os.str();
}

}  // namespace strata
