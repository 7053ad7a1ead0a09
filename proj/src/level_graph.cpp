#include "strata/level_graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace strata {

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

LevelGraph::LevelGraph(std::vector<int> genera, std::vector<std::vector<int>> legs,
                       std::vector<Edge> edges, std::map<int, int> orders, std::vector<int> levels)
    : genera_(std::move(genera)),
      legs_(std::move(legs)),
      edges_(std::move(edges)),
      orders_(std::move(orders)),
      levels_(std::move(levels)) {
    if (legs_.size() != genera_.size() || levels_.size() != genera_.size())
        throw IllegalGraph("genera, legs and levels differ in length");
    for (int g : genera_)
        if (g < 0) throw IllegalGraph("negative genus");
    // normalize levels to 0, -1, ..., -L
    std::vector<int> distinct = levels_;
    std::sort(distinct.rbegin(), distinct.rend());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto& l : levels_)
        l = -static_cast<int>(std::find(distinct.begin(), distinct.end(), l) - distinct.begin());
    index_legs();
    std::set<int> used;
    for (auto& e : edges_) {
        if (!has_leg(e.a) || !has_leg(e.b)) throw IllegalGraph("edge with unknown leg");
        if (!used.insert(e.a).second || !used.insert(e.b).second || e.a == e.b)
            throw IllegalGraph("leg on two edges");
        int la = levels_[vertex(e.a)], lb = levels_[vertex(e.b)];
        if (la == lb) {
            if (order(e.a) != -1 || order(e.b) != -1)
                throw IllegalGraph("horizontal edge needs simple poles");
            if (e.a > e.b) std::swap(e.a, e.b);
        } else {
            if (la < lb) std::swap(e.a, e.b);
            if (order(e.a) + order(e.b) != -2 || order(e.a) < 0)
                throw IllegalGraph("vertical edge orders must be k and -k-2 with k >= 0");
        }
    }
}

void LevelGraph::index_legs() {
    leg_vertex_.clear();
    for (int v = 0; v < num_vertices(); ++v)
        for (int l : legs_[v]) {
            if (!leg_vertex_.emplace(l, v).second) throw IllegalGraph("duplicate leg");
            if (!orders_.count(l)) throw IllegalGraph("leg without order");
        }
    if (orders_.size() != leg_vertex_.size()) throw IllegalGraph("order for unknown leg");
}

int LevelGraph::num_levels() const {
    int m = 0;
    for (int l : levels_) m = std::min(m, l);
    return num_vertices() ? 1 - m : 0;
}

int LevelGraph::total_genus() const {
    int h1 = static_cast<int>(edges_.size()) - num_vertices() + 1;
    return std::accumulate(genera_.begin(), genera_.end(), 0) + h1;
}

std::vector<int> LevelGraph::all_legs() const {
    std::vector<int> out;
    for (auto& [l, v] : leg_vertex_) out.push_back(l);
    return out;
}

bool LevelGraph::is_marked(int leg) const {
    for (auto& e : edges_)
        if (e.a == leg || e.b == leg) return false;
    return has_leg(leg);
}

std::vector<int> LevelGraph::marked_legs() const {
    std::set<int> on_edge;
    for (auto& e : edges_) {
        on_edge.insert(e.a);
        on_edge.insert(e.b);
    }
    std::vector<int> out;
    for (auto& [l, v] : leg_vertex_)
        if (!on_edge.count(l)) out.push_back(l);
    return out;
}

std::vector<int> LevelGraph::vertices_on_level(int rel) const {
    std::vector<int> out;
    for (int v = 0; v < num_vertices(); ++v)
        if (-levels_[v] == rel) out.push_back(v);
    return out;
}

bool LevelGraph::is_horizontal(const Edge& e) const {
    return levels_[vertex(e.a)] == levels_[vertex(e.b)];
}

std::vector<Edge> LevelGraph::horizontal_edges() const {
    std::vector<Edge> out;
    for (auto& e : edges_)
        if (is_horizontal(e)) out.push_back(e);
    return out;
}

std::vector<Edge> LevelGraph::vertical_edges() const {
    std::vector<Edge> out;
    for (auto& e : edges_)
        if (!is_horizontal(e)) out.push_back(e);
    return out;
}

bool LevelGraph::is_bic() const { return num_levels() == 2 && horizontal_edges().empty(); }

int LevelGraph::codim() const {
    return num_levels() - 1 + static_cast<int>(horizontal_edges().size());
}

int LevelGraph::prong(const Edge& e) const {
    if (is_horizontal(e)) return 0;
    return order(e.a) + 1;
}

std::vector<Edge> LevelGraph::edges_crossing(int i) const {
    std::vector<Edge> out;
    for (auto& e : edges_) {
        int up = rel_level(vertex(e.a)), lo = rel_level(vertex(e.b));
        if (up <= i && lo >= i + 1) out.push_back(e);
    }
    return out;
}

int LevelGraph::ell_crossing(int i) const {
    int l = 1;
    for (auto& e : edges_crossing(i)) l = std::lcm(l, prong(e));
    return l;
}

int LevelGraph::ell() const {
    int l = 1;
    for (auto& e : vertical_edges()) l = std::lcm(l, prong(e));
    return l;
}

LevelGraph LevelGraph::squish_horizontal(const Edge& e) const {
    if (std::find(edges_.begin(), edges_.end(), e) == edges_.end() || !is_horizontal(e))
        throw InternalInconsistency("not a horizontal edge");
    int va = vertex(e.a), vb = vertex(e.b);
    std::vector<int> genera;
    std::vector<std::vector<int>> legs;
    std::vector<int> levels;
    std::map<int, int> orders = orders_;
    orders.erase(e.a);
    orders.erase(e.b);
    std::vector<Edge> edges;
    for (auto& f : edges_)
        if (!(f == e)) edges.push_back(f);
    int keep = std::min(va, vb), drop = std::max(va, vb);
    for (int v = 0; v < num_vertices(); ++v) {
        if (v == drop && va != vb) continue;
        std::vector<int> lv;
        auto add = [&](int w) {
            for (int l : legs_[w])
                if (l != e.a && l != e.b) lv.push_back(l);
        };
        add(v);
        int g = genera_[v];
        if (v == keep) {
            if (va == vb)
                g += 1;
            else {
                add(drop);
                g += genera_[drop];
            }
        }
        genera.push_back(g);
        legs.push_back(lv);
        levels.push_back(levels_[v]);
    }
    return LevelGraph(genera, legs, edges, orders, levels);
}

LevelGraph LevelGraph::squish_vertical(int i) const {
    int L = num_levels();
    if (i < 0 || i + 1 >= L) throw InternalInconsistency("no crossing to squish");
    int n = num_vertices();
    UnionFind uf(n);
    std::set<Edge> contracted;
    for (auto& e : edges_) {
        int up = rel_level(vertex(e.a)), lo = rel_level(vertex(e.b));
        if (up == i && lo == i + 1) {
            contracted.insert(e);
            uf.unite(vertex(e.a), vertex(e.b));
        }
    }
    std::map<int, int> orders = orders_;
    std::vector<Edge> edges;
    for (auto& e : edges_) {
        if (contracted.count(e)) {
            orders.erase(e.a);
            orders.erase(e.b);
        } else {
            edges.push_back(e);
        }
    }
    // group vertices; a group is placed at the position of its first vertex
    std::map<int, int> root_pos;
    std::vector<int> genera, levels;
    std::vector<std::vector<int>> legs;
    std::map<int, int> root_nv, root_ne;
    for (int v = 0; v < n; ++v) root_nv[uf.find(v)]++;
    for (auto& e : contracted) root_ne[uf.find(vertex(e.a))]++;
    for (int v = 0; v < n; ++v) {
        int r = uf.find(v);
        int rl = rel_level(v);
        int newlevel = rl <= i ? -rl : -(rl - 1);
        auto it = root_pos.find(r);
        if (it == root_pos.end()) {
            root_pos[r] = static_cast<int>(genera.size());
            genera.push_back(root_ne[r] - root_nv[r] + 1);
            legs.emplace_back();
            levels.push_back(newlevel);
            it = root_pos.find(r);
        }
        genera[it->second] += genera_[v];
        for (int l : legs_[v])
            if (orders.count(l)) legs[it->second].push_back(l);
    }
    return LevelGraph(genera, legs, edges, orders, levels);
}

LevelGraph LevelGraph::delta(int i) const {
    int L = num_levels();
    if (i < 1 || i >= L) throw InternalInconsistency("delta index out of range");
    LevelGraph g = *this;
    for (int j = L - 2; j >= 0; --j)
        if (j != i - 1) g = g.squish_vertical(j);
    return g;
}

LevelGraph LevelGraph::renumbered(std::map<int, int>* leg_map) const {
    std::map<int, int> m;
    int next = 1;
    std::vector<std::vector<int>> legs;
    for (auto& lv : legs_) {
        std::vector<int> nl;
        for (int l : lv) {
            m[l] = next;
            nl.push_back(next++);
        }
        legs.push_back(nl);
    }
    std::vector<Edge> edges;
    for (auto& e : edges_) edges.push_back({m[e.a], m[e.b]});
    std::map<int, int> orders;
    for (auto& [l, o] : orders_) orders[m[l]] = o;
    if (leg_map) *leg_map = m;
    return LevelGraph(genera_, legs, edges, orders, levels_);
}

bool LevelGraph::is_inconvenient_vertex(int v) const {
    if (genera_[v] != 0) return false;
    int pole_excess = 0;
    int max_zero = -1;
    for (int l : legs_[v]) {
        int o = order(l);
        if (o == -1) return false;
        if (o < 0)
            pole_excess += -o - 1;
        else
            max_zero = std::max(max_zero, o);
    }
    return max_zero > pole_excess - 1;
}

namespace {

// auxiliary graph: graph vertices at level >= lvl, one node per residue condition, one sink
struct AuxGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // node pairs
    std::vector<int> edge_id;                // index of graph edge or -1
};

AuxGraph build_aux(const LevelGraph& G, int lvl, const ResidueLegs& res) {
    AuxGraph A;
    int nv = G.num_vertices();
    int nrc = static_cast<int>(res.rc_legs.size());
    A.n = nv + nrc + 1;
    auto inside = [&](int v) { return G.level_of(v) >= lvl; };
    for (size_t k = 0; k < G.edges().size(); ++k) {
        auto& e = G.edges()[k];
        int a = G.vertex(e.a), b = G.vertex(e.b);
        if (inside(a) && inside(b)) {
            A.edges.push_back({a, b});
            A.edge_id.push_back(static_cast<int>(k));
        }
    }
    for (int k = 0; k < nrc; ++k)
        for (int l : res.rc_legs[k]) {
            if (!G.has_leg(l)) continue;
            int v = G.vertex(l);
            if (inside(v)) {
                A.edges.push_back({v, nv + k});
                A.edge_id.push_back(-1);
            }
        }
    for (int l : res.free_legs) {
        if (!G.has_leg(l)) continue;
        int v = G.vertex(l);
        if (inside(v)) {
            A.edges.push_back({v, nv + nrc});
            A.edge_id.push_back(-1);
        }
    }
    return A;
}

// component labels of A with one node and/or one edge removed
std::vector<int> components(const AuxGraph& A, int skip_node, int skip_edge) {
    UnionFind uf(A.n);
    for (size_t k = 0; k < A.edges.size(); ++k) {
        if (static_cast<int>(k) == skip_edge) continue;
        auto [a, b] = A.edges[k];
        if (a == skip_node || b == skip_node) continue;
        uf.unite(a, b);
    }
    std::vector<int> c(A.n);
    for (int i = 0; i < A.n; ++i) c[i] = uf.find(i);
    return c;
}

}  // namespace

bool LevelGraph::is_legal_vertex(int v, const ResidueLegs& res) const {
    if (!is_inconvenient_vertex(v)) return true;
    AuxGraph A = build_aux(*this, levels_[v], res);
    auto comp = components(A, v, -1);
    std::map<int, int> seen;
    for (auto [a, b] : A.edges) {
        if (a == v && b == v) return true;
        int other;
        if (a == v)
            other = b;
        else if (b == v)
            other = a;
        else
            continue;
        if (seen[comp[other]]++ > 0) return true;
    }
    return false;
}

bool LevelGraph::is_legal_edge(const Edge& e, const ResidueLegs& res) const {
    if (!is_horizontal(e)) return true;
    AuxGraph A = build_aux(*this, levels_[vertex(e.a)], res);
    int k = -1;
    for (size_t j = 0; j < A.edge_id.size(); ++j)
        if (A.edge_id[j] >= 0 && edges_[A.edge_id[j]] == e) k = static_cast<int>(j);
    auto comp = components(A, -1, k);
    return comp[vertex(e.a)] == comp[vertex(e.b)];
}

bool LevelGraph::is_legal(const ResidueLegs& res) const {
    for (int v = 0; v < num_vertices(); ++v)
        if (!is_legal_vertex(v, res)) return false;
    for (auto& e : horizontal_edges())
        if (!is_legal_edge(e, res)) return false;
    return true;
}

bool LevelGraph::is_legal() const {
    ResidueLegs res;
    for (int l : marked_legs())
        if (order(l) < 0) res.free_legs.push_back(l);
    return is_legal(res);
}

bool LevelGraph::is_stable() const {
    for (int v = 0; v < num_vertices(); ++v)
        if (2 * genera_[v] - 2 + static_cast<int>(legs_[v].size()) <= 0) return false;
    return true;
}

bool LevelGraph::is_connected() const {
    if (num_vertices() == 0) return true;
    UnionFind uf(num_vertices());
    for (auto& e : edges_) uf.unite(vertex(e.a), vertex(e.b));
    for (int v = 1; v < num_vertices(); ++v)
        if (uf.find(v) != uf.find(0)) return false;
    return true;
}

nlohmann::json LevelGraph::to_json() const {
    nlohmann::json j;
    j["genera"] = genera_;
    j["legs"] = legs_;
    nlohmann::json ed = nlohmann::json::array();
    for (auto& e : edges_) ed.push_back({e.a, e.b});
    j["edges"] = ed;
    nlohmann::json ord = nlohmann::json::array();
    for (auto& [l, o] : orders_) ord.push_back({l, o});
    j["orders"] = ord;
    j["levels"] = levels_;
    return j;
}

LevelGraph LevelGraph::from_json(const nlohmann::json& j) {
    std::vector<Edge> edges;
    for (auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    std::map<int, int> orders;
    auto& o = j.at("orders");
    if (o.is_object()) {
        for (auto& [k, v] : o.items()) orders[std::stoi(k)] = v.get<int>();
    } else {
        for (auto& p : o) orders[p.at(0).get<int>()] = p.at(1).get<int>();
    }
    return LevelGraph(j.at("genera").get<std::vector<int>>(),
                      j.at("legs").get<std::vector<std::vector<int>>>(), edges, orders,
                      j.at("levels").get<std::vector<int>>());
}

std::string LevelGraph::str() const {
    std::ostringstream os;
    auto list = [&](const std::vector<int>& v) {
        os << "[";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
        os << "]";
    };
    os << "LevelGraph(";
    list(genera_);
    os << ",[";
    for (size_t i = 0; i < legs_.size(); ++i) {
        if (i) os << ", ";
        list(legs_[i]);
    }
    os << "],[";
    for (size_t i = 0; i < edges_.size(); ++i)
        os << (i ? ", " : "") << "(" << edges_[i].a << ", " << edges_[i].b << ")";
    os << "],{";
    bool first = true;
    for (auto& [l, o] : orders_) {
        os << (first ? "" : ", ") << l << ": " << o;
        first = false;
    }
    os << "},";
    list(levels_);
    os << ",True)";
    return os.str();
}

bool LevelGraph::operator==(const LevelGraph& o) const {
    return genera_ == o.genera_ && legs_ == o.legs_ && edges_ == o.edges_ && orders_ == o.orders_ &&
           levels_ == o.levels_;
}

}  // namespace strata
