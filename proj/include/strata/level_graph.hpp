#pragma once

#include <map>
#include "json.hpp"
#include <string>
#include <utility>
#include <vector>

#include "strata/common.hpp"

namespace strata {

// (upper leg, lower leg); horizontal edges keep the smaller leg first
struct Edge {
    int a = 0;
    int b = 0;
    auto operator<=>(const Edge&) const = default;
};

// residue data seen by the graph: legs grouped per residue condition, plus free pole legs
struct ResidueLegs {
    std::vector<std::vector<int>> rc_legs;
    std::vector<int> free_legs;
};

class LevelGraph {
public:
    LevelGraph() = default;
    LevelGraph(std::vector<int> genera, std::vector<std::vector<int>> legs, std::vector<Edge> edges,
               std::map<int, int> orders, std::vector<int> levels);

    const std::vector<int>& genera() const { return genera_; }
    int genus(int v) const { return genera_.at(v); }
    const std::vector<std::vector<int>>& legs() const { return legs_; }
    const std::vector<int>& legs_of(int v) const { return legs_.at(v); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::map<int, int>& orders() const { return orders_; }
    int order(int leg) const { return orders_.at(leg); }
    const std::vector<int>& levels() const { return levels_; }
    int level_of(int v) const { return levels_.at(v); }

    int num_vertices() const { return static_cast<int>(genera_.size()); }
    int num_levels() const;
    int vertex(int leg) const { return leg_vertex_.at(leg); }
    bool has_leg(int leg) const { return leg_vertex_.count(leg) > 0; }
    int total_genus() const;
    std::vector<int> all_legs() const;
    // legs not on an edge
    std::vector<int> marked_legs() const;
    bool is_marked(int leg) const;
    // relative level 0,1,2,...
    int rel_level(int v) const { return -levels_.at(v); }
    std::vector<int> vertices_on_level(int rel) const;
    bool is_horizontal(const Edge& e) const;
    std::vector<Edge> horizontal_edges() const;
    std::vector<Edge> vertical_edges() const;
    bool is_bic() const;
    int codim() const;
    int prong(const Edge& e) const;
    // edges whose upper end is at rel level <= i and lower end >= i+1
    std::vector<Edge> edges_crossing(int i) const;
    int ell_crossing(int i) const;
    int ell() const;  // BIC: lcm of prongs

    LevelGraph squish_horizontal(const Edge& e) const;
    LevelGraph squish_vertical(int i) const;
    LevelGraph delta(int i) const;  // 1-based
    LevelGraph renumbered(std::map<int, int>* leg_map = nullptr) const;

    bool is_inconvenient_vertex(int v) const;
    bool is_legal_vertex(int v, const ResidueLegs& res) const;
    bool is_legal_edge(const Edge& e, const ResidueLegs& res) const;
    bool is_legal(const ResidueLegs& res) const;
    // all marked poles free, no residue conditions
    bool is_legal() const;
    bool is_stable() const;
    bool is_connected() const;

    nlohmann::json to_json() const;
    static LevelGraph from_json(const nlohmann::json& j);
    std::string str() const;

    bool operator==(const LevelGraph& o) const;

private:
    void index_legs();

    std::vector<int> genera_;
    std::vector<std::vector<int>> legs_;
    std::vector<Edge> edges_;
    std::map<int, int> orders_;
    std::vector<int> levels_;
    std::map<int, int> leg_vertex_;
};

}  // namespace strata
