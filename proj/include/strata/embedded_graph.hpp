#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strata/level_graph.hpp"
#include "strata/strata_core.hpp"

namespace strata {

// a level of a graph viewed as a stratum, with graph leg -> stratum point
struct LevelStratum {
    StratumPtr S = nullptr;
    std::map<int, PointRef> leg_dict;
    std::map<PointRef, int> inverse() const;
};

struct Isomorphism {
    std::vector<int> vertex_map;
    std::map<int, int> leg_map;
};

// canonical key of a level graph with labelled marked legs; equal iff isomorphic
std::vector<int> canonical_key(const LevelGraph& G, const std::map<int, int>& marked_label);

// enumerate isomorphisms G1 -> G2 respecting levels, genera, orders and labels.
// The callback returns false to stop.
void for_each_isomorphism(const LevelGraph& G1, const std::map<int, int>& lab1, const LevelGraph& G2,
                          const std::map<int, int>& lab2,
                          const std::function<bool(const Isomorphism&)>& cb);

class EmbeddedLevelGraph;
using ELGPtr = std::shared_ptr<const EmbeddedLevelGraph>;

class EmbeddedLevelGraph {
public:
    EmbeddedLevelGraph(StratumPtr X, LevelGraph LG, std::map<int, PointRef> dmp);

    StratumPtr X;
    LevelGraph LG;
    std::map<int, PointRef> dmp;
    std::map<PointRef, int> dmp_inv;

    std::map<int, int> labels() const;
    ResidueLegs residue_legs() const;
    bool is_legal() const;
    int num_levels() const { return LG.num_levels(); }
    int codim() const { return LG.codim(); }
    LevelStratum level(int rel) const;
    const LevelStratum& top() const;
    const LevelStratum& bot() const;
    int ell() const { return LG.ell(); }
    const std::vector<int>& key() const;
    std::size_t key_hash() const;
    // number of automorphisms (cached)
    int automorphisms() const;
    std::vector<Isomorphism> automorphism_list() const;
    // all legs mapped to a point on the other side, marked legs forced
    void isomorphisms(const EmbeddedLevelGraph& other,
                      const std::function<bool(const Isomorphism&)>& cb) const;
    bool is_isomorphic(const EmbeddedLevelGraph& other) const;
    std::string explain() const;
    std::string str() const;

    ELGPtr squish_vertical(int i) const;
    ELGPtr delta(int i) const;

private:
    mutable std::optional<std::vector<int>> key_;
    mutable std::size_t hash_ = 0;
    mutable int aut_ = -1;
    mutable std::optional<LevelStratum> top_, bot_;
};

ELGPtr make_elg(StratumPtr X, LevelGraph LG, std::map<int, PointRef> dmp);
// the graph with one vertex carrying all points of X (one vertex per component)
ELGPtr smooth_graph(StratumPtr X);

// Level strata of a graph, grouped residue conditions included
LevelStratum extract_level(const LevelGraph& G, const std::map<int, PointRef>& dmp, StratumPtr X,
                           int rel);

}  // namespace strata
