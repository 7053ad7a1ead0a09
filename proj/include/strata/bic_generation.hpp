#pragma once

#include <unordered_map>
#include <vector>

#include "strata/embedded_graph.hpp"

namespace strata {

// Two-level graphs without horizontal edges on one connected surface; marked
// point i of the signature is leg i+1. Classical GRC, deduplicated.
std::vector<LevelGraph> bic_alt(const std::vector<int>& sig);
// raw enumeration before isomorphism dedup: half-edge slots on the bottom level
// are ordered, so graphs differing only in which top vertex fills a slot are kept
std::vector<LevelGraph> bic_alt_noiso(const std::vector<int>& sig);

struct BicData {
    std::vector<ELGPtr> bics;
    std::unordered_map<std::vector<int>, int, VecHash> index;  // canonical key -> index
    ELGPtr smooth;
};

std::vector<ELGPtr> generate_bics(StratumPtr X);
const std::vector<ELGPtr>& bics(StratumPtr X);
const ELGPtr& smooth_lg(StratumPtr X);
// index of the BIC isomorphic to G (a 2-level graph in X), -1 if none
int bic_index(StratumPtr X, const EmbeddedLevelGraph& G);

// ordering key used to sort BIC lists
std::vector<int> bic_sort_key(const EmbeddedLevelGraph& G);

}  // namespace strata
