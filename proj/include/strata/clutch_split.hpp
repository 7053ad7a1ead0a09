#pragma once

#include <map>
#include <optional>

#include "strata/degeneration_graph.hpp"

namespace strata {

struct SplittingInfo {
    StratumPtr X = nullptr;
    ELGPtr top;
    ELGPtr middle;  // may be null
    ELGPtr bottom;
    std::map<PointRef, PointRef> emb_dict_top, emb_dict_mid, emb_dict_bot;
    // top -> middle (or bottom when there is no middle)
    std::map<PointRef, PointRef> clutch_dict;
    std::map<PointRef, PointRef> clutch_dict_lower;
    std::map<PointRef, PointRef> clutch_dict_long;
};

SplittingInfo split_bic(const EmbeddedLevelGraph& B);
ELGPtr clutch(const SplittingInfo& info);

// levels strictly above (above=true) or below rel level l, embedded into the
// top level of the BIC at crossing l-1 (resp. the bottom of the BIC at crossing l)
ELGPtr sub_graph_from_level(StratumPtr X, const EnhancedProfile& ep, int l, bool above);

struct LevelSplit {
    SplittingInfo info;
    std::map<int, PointRef> leg_dict;  // graph legs on level l -> standardized level points
    LevelStratum level;
};

LevelSplit splitting_info_at_level(StratumPtr X, const EnhancedProfile& ep, int l);
SplittingInfo doublesplit(StratumPtr X, const EnhancedProfile& ep);
// the standardized level l of ep
LevelStratum standard_level(StratumPtr X, const EnhancedProfile& ep, int l);
struct StandardLevel {
    LevelStratum level;
    std::map<int, PointRef> leg_dict;  // legs of the representative of ep -> level points
};
const StandardLevel& standard_level_data(StratumPtr X, const EnhancedProfile& ep, int l);

}  // namespace strata
