#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strata/bic_generation.hpp"

namespace strata {

using Profile = std::vector<int>;

struct EnhancedProfile {
    Profile p;
    int comp = 0;
    auto operator<=>(const EnhancedProfile&) const = default;
    int length() const { return static_cast<int>(p.size()); }
};

std::string to_string(const Profile& p);
std::string to_string(const EnhancedProfile& ep);

using LegMap = std::map<int, int>;

struct DegenData {
    std::vector<std::map<int, int>> top_to_bic, bot_to_bic;
    std::vector<std::map<int, std::vector<int>>> top_to_bic_inv, bot_to_bic_inv;
    bool list_built = false;
    std::vector<std::vector<Profile>> lookup_list;
    std::map<Profile, std::vector<ELGPtr>> lookup_cache;
    std::map<Profile, std::map<std::vector<int>, int>> comp_index;
    std::map<std::vector<int>, Profile> canonical_order;  // sorted entries -> profile
    std::map<std::pair<EnhancedProfile, EnhancedProfile>, std::vector<LegMap>> leg_maps;
    std::map<EnhancedProfile, std::map<int, int>> middle_to_bic;
};

DegenData& degen(StratumPtr X);

const std::map<int, int>& top_to_bic(StratumPtr X, int i);
const std::map<int, int>& bot_to_bic(StratumPtr X, int i);
const std::map<int, std::vector<int>>& top_to_bic_inv(StratumPtr X, int i);
const std::map<int, std::vector<int>>& bot_to_bic_inv(StratumPtr X, int i);
const std::map<int, int>& middle_to_bic(StratumPtr X, const EnhancedProfile& ep);

const std::vector<std::vector<Profile>>& lookup_list(StratumPtr X);
// graphs of a profile (any order of entries), one per isomorphism class
const std::vector<ELGPtr>& lookup(StratumPtr X, const Profile& p);
// canonical order required
ELGPtr lookup_graph(StratumPtr X, const EnhancedProfile& ep);
ELGPtr lookup_graph(StratumPtr X, const Profile& p, int comp = 0);
std::optional<Profile> canonical_profile(StratumPtr X, const Profile& p);

// profile and component of a graph of X (no horizontal edges)
EnhancedProfile enhanced_profile_of(StratumPtr X, const EmbeddedLevelGraph& G);
std::optional<int> component_of(StratumPtr X, const Profile& p, const EmbeddedLevelGraph& G);

std::vector<EnhancedProfile> enhanced_profiles_of_length(StratumPtr X, int l);
EnhancedProfile squish(StratumPtr X, const EnhancedProfile& ep, int crossing);
bool is_degeneration(StratumPtr X, const EnhancedProfile& big, const EnhancedProfile& small);
bool lies_over(StratumPtr X, int i, int j);
std::vector<Profile> merge_profiles_all(StratumPtr X, const Profile& p, const Profile& q);
std::optional<Profile> merge_profiles(StratumPtr X, const Profile& p, const Profile& q);
std::vector<EnhancedProfile> common_degenerations(StratumPtr X, const EnhancedProfile& a,
                                                  const EnhancedProfile& b);
std::vector<EnhancedProfile> codim_one_degenerations(StratumPtr X, const EnhancedProfile& ep);
std::vector<EnhancedProfile> codim_one_common_undegenerations(StratumPtr X, const EnhancedProfile& a,
                                                              const EnhancedProfile& b,
                                                              const EnhancedProfile& amb);
std::optional<EnhancedProfile> minimal_common_undegeneration(StratumPtr X, const EnhancedProfile& a,
                                                             const EnhancedProfile& b);
EnhancedProfile three_level_profile_for_level(StratumPtr X, const EnhancedProfile& ep, int l);
// maps legs of the big representative to legs of the small one; empty if not a degeneration
const std::vector<LegMap>& explicit_leg_maps(StratumPtr X, const EnhancedProfile& small,
                                             const EnhancedProfile& big);
// squish the representative of big down to the profile of small
ELGPtr squish_to(StratumPtr X, const EnhancedProfile& big, const Profile& small);

std::vector<int> codim_counts(StratumPtr X);

}  // namespace strata
