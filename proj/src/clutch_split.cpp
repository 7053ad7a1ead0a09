#include "strata/clutch_split.hpp"

#include <set>

namespace strata {

SplittingInfo split_bic(const EmbeddedLevelGraph& B) {
    if (B.LG.num_levels() != 2 || !B.LG.horizontal_edges().empty())
        throw NotABic("split_bic needs a two-level graph without horizontal edges");
    SplittingInfo info;
    info.X = B.X;
    const auto& top = B.top();
    const auto& bot = B.bot();
    info.top = smooth_lg(top.S);
    info.bottom = smooth_lg(bot.S);
    for (auto& [leg, p] : B.dmp) {
        if (B.LG.rel_level(B.LG.vertex(leg)) == 0)
            info.emb_dict_top[p] = top.leg_dict.at(leg);
        else
            info.emb_dict_bot[p] = bot.leg_dict.at(leg);
    }
    for (auto& e : B.LG.edges()) info.clutch_dict[top.leg_dict.at(e.a)] = bot.leg_dict.at(e.b);
    return info;
}

ELGPtr clutch(const SplittingInfo& info) {
    const EmbeddedLevelGraph* slot[3] = {info.top.get(), info.middle.get(), info.bottom.get()};
    std::vector<int> genera, levels;
    std::vector<std::vector<int>> legs;
    std::map<int, int> orders;
    std::vector<Edge> edges;
    std::map<int, PointRef> dmp;
    std::map<int, int> ren[3];
    std::set<PointRef> used[3];
    int next = 1, offset = 0;
    for (int k = 0; k < 3; ++k) {
        if (!slot[k]) continue;
        const auto& G = slot[k]->LG;
        for (int v = 0; v < G.num_vertices(); ++v) {
            std::vector<int> lv;
            for (int l : G.legs_of(v)) {
                ren[k][l] = next;
                orders[next] = G.order(l);
                lv.push_back(next++);
            }
            legs.push_back(lv);
            genera.push_back(G.genus(v));
            levels.push_back(G.level_of(v) - offset);
        }
        for (auto& e : G.edges()) edges.push_back({ren[k][e.a], ren[k][e.b]});
        offset += G.num_levels();
    }
    auto leg_of = [&](int k, PointRef p) {
        if (!slot[k]) throw IncompatibleClutch("clutch into a missing piece");
        auto it = slot[k]->dmp_inv.find(p);
        if (it == slot[k]->dmp_inv.end())
            throw IncompatibleClutch("piece has no point " + to_string(p));
        if (!used[k].insert(p).second) throw IncompatibleClutch("point used twice " + to_string(p));
        return ren[k].at(it->second);
    };
    auto join = [&](int up, int lo, const std::map<PointRef, PointRef>& d) {
        for (auto& [a, b] : d) {
            int la = leg_of(up, a), lb = leg_of(lo, b);
            if (orders[la] < 0 || orders[la] + orders[lb] != -2)
                throw IncompatibleClutch("orders do not match along a clutched edge");
            edges.push_back({la, lb});
        }
    };
    int below_top = slot[1] ? 1 : 2;
    if (!info.clutch_dict.empty()) join(slot[0] ? 0 : 1, slot[0] ? below_top : 2, info.clutch_dict);
    join(1, 2, info.clutch_dict_lower);
    join(0, 2, info.clutch_dict_long);
    auto embed = [&](int k, const std::map<PointRef, PointRef>& d) {
        for (auto& [q, p] : d) {
            int l = leg_of(k, p);
            if (info.X->order(q) != orders[l]) throw IncompatibleClutch("order mismatch at marked point");
            dmp[l] = q;
        }
    };
    embed(0, info.emb_dict_top);
    embed(1, info.emb_dict_mid);
    embed(2, info.emb_dict_bot);
    for (int k = 0; k < 3; ++k)
        if (slot[k] && used[k].size() != slot[k]->dmp.size())
            throw IncompatibleClutch("dangling point on a piece");
    return make_elg(info.X, LevelGraph(genera, legs, edges, orders, levels), dmp);
}

namespace {

// first undegeneration leg map from the representative of ep to BIC b
const LegMap& leg_map_to_bic(StratumPtr X, const EnhancedProfile& ep, int b) {
    const auto& maps = explicit_leg_maps(X, EnhancedProfile{{b}, 0}, ep);
    if (maps.empty()) throw InternalInconsistency("graph does not degenerate from its BIC");
    return maps.front();
}

std::map<std::tuple<StratumPtr, EnhancedProfile, int>, StandardLevel>& std_cache() {
    static std::map<std::tuple<StratumPtr, EnhancedProfile, int>, StandardLevel> c;
    return c;
}

const StandardLevel& std_level(StratumPtr X, const EnhancedProfile& ep, int l) {
    auto key = std::make_tuple(X, ep, l);
    auto it = std_cache().find(key);
    if (it != std_cache().end()) return it->second;
    int L = ep.length();
    if (l < 0 || l > L) throw NoSuchLevel("no level " + std::to_string(l));
    auto G = lookup_graph(X, ep);
    StandardLevel s;
    std::vector<int> on_level;
    for (int v : G->LG.vertices_on_level(l))
        for (int leg : G->LG.legs_of(v)) on_level.push_back(leg);
    if (L == 0) {
        s.level.S = X;
        s.level.leg_dict = G->dmp;
        s.leg_dict = G->dmp;
    } else {
        const LevelStratum* lvl;
        const LegMap* rho;
        ELGPtr holder;
        LevelStratum mid;
        if (l == 0 || l == L) {
            int b = l == 0 ? ep.p.front() : ep.p.back();
            rho = &leg_map_to_bic(X, ep, b);
            lvl = l == 0 ? &bics(X)[b]->top() : &bics(X)[b]->bot();
        } else {
            auto ep3 = three_level_profile_for_level(X, ep, l);
            const auto& maps = explicit_leg_maps(X, ep3, ep);
            if (maps.empty()) throw InternalInconsistency("no map to the three-level graph");
            rho = &maps.front();
            holder = lookup_graph(X, ep3);
            mid = holder->level(1);
            lvl = &mid;
        }
        s.level = *lvl;
        for (int leg : on_level) s.leg_dict[leg] = lvl->leg_dict.at(rho->at(leg));
    }
    return std_cache().emplace(key, std::move(s)).first->second;
}

}  // namespace

LevelStratum standard_level(StratumPtr X, const EnhancedProfile& ep, int l) {
    return std_level(X, ep, l).level;
}

const StandardLevel& standard_level_data(StratumPtr X, const EnhancedProfile& ep, int l) {
    return std_level(X, ep, l);
}

ELGPtr sub_graph_from_level(StratumPtr X, const EnhancedProfile& ep, int l, bool above) {
    int L = ep.length();
    if (above ? (l < 1 || l > L) : (l < 0 || l >= L))
        throw NoSuchLevel("no sub graph " + std::string(above ? "above" : "below") + " level " +
                          std::to_string(l));
    auto G = lookup_graph(X, ep);
    const auto& LG = G->LG;
    int b = above ? ep.p[l - 1] : ep.p[l];
    const auto& rho = leg_map_to_bic(X, ep, b);
    const auto& B = bics(X)[b];
    const LevelStratum& target = above ? B->top() : B->bot();
    auto inside = [&](int v) { return above ? LG.rel_level(v) < l : LG.rel_level(v) > l; };
    std::vector<int> genera, levels;
    std::vector<std::vector<int>> legs;
    std::map<int, int> orders;
    std::vector<Edge> edges;
    std::set<int> kept;
    for (int v = 0; v < LG.num_vertices(); ++v) {
        if (!inside(v)) continue;
        genera.push_back(LG.genus(v));
        legs.push_back(LG.legs_of(v));
        levels.push_back(LG.level_of(v));
        for (int leg : LG.legs_of(v)) {
            orders[leg] = LG.order(leg);
            kept.insert(leg);
        }
    }
    std::set<int> internal;
    for (auto& e : LG.edges())
        if (kept.count(e.a) && kept.count(e.b)) {
            edges.push_back(e);
            internal.insert(e.a);
            internal.insert(e.b);
        }
    std::map<int, PointRef> dmp;
    for (int leg : kept)
        if (!internal.count(leg)) dmp[leg] = target.leg_dict.at(rho.at(leg));
    return make_elg(target.S, LevelGraph(genera, legs, edges, orders, levels), dmp);
}

LevelSplit splitting_info_at_level(StratumPtr X, const EnhancedProfile& ep, int l) {
    int L = ep.length();
    const auto& sl = std_level(X, ep, l);
    auto G = lookup_graph(X, ep);
    const auto& LG = G->LG;
    LevelSplit out;
    out.level = sl.level;
    out.leg_dict = sl.leg_dict;
    auto& info = out.info;
    info.X = X;
    info.middle = smooth_lg(sl.level.S);
    if (l > 0) info.top = sub_graph_from_level(X, ep, l, true);
    if (l < L) info.bottom = sub_graph_from_level(X, ep, l, false);
    for (auto& [leg, q] : G->dmp) {
        int r = LG.rel_level(LG.vertex(leg));
        if (r < l)
            info.emb_dict_top[q] = info.top->dmp.at(leg);
        else if (r == l)
            info.emb_dict_mid[q] = sl.leg_dict.at(leg);
        else
            info.emb_dict_bot[q] = info.bottom->dmp.at(leg);
    }
    for (auto& e : LG.edges()) {
        int ra = LG.rel_level(LG.vertex(e.a)), rb = LG.rel_level(LG.vertex(e.b));
        if (ra < l && rb == l)
            info.clutch_dict[info.top->dmp.at(e.a)] = sl.leg_dict.at(e.b);
        else if (ra == l && rb > l)
            info.clutch_dict_lower[sl.leg_dict.at(e.a)] = info.bottom->dmp.at(e.b);
        else if (ra < l && rb > l)
            info.clutch_dict_long[info.top->dmp.at(e.a)] = info.bottom->dmp.at(e.b);
    }
    return out;
}

SplittingInfo doublesplit(StratumPtr X, const EnhancedProfile& ep) {
    if (ep.length() != 2) throw NoSuchLevel("doublesplit needs a three-level graph");
    return splitting_info_at_level(X, ep, 1).info;
}

}  // namespace strata
