#include "strata/degeneration_graph.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "strata/clutch_split.hpp"

namespace strata {

std::string to_string(const Profile& p) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    if (p.size() == 1) os << ",";
    os << ")";
    return os.str();
}

std::string to_string(const EnhancedProfile& ep) {
    return "(" + to_string(ep.p) + ", " + std::to_string(ep.comp) + ")";
}

namespace {

void build_maps(StratumPtr X, DegenData& d) {
    const auto& bs = bics(X);
    size_t n = bs.size();
    d.top_to_bic.assign(n, {});
    d.bot_to_bic.assign(n, {});
    d.top_to_bic_inv.assign(n, {});
    d.bot_to_bic_inv.assign(n, {});
    for (size_t i = 0; i < n; ++i) {
        const auto& B = *bs[i];
        auto info = split_bic(B);
        const auto& tb = bics(B.top().S);
        for (size_t j = 0; j < tb.size(); ++j) {
            auto in = info;
            in.top = tb[j];
            auto H = clutch(in);
            int k = bic_index(X, *H->delta(1));
            if (k < 0) throw InternalInconsistency("top degeneration without ambient BIC");
            d.top_to_bic[i][static_cast<int>(j)] = k;
            d.top_to_bic_inv[i][k].push_back(static_cast<int>(j));
        }
        const auto& bb = bics(B.bot().S);
        for (size_t j = 0; j < bb.size(); ++j) {
            auto in = info;
            in.bottom = bb[j];
            auto H = clutch(in);
            int k = bic_index(X, *H->delta(2));
            if (k < 0) throw InternalInconsistency("bottom degeneration without ambient BIC");
            d.bot_to_bic[i][static_cast<int>(j)] = k;
            d.bot_to_bic_inv[i][k].push_back(static_cast<int>(j));
        }
    }
}

const std::vector<ELGPtr>& lookup_direct(StratumPtr X, const Profile& p);

std::vector<ELGPtr> compute_lookup(StratumPtr X, const Profile& p) {
    if (p.empty()) return {smooth_lg(X)};
    const auto& bs = bics(X);
    for (int x : p)
        if (x < 0 || x >= static_cast<int>(bs.size())) return {};
    if (p.size() == 1) return {bs[p[0]]};
    std::set<int> distinct(p.begin(), p.end());
    if (distinct.size() != p.size()) return {};
    const auto& B = bs[p[0]];
    const auto& inv = bot_to_bic_inv(X, p[0]);
    std::vector<Profile> lists{{}};
    for (size_t i = 1; i < p.size(); ++i) {
        auto it = inv.find(p[i]);
        if (it == inv.end()) return {};
        std::vector<Profile> nl;
        for (auto& l : lists)
            for (int q : it->second) {
                auto m = l;
                m.push_back(q);
                nl.push_back(m);
            }
        lists = std::move(nl);
    }
    auto info = split_bic(*B);
    std::map<std::vector<int>, ELGPtr> found;
    StratumPtr Bot = B->bot().S;
    for (auto& q : lists)
        for (auto& H : lookup_direct(Bot, q)) {
            auto in = info;
            in.bottom = H;
            auto G = clutch(in);
            found.emplace(G->key(), G);
        }
    std::vector<ELGPtr> out;
    for (auto& [k, G] : found) out.push_back(G);
    return out;
}

const std::vector<ELGPtr>& lookup_direct(StratumPtr X, const Profile& p) {
    auto& d = degen(X);
    auto it = d.lookup_cache.find(p);
    if (it != d.lookup_cache.end()) return it->second;
    auto res = compute_lookup(X, p);
    auto& slot = d.lookup_cache[p];
    slot = std::move(res);
    auto& idx = d.comp_index[p];
    for (size_t i = 0; i < slot.size(); ++i) idx[slot[i]->key()] = static_cast<int>(i);
    return slot;
}

}  // namespace

DegenData& degen(StratumPtr X) {
    if (!X->degen_data) {
        auto d = std::make_shared<DegenData>();
        X->degen_data = d;
        build_maps(X, *d);
    }
    return *X->degen_data;
}

const std::map<int, int>& top_to_bic(StratumPtr X, int i) { return degen(X).top_to_bic.at(i); }
const std::map<int, int>& bot_to_bic(StratumPtr X, int i) { return degen(X).bot_to_bic.at(i); }
const std::map<int, std::vector<int>>& top_to_bic_inv(StratumPtr X, int i) {
    return degen(X).top_to_bic_inv.at(i);
}
const std::map<int, std::vector<int>>& bot_to_bic_inv(StratumPtr X, int i) {
    return degen(X).bot_to_bic_inv.at(i);
}

const std::vector<std::vector<Profile>>& lookup_list(StratumPtr X) {
    auto& d = degen(X);
    if (d.list_built) return d.lookup_list;
    d.lookup_list.clear();
    d.lookup_list.push_back({Profile{}});
    std::vector<Profile> cur;
    for (int i = 0; i < static_cast<int>(bics(X).size()); ++i) cur.push_back({i});
    while (!cur.empty()) {
        d.lookup_list.push_back(cur);
        std::set<Profile> next;
        for (auto& P : cur) {
            for (auto& [j, k] : top_to_bic(X, P.front())) {
                Profile c{k};
                c.insert(c.end(), P.begin(), P.end());
                next.insert(c);
            }
            if (P.size() > 1)
                for (auto& [j, k] : bot_to_bic(X, P.back())) {
                    Profile c = P;
                    c.push_back(k);
                    next.insert(c);
                }
        }
        cur.clear();
        for (auto& c : next)
            if (!lookup_direct(X, c).empty()) cur.push_back(c);
    }
    d.canonical_order.clear();
    for (auto& level : d.lookup_list)
        for (auto& P : level) {
            auto s = P;
            std::sort(s.begin(), s.end());
            d.canonical_order[s] = P;
        }
    d.list_built = true;
    return d.lookup_list;
}

std::optional<Profile> canonical_profile(StratumPtr X, const Profile& p) {
    auto& d = degen(X);
    lookup_list(X);
    auto s = p;
    std::sort(s.begin(), s.end());
    auto it = d.canonical_order.find(s);
    if (it == d.canonical_order.end()) return std::nullopt;
    return it->second;
}

const std::vector<ELGPtr>& lookup(StratumPtr X, const Profile& p) {
    const auto& r = lookup_direct(X, p);
    if (!r.empty() || p.size() < 2) return r;
    auto c = canonical_profile(X, p);
    if (!c || *c == p) return r;
    return lookup_direct(X, *c);
}

ELGPtr lookup_graph(StratumPtr X, const EnhancedProfile& ep) {
    const auto& r = lookup_direct(X, ep.p);
    if (ep.comp < 0 || ep.comp >= static_cast<int>(r.size()))
        throw InternalInconsistency("no graph for enhanced profile " + to_string(ep));
    return r[ep.comp];
}

ELGPtr lookup_graph(StratumPtr X, const Profile& p, int comp) {
    return lookup_graph(X, EnhancedProfile{p, comp});
}

std::optional<int> component_of(StratumPtr X, const Profile& p, const EmbeddedLevelGraph& G) {
    lookup_direct(X, p);
    auto& idx = degen(X).comp_index[p];
    auto it = idx.find(G.key());
    if (it == idx.end()) return std::nullopt;
    return it->second;
}

EnhancedProfile enhanced_profile_of(StratumPtr X, const EmbeddedLevelGraph& G) {
    if (!G.LG.horizontal_edges().empty()) throw InternalInconsistency("horizontal edges");
    EnhancedProfile ep;
    int L = G.LG.num_levels() - 1;
    if (L == 1) {
        int k = bic_index(X, G);
        if (k < 0) throw InternalInconsistency("two-level graph is not a BIC");
        ep.p = {k};
        return ep;
    }
    for (int i = 1; i <= L; ++i) {
        int k = bic_index(X, *G.delta(i));
        if (k < 0) throw InternalInconsistency("crossing without BIC");
        ep.p.push_back(k);
    }
    auto c = component_of(X, ep.p, G);
    if (!c) throw InternalInconsistency("graph not found in its profile " + to_string(ep.p));
    ep.comp = *c;
    return ep;
}

std::vector<EnhancedProfile> enhanced_profiles_of_length(StratumPtr X, int l) {
    std::vector<EnhancedProfile> out;
    const auto& ll = lookup_list(X);
    if (l < 0 || l >= static_cast<int>(ll.size())) return out;
    for (auto& p : ll[l]) {
        int n = static_cast<int>(lookup_direct(X, p).size());
        for (int c = 0; c < n; ++c) out.push_back({p, c});
    }
    return out;
}

ELGPtr squish_to(StratumPtr X, const EnhancedProfile& big, const Profile& small) {
    auto G = lookup_graph(X, big);
    std::set<int> keep(small.begin(), small.end());
    for (int i = big.length() - 1; i >= 0; --i)
        if (!keep.count(big.p[i])) G = G->squish_vertical(i);
    return G;
}

EnhancedProfile squish(StratumPtr X, const EnhancedProfile& ep, int crossing) {
    if (crossing < 0 || crossing >= ep.length()) throw NoSuchLevel("no such crossing");
    auto G = lookup_graph(X, ep)->squish_vertical(crossing);
    Profile p = ep.p;
    p.erase(p.begin() + crossing);
    auto c = component_of(X, p, *G);
    if (!c) throw InternalInconsistency("squished graph not found");
    return {p, *c};
}

namespace {

bool is_subsequence(const Profile& small, const Profile& big) {
    size_t j = 0;
    for (size_t i = 0; i < big.size() && j < small.size(); ++i)
        if (big[i] == small[j]) ++j;
    return j == small.size();
}

}  // namespace

bool is_degeneration(StratumPtr X, const EnhancedProfile& big, const EnhancedProfile& small) {
    if (!is_subsequence(small.p, big.p)) return false;
    auto G = squish_to(X, big, small.p);
    return G->key() == lookup_graph(X, small)->key();
}

const std::vector<LegMap>& explicit_leg_maps(StratumPtr X, const EnhancedProfile& small,
                                             const EnhancedProfile& big) {
    auto& d = degen(X);
    auto key = std::make_pair(small, big);
    auto it = d.leg_maps.find(key);
    if (it != d.leg_maps.end()) return it->second;
    std::vector<LegMap> maps;
    if (is_subsequence(small.p, big.p)) {
        auto G = squish_to(X, big, small.p);
        auto S = lookup_graph(X, small);
        if (G->key() == S->key())
            G->isomorphisms(*S, [&](const Isomorphism& iso) {
                maps.push_back(iso.leg_map);
                return true;
            });
    }
    return d.leg_maps.emplace(key, std::move(maps)).first->second;
}

bool lies_over(StratumPtr X, int i, int j) {
    for (auto& [a, k] : bot_to_bic(X, i))
        if (k == j) return true;
    return false;
}

std::vector<Profile> merge_profiles_all(StratumPtr X, const Profile& p, const Profile& q) {
    // interleavings consistent with both orders; shared entries identified
    std::set<int> sp(p.begin(), p.end());
    std::vector<Profile> out;
    Profile cur;
    std::function<void(size_t, size_t)> rec = [&](size_t i, size_t j) {
        if (i == p.size() && j == q.size()) {
            if (!lookup_direct(X, cur).empty()) out.push_back(cur);
            return;
        }
        if (i < p.size() && j < q.size() && p[i] == q[j]) {
            cur.push_back(p[i]);
            rec(i + 1, j + 1);
            cur.pop_back();
            return;
        }
        if (i < p.size()) {
            // a shared entry of p must wait for q to reach it
            bool shared = std::find(q.begin() + j, q.end(), p[i]) != q.end();
            if (!shared) {
                cur.push_back(p[i]);
                rec(i + 1, j);
                cur.pop_back();
            }
        }
        if (j < q.size() && !sp.count(q[j])) {
            cur.push_back(q[j]);
            rec(i, j + 1);
            cur.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

std::optional<Profile> merge_profiles(StratumPtr X, const Profile& p, const Profile& q) {
    auto all = merge_profiles_all(X, p, q);
    if (all.empty()) return std::nullopt;
    return all.front();
}

std::vector<EnhancedProfile> common_degenerations(StratumPtr X, const EnhancedProfile& a,
                                                  const EnhancedProfile& b) {
    std::vector<EnhancedProfile> out;
    for (auto& m : merge_profiles_all(X, a.p, b.p)) {
        int n = static_cast<int>(lookup_direct(X, m).size());
        for (int c = 0; c < n; ++c) {
            EnhancedProfile e{m, c};
            if (is_degeneration(X, e, a) && is_degeneration(X, e, b)) out.push_back(e);
        }
    }
    return out;
}

std::vector<EnhancedProfile> codim_one_degenerations(StratumPtr X, const EnhancedProfile& ep) {
    std::vector<EnhancedProfile> out;
    for (auto& e : enhanced_profiles_of_length(X, ep.length() + 1))
        if (is_degeneration(X, e, ep)) out.push_back(e);
    return out;
}

std::vector<EnhancedProfile> codim_one_common_undegenerations(StratumPtr X, const EnhancedProfile& a,
                                                              const EnhancedProfile& b,
                                                              const EnhancedProfile& amb) {
    std::set<int> in_amb(amb.p.begin(), amb.p.end());
    std::set<int> in_b(b.p.begin(), b.p.end());
    std::set<EnhancedProfile> out;
    for (int k : a.p) {
        if (in_amb.count(k) || !in_b.count(k)) continue;
        for (size_t pos = 0; pos <= amb.p.size(); ++pos) {
            Profile c = amb.p;
            c.insert(c.begin() + pos, k);
            int n = static_cast<int>(lookup_direct(X, c).size());
            for (int comp = 0; comp < n; ++comp) {
                EnhancedProfile e{c, comp};
                if (is_degeneration(X, a, e) && is_degeneration(X, b, e) && is_degeneration(X, e, amb))
                    out.insert(e);
            }
        }
    }
    return {out.begin(), out.end()};
}

std::optional<EnhancedProfile> minimal_common_undegeneration(StratumPtr X, const EnhancedProfile& a,
                                                             const EnhancedProfile& b) {
    std::set<int> in_b(b.p.begin(), b.p.end());
    Profile common;
    for (int k : a.p)
        if (in_b.count(k)) common.push_back(k);
    if (!is_subsequence(common, b.p)) return std::nullopt;
    auto ga = squish_to(X, a, common);
    auto gb = squish_to(X, b, common);
    if (ga->key() != gb->key()) return std::nullopt;
    auto c = component_of(X, common, *ga);
    if (!c) return std::nullopt;
    return EnhancedProfile{common, *c};
}

EnhancedProfile three_level_profile_for_level(StratumPtr X, const EnhancedProfile& ep, int l) {
    if (l < 1 || l >= ep.length()) throw NoSuchLevel("level has no three-level neighbourhood");
    Profile p{ep.p[l - 1], ep.p[l]};
    auto G = squish_to(X, ep, p);
    auto c = component_of(X, p, *G);
    if (!c) throw InternalInconsistency("three-level graph not found");
    return {p, *c};
}

const std::map<int, int>& middle_to_bic(StratumPtr X, const EnhancedProfile& ep) {
    auto& d = degen(X);
    auto it = d.middle_to_bic.find(ep);
    if (it != d.middle_to_bic.end()) return it->second;
    if (ep.length() != 2) throw NoSuchLevel("middle_to_bic needs a three-level graph");
    auto split = splitting_info_at_level(X, ep, 1);
    std::map<int, int> m;
    const auto& mb = bics(split.level.S);
    for (size_t j = 0; j < mb.size(); ++j) {
        auto in = split.info;
        in.middle = mb[j];
        auto H = clutch(in);
        int k = bic_index(X, *H->delta(2));
        if (k < 0) throw InternalInconsistency("middle degeneration without ambient BIC");
        m[static_cast<int>(j)] = k;
    }
    return d.middle_to_bic.emplace(ep, std::move(m)).first->second;
}

std::vector<int> codim_counts(StratumPtr X) {
    std::vector<int> out;
    const auto& ll = lookup_list(X);
    for (auto& level : ll) {
        int n = 0;
        for (auto& p : level) n += static_cast<int>(lookup_direct(X, p).size());
        out.push_back(n);
    }
    return out;
}

}  // namespace strata
