#include "strata/taut_ring.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "strata/evaluation_cache.hpp"

namespace strata {

using EP = EnhancedProfile;

struct TautData {
    std::mutex pool_mu;
    std::set<AdditiveGenerator> pool;
    std::map<EP, LevelInfo> level_info;
    std::optional<PointRef> default_point;
    std::map<EP, Q> stack;
    std::map<std::pair<EP, int>, LevelSplit> splits;
    std::map<std::tuple<EP, int, int>, GluedBic> glued;
    std::map<std::tuple<int, EP, int>, TautClass> xi_level;
    std::map<std::pair<EP, int>, TautClass> cal_l;
    std::map<std::pair<EP, EP>, TautClass> nb;
    std::map<std::tuple<EP, EP, EP>, Cnb> cnb;
    std::map<std::pair<AGRef, EP>, TautClass> base_pb;
    std::map<std::tuple<AGRef, EP, EP>, TautClass> gen_pb;
    std::map<std::tuple<AGRef, AGRef, EP>, TautClass> inter;
    std::map<EP, std::vector<std::map<int, int>>> auts;
};

namespace {

TautData& tdata(StratumPtr X) {
    if (!X->taut_data) X->taut_data = std::make_shared<TautData>();
    return *X->taut_data;
}

std::map<int, int> add_legs(const std::map<int, int>& a, const std::map<int, int>& b) {
    auto r = a;
    for (auto& [l, e] : b) r[l] += e;
    return r;
}

bool vanishes(AGRef A) {
    const auto& info = level_info(A->X, A->ep);
    std::vector<int> deg(info.level_dim.size(), 0);
    for (auto& [l, e] : A->legs) deg[info.leg_level.at(l)] += e;
    for (size_t i = 0; i < deg.size(); ++i)
        if (deg[i] > info.level_dim[i]) return true;
    return false;
}

struct AGLess {
    bool operator()(AGRef a, AGRef b) const { return *a < *b; }
};

}  // namespace

int AdditiveGenerator::psi_degree() const {
    int d = 0;
    for (auto& [l, e] : legs) d += e;
    return d;
}

std::string AdditiveGenerator::str() const {
    std::ostringstream os;
    const auto& info = level_info(X, ep);
    for (auto& [l, e] : legs)
        os << "Psi class " << l << " with exponent " << e << " on level " << info.leg_level.at(l) << " * ";
    os << "Graph " << to_string(ep);
    return os.str();
}

const LevelInfo& level_info(StratumPtr X, const EP& ep) {
    auto& d = tdata(X);
    auto it = d.level_info.find(ep);
    if (it != d.level_info.end()) return it->second;
    auto G = lookup_graph(X, ep);
    LevelInfo info;
    for (int v = 0; v < G->LG.num_vertices(); ++v)
        for (int l : G->LG.legs_of(v)) info.leg_level[l] = G->LG.rel_level(v);
    for (int l = 0; l <= ep.length(); ++l)
        info.level_dim.push_back(standard_level_data(X, ep, l).level.S->dim());
    return d.level_info.emplace(ep, std::move(info)).first->second;
}

AGRef additive_generator(StratumPtr X, const EP& ep, const std::map<int, int>& legs) {
    AdditiveGenerator A;
    A.X = X;
    A.ep = ep;
    for (auto& [l, e] : legs) {
        if (e < 0) throw InternalInconsistency("negative psi exponent");
        if (e > 0) A.legs[l] = e;
    }
    const auto& info = level_info(X, ep);
    for (auto& [l, e] : A.legs)
        if (!info.leg_level.count(l))
            throw LegNotOnLevel("leg " + std::to_string(l) + " is not on graph " + to_string(ep));
    auto& d = tdata(X);
    std::lock_guard<std::mutex> lock(d.pool_mu);
    return &*d.pool.insert(std::move(A)).first;
}

// ---------------------------------------------------------------- TautClass

TautClass::TautClass(StratumPtr X, std::vector<std::pair<Q, AGRef>> t) : X(X), terms(std::move(t)) {
    reduce();
}

TautClass TautClass::one(StratumPtr X) { return TautClass(X, {{Q(1), additive_generator(X, EP{})}}); }

TautClass TautClass::from_graph(StratumPtr X, const EP& ep) {
    return TautClass(X, {{Q(1), additive_generator(X, ep)}});
}

void TautClass::reduce() {
    std::map<AGRef, Q, AGLess> acc;
    for (auto& [c, A] : terms) {
        if (A->X != X) throw AmbientMismatch("generator on a different stratum");
        acc[A] += c;
    }
    terms.clear();
    for (auto& [A, c] : acc) {
        if (c == 0) continue;
        if (A->degree() > X->dim() || vanishes(A)) continue;
        terms.emplace_back(c, A);
    }
}

bool TautClass::is_equidimensional() const {
    for (auto& [c, A] : terms)
        if (A->degree() != terms.front().second->degree()) return false;
    return true;
}

TautClass TautClass::degree(int d) const {
    TautClass r(X);
    for (auto& t : terms)
        if (t.second->degree() == d) r.terms.push_back(t);
    return r;
}

std::string TautClass::str() const {
    std::ostringstream os;
    os << "Tautological class on " << X->str() << "\n";
    for (auto& [c, A] : terms) os << to_string(c) << " * " << A->str() << " +\n";
    return os.str();
}

TautClass TautClass::operator+(const TautClass& o) const {
    if (!X) return o;
    if (o.X && o.X != X) throw AmbientMismatch("sum of classes on different strata");
    auto t = terms;
    t.insert(t.end(), o.terms.begin(), o.terms.end());
    return TautClass(X, std::move(t));
}

TautClass TautClass::operator-() const {
    TautClass r = *this;
    for (auto& t : r.terms) t.first = -t.first;
    return r;
}

TautClass TautClass::operator-(const TautClass& o) const { return *this + (-o); }

TautClass& TautClass::operator+=(const TautClass& o) { return *this = *this + o; }

TautClass TautClass::operator*(const Q& c) const {
    if (c == 0) return TautClass(X);
    TautClass r = *this;
    for (auto& t : r.terms) t.first *= c;
    return r;
}

// automorphic monomials push forward to the same class
TautClass TautClass::canonical() const {
    std::vector<std::pair<Q, AGRef>> t;
    for (auto& [c, A] : terms) {
        auto& d = tdata(X);
        auto it = d.auts.find(A->ep);
        if (it == d.auts.end()) {
            std::vector<std::map<int, int>> maps;
            for (auto& iso : lookup_graph(X, A->ep)->automorphism_list()) maps.push_back(iso.leg_map);
            it = d.auts.emplace(A->ep, std::move(maps)).first;
        }
        auto best = A->legs;
        for (auto& m : it->second) {
            std::map<int, int> moved;
            for (auto& [l, e] : A->legs) moved[m.at(l)] = e;
            if (moved < best) best = moved;
        }
        t.emplace_back(c, additive_generator(X, A->ep, best));
    }
    return TautClass(X, std::move(t));
}

bool TautClass::operator==(const TautClass& o) const {
    auto a = canonical(), b = o.canonical();
    if (a.terms.size() != b.terms.size()) return false;
    for (size_t i = 0; i < a.terms.size(); ++i)
        if (a.terms[i].second != b.terms[i].second || a.terms[i].first != b.terms[i].first) return false;
    return true;
}

TautClass taut_sum(StratumPtr X, const std::vector<TautClass>& parts) {
    std::vector<std::pair<Q, AGRef>> t;
    for (auto& p : parts) t.insert(t.end(), p.terms.begin(), p.terms.end());
    return TautClass(X, std::move(t));
}

// ---------------------------------------------------------------- psi and xi

int ell_of_bic(StratumPtr X, int b) { return bics(X).at(b)->ell(); }

TautClass psi(StratumPtr X, int leg) {
    if (!X->is_connected()) throw Disconnected("psi needs a connected stratum");
    if (!smooth_lg(X)->dmp.count(leg)) throw LegNotOnLevel("no marked point with leg " + std::to_string(leg));
    return TautClass(X, {{Q(1), additive_generator(X, EP{}, {{leg, 1}})}});
}

PointRef default_xi_point(StratumPtr X) {
    auto& d = tdata(X);
    if (d.default_point) return *d.default_point;
    const auto& bs = bics(X);
    int best = -1;
    PointRef choice{};
    for (auto p : X->points()) {
        int cnt = 0;
        for (auto& B : bs)
            if (B->LG.rel_level(B->LG.vertex(B->dmp_inv.at(p))) == 1) ++cnt;
        if (best < 0 || cnt < best) {
            best = cnt;
            choice = p;
        }
    }
    d.default_point = choice;
    return choice;
}

namespace {

const LevelSplit& level_split(StratumPtr X, const EP& ep, int l) {
    auto& d = tdata(X);
    auto key = std::make_pair(ep, l);
    auto it = d.splits.find(key);
    if (it != d.splits.end()) return it->second;
    return d.splits.emplace(key, splitting_info_at_level(X, ep, l)).first->second;
}

bool on_bottom(const EmbeddedLevelGraph& B, PointRef p) {
    return B.LG.rel_level(B.LG.vertex(B.dmp_inv.at(p))) == 1;
}

}  // namespace

GluedBic glue_bic_at_level(StratumPtr X, const EP& ep, int l, int j) {
    auto& d = tdata(X);
    auto key = std::make_tuple(ep, l, j);
    auto it = d.glued.find(key);
    if (it != d.glued.end()) return it->second;
    int L = ep.length();
    GluedBic out;
    if (L == 0) {
        out.ep = EP{{j}, 0};
        out.weight = 1;
    } else {
        const auto& split = level_split(X, ep, l);
        const auto& beta = bics(split.level.S).at(j);
        auto info = split.info;
        info.middle = beta;
        auto G = clutch(info);
        int k;
        Profile np;
        if (l == 0) {
            k = top_to_bic(X, ep.p.front()).at(j);
            np.push_back(k);
            np.insert(np.end(), ep.p.begin(), ep.p.end());
        } else if (l == L) {
            k = bot_to_bic(X, ep.p.back()).at(j);
            np = ep.p;
            np.push_back(k);
        } else {
            auto ep3 = three_level_profile_for_level(X, ep, l);
            k = middle_to_bic(X, ep3).at(j);
            np = ep.p;
            np.insert(np.begin() + l, k);
        }
        auto comp = component_of(X, np, *G);
        if (comp)
            out.ep = EP{np, *comp};
        else
            out.ep = enhanced_profile_of(X, *G);
        Q w = frac(ell_of_bic(X, k), beta->ell());
        w *= frac(lookup_graph(X, out.ep)->automorphisms(),
                  lookup_graph(X, ep)->automorphisms() * beta->automorphisms());
        out.weight = w;
    }
    return d.glued.emplace(key, out).first->second;
}

TautClass xi_at_level(StratumPtr X, int l, const EP& ep, std::optional<int> leg) {
    int L = ep.length();
    if (l < 0 || l > L) throw NoSuchLevel("graph " + to_string(ep) + " has no level " + std::to_string(l));
    auto& d = tdata(X);
    auto key = std::make_tuple(l, ep, leg.value_or(0));
    auto it = d.xi_level.find(key);
    if (it != d.xi_level.end()) return it->second;
    const auto& sl = standard_level_data(X, ep, l);
    StratumPtr S = sl.level.S;
    PointRef q;
    if (leg) {
        auto f = sl.leg_dict.find(*leg);
        if (f == sl.leg_dict.end())
            throw LegNotOnLevel("leg " + std::to_string(*leg) + " is not on level " + std::to_string(l));
        q = f->second;
    } else {
        q = default_xi_point(S);
    }
    int qleg = -1;
    for (auto& [lg, p] : sl.leg_dict)
        if (p == q) qleg = lg;
    std::vector<std::pair<Q, AGRef>> t;
    t.emplace_back(Q(S->order(q) + 1), additive_generator(X, ep, {{qleg, 1}}));
    const auto& bs = bics(S);
    for (size_t j = 0; j < bs.size(); ++j) {
        if (!on_bottom(*bs[j], q)) continue;
        auto g = glue_bic_at_level(X, ep, l, static_cast<int>(j));
        t.emplace_back(-Q(bs[j]->ell()) * g.weight, additive_generator(X, g.ep));
    }
    return d.xi_level.emplace(key, TautClass(X, std::move(t))).first->second;
}

TautClass xi(StratumPtr X) { return xi_at_level(X, 0, EP{}); }

TautClass xi_with_leg(StratumPtr X, PointRef p) {
    auto it = smooth_lg(X)->dmp_inv.find(p);
    if (it == smooth_lg(X)->dmp_inv.end()) throw LegNotOnLevel("no point " + to_string(p));
    return xi_at_level(X, 0, EP{}, it->second);
}

TautClass xi_at_level_pow(StratumPtr X, int l, const EP& ep, int k) {
    return pow(xi_at_level(X, l, ep), k, ep);
}

TautClass calL(StratumPtr X, const EP& ep, int l) {
    auto& d = tdata(X);
    auto key = std::make_pair(ep, l);
    auto it = d.cal_l.find(key);
    if (it != d.cal_l.end()) return it->second;
    StratumPtr S = standard_level_data(X, ep, l).level.S;
    std::vector<std::pair<Q, AGRef>> t;
    const auto& bs = bics(S);
    for (size_t j = 0; j < bs.size(); ++j) {
        auto g = glue_bic_at_level(X, ep, l, static_cast<int>(j));
        t.emplace_back(Q(bs[j]->ell()) * g.weight, additive_generator(X, g.ep));
    }
    return d.cal_l.emplace(key, TautClass(X, std::move(t))).first->second;
}

// ---------------------------------------------------------------- normal bundles

TautClass normal_bundle(StratumPtr X, const EP& ep, const EP& amb) {
    auto& d = tdata(X);
    auto key = std::make_pair(ep, amb);
    auto it = d.nb.find(key);
    if (it != d.nb.end()) return it->second;
    if (ep.length() != amb.length() + 1 || !is_degeneration(X, ep, amb))
        throw NotCodimOne(to_string(ep) + " is not a divisor in " + to_string(amb));
    std::set<int> in_amb(amb.p.begin(), amb.p.end());
    int i = 0;
    while (in_amb.count(ep.p[i])) ++i;
    Q inv_ell = frac(1, ell_of_bic(X, ep.p[i]));
    auto r = (xi_at_level(X, i + 1, ep) - xi_at_level(X, i, ep) - calL(X, ep, i)) * inv_ell;
    return d.nb.emplace(key, r).first->second;
}

Cnb cnb(StratumPtr X, const EP& ep1, const EP& ep2, const EP& amb) {
    auto& d = tdata(X);
    auto key = std::make_tuple(ep1, ep2, amb);
    auto it = d.cnb.find(key);
    if (it != d.cnb.end()) return it->second;
    Cnb out = Unit{};
    auto mcu = minimal_common_undegeneration(X, ep1, ep2);
    if (mcu && !(*mcu == amb)) {
        std::optional<TautClass> prod;
        for (auto& g : codim_one_common_undegenerations(X, ep1, ep2, amb)) {
            auto pb = gen_pullback_taut(normal_bundle(X, g, amb), *mcu, g);
            prod = prod ? intersection(*prod, pb, *mcu) : pb;
        }
        if (prod) out = *prod;
    }
    return d.cnb.emplace(key, out).first->second;
}

// ---------------------------------------------------------------- pullback

TautClass base_pullback(AGRef A, const EP& big) {
    StratumPtr X = A->X;
    auto& d = tdata(X);
    auto key = std::make_pair(A, big);
    auto it = d.base_pb.find(key);
    if (it != d.base_pb.end()) return it->second;
    const auto& maps = explicit_leg_maps(X, A->ep, big);
    std::vector<std::pair<Q, AGRef>> t;
    if (!maps.empty()) {
        Q w = frac(1, static_cast<long>(maps.size()));
        for (auto& rho : maps) {
            std::map<int, int> inv;
            for (auto& [b, s] : rho) inv[s] = b;
            std::map<int, int> legs;
            for (auto& [l, e] : A->legs) legs[inv.at(l)] += e;
            t.emplace_back(w, additive_generator(X, big, legs));
        }
    }
    return d.base_pb.emplace(key, TautClass(X, std::move(t))).first->second;
}

TautClass gen_pullback(AGRef A, const EP& target, const EP& amb) {
    StratumPtr X = A->X;
    auto& d = tdata(X);
    auto key = std::make_tuple(A, target, amb);
    auto it = d.gen_pb.find(key);
    if (it != d.gen_pb.end()) return it->second;
    std::vector<TautClass> parts;
    for (auto& pi : common_degenerations(X, A->ep, target)) parts.push_back(base_pullback(A, pi));
    auto S = taut_sum(X, parts);
    auto c = cnb(X, A->ep, target, amb);
    if (auto* N = std::get_if<TautClass>(&c)) {
        auto mcu = minimal_common_undegeneration(X, A->ep, target);
        S = intersection(S, *N, *mcu);
    }
    return d.gen_pb.emplace(key, S).first->second;
}

TautClass gen_pullback_taut(const TautClass& t, const EP& target, const EP& amb) {
    std::vector<TautClass> parts;
    for (auto& [c, A] : t.terms) parts.push_back(gen_pullback(A, target, amb) * c);
    return taut_sum(t.X, parts);
}

// ---------------------------------------------------------------- products

namespace {

// G's monomial times each term of a class on the same graph
void multiply_onto(std::vector<std::pair<Q, AGRef>>& out, const Q& c, AGRef G, const TautClass& t) {
    for (auto& [e, H] : t.terms)
        out.emplace_back(c * e, additive_generator(G->X, G->ep, add_legs(G->legs, H->legs)));
}

}  // namespace

TautClass intersection_AG(AGRef A, AGRef B, const EP& amb) {
    StratumPtr X = A->X;
    if (B->X != X) throw AmbientMismatch("generators on different strata");
    if (A->degree() + B->degree() - amb.length() > X->dim()) return TautClass(X);
    auto& d = tdata(X);
    auto key = std::make_tuple(A, B, amb);
    auto it = d.inter.find(key);
    if (it != d.inter.end()) return it->second;
    std::vector<std::pair<Q, AGRef>> out;
    TautClass r(X);
    if (B->ep == amb) {
        multiply_onto(out, Q(1), A, base_pullback(B, A->ep));
        r = TautClass(X, std::move(out));
    } else if (A->ep == amb) {
        multiply_onto(out, Q(1), B, base_pullback(A, B->ep));
        r = TautClass(X, std::move(out));
    } else if (A->ep == B->ep) {
        // monomials stand for automorphism averages: symmetrize one factor
        multiply_onto(out, Q(1), A, base_pullback(B, A->ep));
        TautClass P(X, std::move(out));
        auto c = cnb(X, A->ep, B->ep, amb);
        if (auto* N = std::get_if<TautClass>(&c))
            r = intersection(P, *N, A->ep);
        else
            r = P;
    } else {
        auto T = gen_pullback(B, A->ep, amb);
        for (auto& [c, G] : T.terms) {
            if (A->legs.empty())
                out.emplace_back(c, G);
            else
                multiply_onto(out, c, G, base_pullback(A, G->ep));
        }
        r = TautClass(X, std::move(out));
    }
    return d.inter.emplace(key, r).first->second;
}

TautClass intersection(const TautClass& a, const TautClass& b, const EP& amb) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (a.X != b.X) throw AmbientMismatch("classes on different strata");
    std::vector<TautClass> parts;
    for (auto& [c1, A] : a.terms)
        for (auto& [c2, B] : b.terms) parts.push_back(intersection_AG(A, B, amb) * (c1 * c2));
    return taut_sum(a.X, parts);
}

TautClass pow(const TautClass& t, int k, const EP& amb) {
    if (k < 0) throw InternalInconsistency("negative power");
    if (k == 0) return TautClass(t.X, {{Q(1), additive_generator(t.X, amb)}});
    TautClass r = t;
    for (int i = 1; i < k; ++i) r = intersection(r, t, amb);
    return r;
}

TautClass operator*(const TautClass& a, const TautClass& b) { return intersection(a, b, EP{}); }

// ---------------------------------------------------------------- residue conditions

bool res_condition_automatic(StratumPtr X, const EmbeddedLevelGraph& B, const ResidueCondition& rc) {
    auto ps = X->poles();
    auto col = [&](PointRef p) {
        return static_cast<int>(std::find(ps.begin(), ps.end(), p) - ps.begin());
    };
    std::vector<std::vector<int>> A = X->residue_matrix();
    std::map<int, std::vector<int>> top_rows;
    for (auto p : ps) {
        int v = B.LG.vertex(B.dmp_inv.at(p));
        if (B.LG.rel_level(v) == 0) {
            auto& row = top_rows[v];
            row.resize(ps.size(), 0);
            row[col(p)] = 1;
        } else {
            std::vector<int> row(ps.size(), 0);
            row[col(p)] = 1;
            A.push_back(row);
        }
    }
    for (auto& [v, row] : top_rows) A.push_back(row);
    int r = A.empty() ? 0 : matrix_rank(A);
    A.push_back(X->residue_row(rc));
    return matrix_rank(A) == r;
}

TautClass res_stratum_class(StratumPtr X, const ResidueCondition& rc) {
    auto m = X->full_residue_matrix();
    int r = m.empty() ? 0 : matrix_rank(m);
    m.push_back(X->residue_row(rc));
    if (matrix_rank(m) == r) throw RedundantCondition("condition already holds on " + X->sig_str());
    auto t = -xi(X);
    const auto& bs = bics(X);
    std::vector<std::pair<Q, AGRef>> terms;
    for (size_t j = 0; j < bs.size(); ++j)
        if (res_condition_automatic(X, *bs[j], rc))
            terms.emplace_back(-Q(bs[j]->ell()), additive_generator(X, EP{{static_cast<int>(j)}, 0}));
    return t + TautClass(X, std::move(terms));
}

// ---------------------------------------------------------------- numbers

Q stack_factor(StratumPtr X, const EP& ep) {
    auto& d = tdata(X);
    auto it = d.stack.find(ep);
    if (it != d.stack.end()) return it->second;
    auto G = lookup_graph(X, ep);
    mpz_class prongs = 1;
    for (auto& e : G->LG.edges()) prongs *= G->LG.prong(e);
    mpz_class ells = 1;
    for (int b : ep.p) ells *= ell_of_bic(X, b);
    Q v(prongs, ells * G->automorphisms());
    v.canonicalize();
    return d.stack.emplace(ep, v).first->second;
}

Q top_xi(StratumPtr S) {
    auto key = xi_key(S);
    auto& cache = EvalCache::instance();
    if (auto v = cache.xi(key)) return *v;
    Q val;
    int dim = S->dim();
    if (S->is_empty()) {
        val = 0;
    } else if (dim == 0) {
        val = 1;
    } else if (S->is_connected() && S->poles().empty() && dim >= 2 * S->genus().front()) {
        val = 0;
    } else {
        val = evaluate(pow(xi(S), dim));
    }
    cache.put_xi(key, val);
    return val;
}

Q top_xi_at_level(StratumPtr X, const EP& ep, int l) {
    if (l < 0 || l > ep.length()) throw NoSuchLevel("no level " + std::to_string(l));
    return top_xi(standard_level_data(X, ep, l).level.S);
}

TautClass c1_E(StratumPtr) {
    throw NotImplemented("c1_E: coefficient scheme not available");
}

}  // namespace strata
