#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strata/clutch_split.hpp"

namespace strata {

// psi-monomial on the representative graph of an enhanced profile.
// Obtain through additive_generator(); equal inputs give the same object.
struct AdditiveGenerator {
    StratumPtr X = nullptr;
    EnhancedProfile ep;
    std::map<int, int> legs;  // leg -> exponent

    int psi_degree() const;
    int degree() const { return ep.length() + psi_degree(); }
    std::string str() const;
    auto operator<=>(const AdditiveGenerator& o) const {
        if (auto c = ep <=> o.ep; c != 0) return c;
        return legs <=> o.legs;
    }
    bool operator==(const AdditiveGenerator& o) const { return ep == o.ep && legs == o.legs; }
};

using AGRef = const AdditiveGenerator*;

AGRef additive_generator(StratumPtr X, const EnhancedProfile& ep, const std::map<int, int>& legs = {});

class TautClass {
public:
    StratumPtr X = nullptr;
    std::vector<std::pair<Q, AGRef>> terms;

    TautClass() = default;
    explicit TautClass(StratumPtr X) : X(X) {}
    TautClass(StratumPtr X, std::vector<std::pair<Q, AGRef>> t);

    static TautClass zero(StratumPtr X) { return TautClass(X); }
    static TautClass one(StratumPtr X);
    static TautClass from_graph(StratumPtr X, const EnhancedProfile& ep);

    // merges equal generators, drops zero coefficients and generators that
    // exceed the dimension of one of their levels
    void reduce();
    bool is_zero() const { return terms.empty(); }
    bool is_equidimensional() const;
    TautClass degree(int d) const;
    // each monomial replaced by the smallest of its automorphic images
    TautClass canonical() const;
    std::string str() const;

    TautClass operator+(const TautClass& o) const;
    TautClass operator-(const TautClass& o) const;
    TautClass operator-() const;
    TautClass& operator+=(const TautClass& o);
    TautClass operator*(const Q& c) const;
    // equality of the pushed forward classes monomial by monomial
    bool operator==(const TautClass& o) const;
};

// sum without intermediate reduces
TautClass taut_sum(StratumPtr X, const std::vector<TautClass>& parts);

// transversal common normal bundle marker, never a class
struct Unit {};
using Cnb = std::variant<Unit, TautClass>;

// per-graph level data for the representative of ep
struct LevelInfo {
    std::map<int, int> leg_level;  // leg -> relative level
    std::vector<int> level_dim;    // dimension of each standardized level
};
const LevelInfo& level_info(StratumPtr X, const EnhancedProfile& ep);

TautClass psi(StratumPtr X, int leg);
// default point: fewest BICs with the point on bottom level, then smallest
PointRef default_xi_point(StratumPtr X);
TautClass xi(StratumPtr X);
TautClass xi_with_leg(StratumPtr X, PointRef p);
TautClass xi_at_level(StratumPtr X, int l, const EnhancedProfile& ep, std::optional<int> leg = {});
TautClass xi_at_level_pow(StratumPtr X, int l, const EnhancedProfile& ep, int k);
TautClass calL(StratumPtr X, const EnhancedProfile& ep, int l);

// BIC j of the standardized level l of ep glued into ep: the new enhanced
// profile and the multiplicity of the pulled back divisor
struct GluedBic {
    EnhancedProfile ep;
    Q weight;
};
GluedBic glue_bic_at_level(StratumPtr X, const EnhancedProfile& ep, int l, int j);

TautClass normal_bundle(StratumPtr X, const EnhancedProfile& ep, const EnhancedProfile& ambient = {});
Cnb cnb(StratumPtr X, const EnhancedProfile& ep1, const EnhancedProfile& ep2,
        const EnhancedProfile& ambient = {});
// pullback of A to a degeneration of its graph, averaged over undegeneration maps
TautClass base_pullback(AGRef A, const EnhancedProfile& big);
TautClass gen_pullback(AGRef A, const EnhancedProfile& target, const EnhancedProfile& ambient = {});
TautClass gen_pullback_taut(const TautClass& t, const EnhancedProfile& target,
                            const EnhancedProfile& ambient = {});
TautClass intersection_AG(AGRef A, AGRef B, const EnhancedProfile& ambient = {});
TautClass intersection(const TautClass& a, const TautClass& b, const EnhancedProfile& ambient = {});
TautClass pow(const TautClass& t, int k, const EnhancedProfile& ambient = {});
TautClass operator*(const TautClass& a, const TautClass& b);

// class cut out by one further residue condition
TautClass res_stratum_class(StratumPtr X, const ResidueCondition& rc);
// does the condition hold automatically on BIC b (rank test on the top level)
bool res_condition_automatic(StratumPtr X, const EmbeddedLevelGraph& B, const ResidueCondition& rc);

// (prod of prongs) / ((prod of ell over the profile) * |Aut|)
Q stack_factor(StratumPtr X, const EnhancedProfile& ep);
int ell_of_bic(StratumPtr X, int b);

// integral of xi^d over the standardized level l of ep, d its dimension; cached
Q top_xi_at_level(StratumPtr X, const EnhancedProfile& ep, int l);
// integral of xi^dim over S itself; cached under the level key
Q top_xi(StratumPtr S);

// first Chern class of the log cotangent bundle; the coefficient scheme is not
// part of this library
TautClass c1_E(StratumPtr X);

}  // namespace strata
