#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "strata/common.hpp"

namespace strata {

class Signature {
public:
    explicit Signature(std::vector<int> orders);

    const std::vector<int>& orders() const { return orders_; }
    int operator[](int i) const { return orders_.at(i); }
    int g() const { return genus_; }
    int n() const { return static_cast<int>(orders_.size()); }
    int p() const { return static_cast<int>(pole_ind_.size()); }
    int z() const { return static_cast<int>(zero_ind_.size()); }
    const std::vector<int>& pole_ind() const { return pole_ind_; }
    const std::vector<int>& zero_ind() const { return zero_ind_; }
    std::string str() const;

    auto operator<=>(const Signature& o) const { return orders_ <=> o.orders_; }
    bool operator==(const Signature& o) const { return orders_ == o.orders_; }

private:
    std::vector<int> orders_;
    int genus_ = 0;
    std::vector<int> pole_ind_;
    std::vector<int> zero_ind_;
};

using ResidueCondition = std::vector<PointRef>;

struct BicData;
struct DegenData;
struct TautData;

class GeneralisedStratum;
using StratumPtr = GeneralisedStratum*;

// Interned: equal (signatures, residue conditions) give the same pointer.
StratumPtr make_stratum(const std::vector<std::vector<int>>& sigs,
                        const std::vector<ResidueCondition>& res_cond = {});
StratumPtr make_stratum(const std::vector<int>& sig,
                        const std::vector<ResidueCondition>& res_cond = {});
inline StratumPtr make_stratum(std::initializer_list<int> sig) {
    return make_stratum(std::vector<int>(sig));
}

class GeneralisedStratum {
public:
    GeneralisedStratum(std::vector<Signature> sigs, std::vector<ResidueCondition> rcs);

    const std::vector<Signature>& sig_list() const { return sigs_; }
    const std::vector<ResidueCondition>& res_cond() const { return rcs_; }
    int num_components() const { return static_cast<int>(sigs_.size()); }
    bool is_connected() const { return sigs_.size() == 1; }
    int n() const;
    std::vector<int> genus() const;
    int order(PointRef p) const;
    bool has_point(PointRef p) const;
    std::vector<PointRef> points() const;
    std::vector<PointRef> poles() const;
    std::vector<PointRef> simple_poles() const;
    // poles not in any residue condition
    std::vector<PointRef> free_poles() const;

    std::vector<std::vector<int>> residue_matrix() const;
    std::vector<std::vector<int>> full_residue_matrix() const;
    std::vector<int> residue_row(const ResidueCondition& rc) const;
    int dim() const { return dim_; }
    bool is_empty() const { return empty_; }
    bool residue_zero(PointRef p) const;

    // sorted signature tuples + conditions; the registry key
    std::string key_str() const;
    std::string str() const;
    std::string sig_str() const;
    std::string rc_str() const;

    // lazily built by the other modules
    mutable std::shared_ptr<BicData> bic_data;
    mutable std::shared_ptr<DegenData> degen_data;
    mutable std::shared_ptr<TautData> taut_data;

private:
    std::vector<Signature> sigs_;
    std::vector<ResidueCondition> rcs_;
    int dim_ = 0;
    bool empty_ = false;
};

std::string rc_list_str(const std::vector<ResidueCondition>& rcs);

}  // namespace strata
