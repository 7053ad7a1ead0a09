#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "strata/evaluation_cache.hpp"

namespace strata {

// one graph's contribution to the Euler characteristic
struct EulerTerm {
    EnhancedProfile ep;
    Q ell_product = 1;  // product of ell over the BICs of the profile
    int n_top = 0;      // dimension of the top level of the first BIC, plus one
    Q stack = 1;        // stack_factor of the graph
    std::vector<Q> level_values;  // top xi power on each level (cut at the first zero)

    Q value() const;
};

// trace, when given, receives the progress lines of the computation
EulerTerm euler_term(StratumPtr X, const EnhancedProfile& ep, std::ostream* trace = nullptr);
Q euler_characteristic(StratumPtr X, std::ostream* trace = nullptr);

// stratum, genus, dimension and graph counts per codimension
std::string info(StratumPtr X);

}  // namespace strata
