#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "strata/euler.hpp"

namespace strata::cli {

// "2,1,-1,0" or "0,0;0"
std::vector<std::vector<int>> parse_signature(const std::string& text);
// "[(0,1),(0,2)];[(0,3)]"
std::vector<ResidueCondition> parse_residues(const std::string& text);
// "1,0"
Profile parse_profile(const std::string& text);

// xi, psi(i), D(p0,p1,...;c), + - * ^, rationals, parentheses
TautClass parse_expression(StratumPtr X, const std::string& text);

// whole command line; returns the process exit code
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strata::cli
