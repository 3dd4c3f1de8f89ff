#pragma once

#include "vlambda/bounds.hpp"
#include "vlambda/weights.hpp"

#include <map>
#include <string>

namespace vlambda::cli {

/// "a=1,b=2" -> {a: 1, b: 2}; throws Error(invalid_argument) on malformed input.
std::map<std::string, double> parse_key_values(const std::string& text);

/// bernardi:c=0 | hohlov:a=,b=,c= | carlson-shaffer:b=,c= | custom:file=PATH
WeightSpec parse_weight(const std::string& descriptor);

/// a=..,b=..,c=.. for the Hohlov theorem.
HohlovParams parse_hohlov(const std::string& text, double beta1);

} // namespace vlambda::cli
