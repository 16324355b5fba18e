#pragma once

#include <pdk/model.hpp>

#include <string>
#include <vector>

namespace pdk {

// Named example models: case1..case3 carry a Gaussian component, the primed
// variants case1p..case3p are pure-jump. All share a unit-rate, unit-mean
// jump term with q = 0.05 and r = 0.5.
ProblemSpec preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace pdk
