#pragma once

#include <stdexcept>
#include <string>

namespace pdk {

// Thrown when an algorithm cannot deliver a trustworthy result (root bracketing
// failure, near-degenerate basis, non-convergence). Input/validation problems
// throw std::invalid_argument instead; the CLI maps the two to different exit
// codes.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pdk
