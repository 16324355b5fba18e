#pragma once

#include <string>
#include <vector>

namespace pdk {

struct JumpTerm {
    double rate;    // arrival intensity kappa_i of this mixture component
    double lambda;  // exponential parameter of the (downward) jump size
};

// Spectrally negative Levy process: upward drift c, Brownian coefficient
// sigma, and a finite hyperexponential mixture of downward compound-Poisson
// jumps. The Laplace exponent is
//   psi(theta) = c*theta + (sigma^2/2)*theta^2 - sum_i rate_i*theta/(lambda_i+theta),
// a rational function with poles at -lambda_i.
struct LevyModel {
    double sigma = 0.0;
    double c = 0.0;
    std::vector<JumpTerm> jumps;

    double total_jump_rate() const;
    double mean_jump_size() const;  // sum_i (rate_i/kappa) / lambda_i
};

enum class VariationClass { bounded, unbounded };

// Paths have unbounded variation exactly when the Brownian part is present.
VariationClass variation_class(const LevyModel& m);

// Returns every violated invariant as a message; empty means valid.
std::vector<std::string> validate(const LevyModel& m);
void validate_or_throw(const LevyModel& m);  // std::invalid_argument with all messages

// psi(theta). Defined for any theta except the poles {-lambda_i}; evaluation
// below the lowest pole is needed when sigma > 0 (one basis root lives there).
// Throws std::domain_error at a pole.
double laplace_exponent(const LevyModel& m, double theta);
double laplace_exponent_deriv(const LevyModel& m, double theta);

struct ProblemSpec {
    LevyModel model;
    double q = 0.0;  // discount rate
    double r = 0.0;  // Poisson observation (decision) rate
};

std::vector<std::string> validate(const ProblemSpec& s);
void validate_or_throw(const ProblemSpec& s);

} // namespace pdk
