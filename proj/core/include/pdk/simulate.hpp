#pragma once

#include <pdk/model.hpp>

#include <cstdint>
#include <vector>

namespace pdk {

struct SimConfig {
    long n_paths = 200000;
    double horizon_t = 0.0; // <= 0: pick from the truncation bound
    double dt = 1e-3;       // Gaussian substep cap, only used when sigma > 0
    std::uint64_t seed = 12345;
    bool antithetic = false;
    // Interior-minimum (bridge) correction for ruin between substeps. With it
    // the sigma > 0 scheme is exact in distribution at any dt; without it the
    // plain endpoint check under-detects ruin and overstates the value.
    bool bridge = true;
    int threads = 1;
};

struct DividendEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    double ruin_fraction = 0.0;
    double truncation_bound = 0.0;
    double horizon_t = 0.0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of expected discounted dividends under the barrier-b
// strategy started at x0. Per-path RNG streams keyed by path index make the
// result independent of thread count.
DividendEstimate simulate_value(const ProblemSpec& spec, double b, double x0,
                                const SimConfig& cfg);

struct PathEvent {
    enum class Kind { jump, decision_pay, decision_skip, ruin };
    double time = 0.0;
    Kind kind = Kind::jump;
    double surplus_before = 0.0;
    double surplus_after = 0.0;
    double paid = 0.0;
};

// Event log of one path, reproducing exactly what simulate_value's path at
// this index does.
std::vector<PathEvent> sample_path(const ProblemSpec& spec, double b, double x0,
                                   const SimConfig& cfg, std::uint64_t path_index);

struct ExitEstimate {
    double up_mean = 0.0, up_std_error = 0.0;     // E[e^{-q tau_b} ; hit b first]
    double down_mean = 0.0, down_std_error = 0.0; // E[e^{-q tau_0} ; ruin first]
    long n_paths = 0;
};

// Discounted two-sided exit functionals from [0, b]; cross-checks the scale
// fraction and its complement.
ExitEstimate simulate_exit(const LevyModel& model, double q, double x0, double b,
                           const SimConfig& cfg);

// Rigorous bound on the value truncated at the horizon: every dividend after
// T is discounted by at least e^{-qT}, and the post-T stream is dominated by
// the classical reflection value of the surplus at T.
double truncation_bound(const ProblemSpec& spec, double x0, double horizon);

// Smallest horizon (in steps of 10) whose truncation bound is below
// rel_target times a classical-value proxy of the estimate's size.
double auto_horizon(const ProblemSpec& spec, double x0, double rel_target = 5e-4);

} // namespace pdk
