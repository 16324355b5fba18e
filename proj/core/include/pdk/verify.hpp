#pragma once

#include <pdk/expsum.hpp>
#include <pdk/scale.hpp>
#include <pdk/value.hpp>

#include <string>
#include <vector>

namespace pdk {

// Closed-form piecewise views of the scale family, for feeding the generator.
PiecewiseExpAffine piecewise_W(const ScaleBasis& basis);
PiecewiseExpAffine piecewise_Z(const ScaleBasis& basis);
PiecewiseExpAffine piecewise_Wbar(const ScaleBasis& basis);
PiecewiseExpAffine piecewise_Wbarbar(const ScaleBasis& basis);

// Residuals are scaled by 1 + max(|f(y)|, |rhs(y)|): the functions grow like
// e^{Phi y}, so an absolute tolerance would be meaningless at large y.
struct IdentityResult {
    std::string name;
    double max_scaled_residual = 0.0;
};

struct IdentitySuiteReport {
    std::vector<double> grid;
    std::vector<IdentityResult> results;
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Applies (L - q) to the two q-functions and the three (q+r)-functions and
// checks the five defining relations on the grid (default {0.25,...,10}).
IdentitySuiteReport generator_identity_suite(const SpecBases& bases,
                                             std::vector<double> grid = {},
                                             double tol = 1e-7);

struct MaxTerm {
    double value = 0.0;
    double argmax = 0.0;
};

// max over l in [0, x] of l + v(x - l) - v(x); grid scan plus golden-section
// refinement, robust without assuming unimodality.
MaxTerm best_payout_gain(const ValueFunction& v, double x);

struct VerifyOptions {
    std::vector<double> grid;      // empty: 64 log-spaced points
    int grid_points = 64;
    double gen_tol = 1e-7;         // scaled generator residual
    double slack_tol = 1e-6;       // gen + r * max-term must not exceed this
    double argmax_tol = 1e-4;
    double below_gain_tol = 1e-8;  // max-term below the barrier
    double slope_tol = 1e-8;
};

struct PointCheck {
    double x = 0.0;
    double generator_residual = 0.0; // scaled
    double hjb_slack = 0.0;
    double max_term = 0.0;
    double argmax = 0.0;
    double argmax_error = 0.0;
    double slope = 0.0;
};

struct VerificationReport {
    double b = 0.0;
    double b_star = 0.0;
    double b_bar = 0.0;
    std::vector<PointCheck> points;
    std::vector<std::string> slope_violations;
    double max_generator_residual = 0.0;
    double max_hjb_slack = 0.0;
    double max_argmax_error = 0.0;
    double smoothness_jump = 0.0;
    bool pass = false;
};

// Certifies the barrier-b strategy value against the variational inequality:
// generator residual on both sides, nonpositive slack including the best
// payout, payout location, and the slope envelope 0 <= v' <= 1 above the
// barrier with v' >= 1 below. A suboptimal b fails the slack, slope, or
// location checks even though its value function solves the same equation.
VerificationReport hjb_check(const SpecBases& bases, double b, const VerifyOptions& opt = {});
VerificationReport hjb_check(const ProblemSpec& spec, double b, const VerifyOptions& opt = {});

std::vector<double> default_verify_grid(double upper, int n = 64, double lo = 1e-3);

} // namespace pdk
