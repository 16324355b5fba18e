#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace pdk {

// f(x) = sum_k a[k] * exp(beta[k]*(x - shift)) + c0 + c1*x on one segment.
// The shift anchors exponentials at the segment's left edge so that steep
// negative rates (|beta| ~ 100) never produce huge intermediate factors.
struct ExpAffine {
    std::vector<double> a;
    std::vector<double> beta;
    double shift = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;

    double eval(double x, int order = 0) const {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            double t = a[k] * std::exp(beta[k] * (x - shift));
            for (int i = 0; i < order; ++i) t *= beta[k];
            s += t;
        }
        if (order == 0) s += c0 + c1 * x;
        else if (order == 1) s += c1;
        return s;
    }
};

// Piecewise function over segments (-inf, breaks[0]), [breaks[0], breaks[1]),
// ..., [breaks.back(), inf). segments.size() == breaks.size() + 1. Evaluation
// at a breakpoint uses the right segment.
struct PiecewiseExpAffine {
    std::vector<double> breaks;
    std::vector<ExpAffine> segments;

    const ExpAffine& segment_at(double x) const {
        std::size_t k = 0;
        while (k < breaks.size() && x >= breaks[k]) ++k;
        return segments[k];
    }
    double eval(double x, int order = 0) const { return segment_at(x).eval(x, order); }
};

} // namespace pdk
