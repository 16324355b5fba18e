#include <pdk/value.hpp>

#include <pdk/barrier.hpp>
#include <pdk/errors.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace pdk {

namespace {

// sum_i a_i e^{theta_i b} / (theta_i - eta)
double mixed_pole_sum(const ScaleBasis& qb, double b, double eta) {
    double s = 0.0;
    for (std::size_t i = 0; i < qb.roots.size(); ++i) {
        double gap = qb.roots[i] - eta;
        if (std::abs(gap) < 1e-12 * (1.0 + std::abs(eta)))
            throw numerical_error("scale-function root collision between rates");
        s += qb.coeffs[i] * std::exp(qb.roots[i] * b) / gap;
    }
    return s;
}

} // namespace

ValueFunction::ValueFunction(const ProblemSpec& spec, double b)
    : ValueFunction(build_spec_bases(spec), b) {}

ValueFunction::ValueFunction(const SpecBases& bases, double b) : bases_(bases), b_(b) {
    if (!(b >= 0.0) || !std::isfinite(b))
        throw std::invalid_argument("barrier level must be finite and nonnegative");

    const ScaleBasis& qb = bases_.q_basis;
    const ScaleBasis& qrb = bases_.qr_basis;
    const double q = bases_.spec.q;
    const double r = bases_.spec.r;
    const double phi_qr = qrb.phi();

    auto z = Z_phi(qb, phi_qr, r, b);
    const double D = phi_qr * z.second;
    if (!(D > 0.0)) throw numerical_error("degenerate barrier normalization");
    below_scale_ = r / D;

    ExpAffine below;
    below.a.resize(qb.roots.size());
    below.beta = qb.roots;
    for (std::size_t i = 0; i < qb.roots.size(); ++i) below.a[i] = below_scale_ * qb.coeffs[i];

    // Above the barrier, expand over the (q+r)-rates. The coefficient of the
    // growing rate cancels exactly; everything else decays, plus an affine
    // part whose slope is r/(q+r).
    const double Wb = qb.W(b);
    double S1 = 0.0, S2 = 0.0;
    for (std::size_t j = 0; j < qrb.roots.size(); ++j) {
        S1 += qrb.coeffs[j] / qrb.roots[j];
        S2 += qrb.coeffs[j] / (qrb.roots[j] * qrb.roots[j]);
    }
    const double S1_expect = 1.0 / (q + r);
    const double S2_expect =
        laplace_exponent_deriv(bases_.spec.model, 0.0) / ((q + r) * (q + r));
    if (std::abs(S1 - S1_expect) > 1e-8 * (1.0 + std::abs(S1_expect)) ||
        std::abs(S2 - S2_expect) > 1e-8 * (1.0 + std::abs(S2_expect)))
        throw numerical_error("rate expansion failed partial-fraction identities");

    const double C1 = r * S1;
    const double C0 = (r * r / D) * Wb * S1 + r * S2;

    ExpAffine above;
    above.shift = b;
    above.c1 = C1;
    above.c0 = C0 - C1 * b;
    for (std::size_t j = 0; j < qrb.roots.size(); ++j) {
        double eta = qrb.roots[j];
        double at = qrb.coeffs[j];
        double t1 = -(r * r / D) * at * mixed_pole_sum(qb, b, eta);
        double t2 = -(r * r / D) * Wb * at / eta;
        double t3 = -r * at / (eta * eta);
        double B = t1 + t2 + t3;
        if (eta > 0.0) {
            double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(C0) + 1.0;
            if (std::abs(B) > 1e-7 * scale)
                throw numerical_error("growing mode failed to cancel above the barrier");
            continue;
        }
        above.a.push_back(B);
        above.beta.push_back(eta);
    }

    double vb_below = below.eval(b);
    double vb_above = above.eval(b);
    if (std::abs(vb_below - vb_above) > 1e-8 * (1.0 + std::abs(vb_below)))
        throw numerical_error("value segments disagree at the barrier");
    double dv_below = below.eval(b, 1);
    double dv_above = above.eval(b, 1);
    if (std::abs(dv_below - dv_above) > 1e-7 * (1.0 + std::abs(dv_below)))
        throw numerical_error("value slope segments disagree at the barrier");

    ExpAffine zero;
    if (b > 0.0) {
        pw_.breaks = {0.0, b};
        pw_.segments = {zero, below, above};
    } else {
        pw_.breaks = {0.0};
        pw_.segments = {zero, above};
    }
}

double ValueFunction::derivative(double x, int order) const {
    if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be 1, 2, or 3");
    return pw_.eval(x, order);
}

double ValueFunction::derivative_below(double x, int order) const {
    if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be 1, 2, or 3");
    if (pw_.segments.size() == 2) {
        // b == 0: the sub-barrier segment is empty; report the scale-function
        // continuation so one-sided comparisons at 0 stay well defined.
        ExpAffine below;
        below.beta = bases_.q_basis.roots;
        for (std::size_t i = 0; i < below.beta.size(); ++i)
            below.a.push_back(below_scale_ * bases_.q_basis.coeffs[i]);
        return below.eval(x, order);
    }
    return pw_.segments[1].eval(x, order);
}

double ValueFunction::derivative_above(double x, int order) const {
    if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be 1, 2, or 3");
    return pw_.segments.back().eval(x, order);
}

double ValueFunction::second_derivative_jump() const {
    const ScaleBasis& qb = bases_.q_basis;
    const ScaleBasis& qrb = bases_.qr_basis;
    const double r = bases_.spec.r;
    const double phi_qr = qrb.phi();
    auto z = Z_phi(qb, phi_qr, r, b_);
    const double D = phi_qr * z.second;
    return r * qrb.w0 * (r * qb.W(b_, 1) / D - 1.0);
}

double ValueFunction::tail_slope() const {
    return bases_.spec.r / (bases_.spec.q + bases_.spec.r);
}

ClassicalValue::ClassicalValue(const ProblemSpec& spec)
    : ClassicalValue(build_basis(spec.model, spec.q), 0.0) {
    b_bar_ = bar_b(basis_);
    slope_at_bar_ = basis_.W(b_bar_, 1);
}

ClassicalValue::ClassicalValue(const ScaleBasis& q_basis, double b_bar)
    : basis_(q_basis), b_bar_(b_bar) {
    slope_at_bar_ = basis_.W(b_bar_, 1);
}

double ClassicalValue::operator()(double x) const {
    if (x < 0.0) return 0.0;
    if (x <= b_bar_) return basis_.W(x) / slope_at_bar_;
    return basis_.W(b_bar_) / slope_at_bar_ + (x - b_bar_);
}

double classical_value(const ProblemSpec& spec, double x) {
    ClassicalValue cv(spec);
    return cv(x);
}

} // namespace pdk
