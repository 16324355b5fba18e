#include "pdk/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pdk/errors.hpp"
#include "pdk/roots.hpp"

namespace pdk {

namespace {

double powi(double base, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= base;
    return v;
}

} // namespace

double ScaleBasis::W(double x, int order) const {
    if (x < 0.0) return 0.0;
    const double ph = roots.back();
    double s = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i)
        s += coeffs[i] * powi(roots[i], order) * std::exp((roots[i] - ph) * x);
    return std::exp(ph * x) * s;
}

double ScaleBasis::Wbar(double x) const {
    if (x <= 0.0) return 0.0;
    const double ph = roots.back();
    double s = 0.0, c0 = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double at = coeffs[i] / roots[i];
        s += at * std::exp((roots[i] - ph) * x);
        c0 += at;
    }
    return std::exp(ph * x) * s - c0;
}

double ScaleBasis::Wbarbar(double x) const {
    if (x <= 0.0) return 0.0;
    const double ph = roots.back();
    double s = 0.0, c0 = 0.0, c1 = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double at2 = coeffs[i] / (roots[i] * roots[i]);
        s += at2 * std::exp((roots[i] - ph) * x);
        c0 += at2;
        c1 += coeffs[i] / roots[i];
    }
    return std::exp(ph * x) * s - c0 - c1 * x;
}

double ScaleBasis::Z(double x) const {
    if (x <= 0.0) return 1.0;
    return 1.0 + rate_p * Wbar(x);
}

double ScaleBasis::Zbar(double x) const {
    if (x <= 0.0) return x;
    return x + rate_p * Wbarbar(x);
}

double ScaleBasis::W_ratio(double x, double y) const {
    if (x < 0.0) return 0.0;
    const double ph = roots.back();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        sx += coeffs[i] * std::exp((roots[i] - ph) * x);
        sy += coeffs[i] * std::exp((roots[i] - ph) * y);
    }
    return std::exp(ph * (x - y)) * sx / sy;
}

namespace {

// One root of psi = p inside (lo, hi) where psi diverges to +inf at lo+ and
// -inf at hi- (an inter-pole gap) or any bracket with a sign change after the
// endpoints are nudged off the poles.
double root_in_gap(const LevyModel& m, double p, double lo, double hi) {
    const double gap = hi - lo;
    double dlo = gap * 1e-3, dhi = gap * 1e-3;
    auto f = [&](double t) { return laplace_exponent(m, t) - p; };
    for (int i = 0; i < 80 && f(lo + dlo) <= 0.0; ++i) dlo *= 0.5;
    for (int i = 0; i < 80 && f(hi - dhi) >= 0.0; ++i) dhi *= 0.5;
    const double a = lo + dlo, b = hi - dhi;
    if (!(f(a) > 0.0) || !(f(b) < 0.0)) {
        std::ostringstream os;
        os << "scale basis: no bracket for root in (" << lo << ", " << hi
           << ") at p=" << p << " (near-degenerate pole gap)";
        throw numerical_error(os.str());
    }
    return find_root(f, [&](double t) { return laplace_exponent_deriv(m, t); }, a, b);
}

} // namespace

double phi(const LevyModel& m, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("phi: p must be positive");
    auto f = [&](double t) { return laplace_exponent(m, t) - p; };
    double hi = 1.0;
    int guard = 0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw numerical_error("phi: bracket growth failed");
    }
    // psi(0) = 0 < p, so (0, hi] brackets the unique positive root.
    return find_root(f, [&](double t) { return laplace_exponent_deriv(m, t); }, 0.0, hi);
}

ScaleBasis build_basis(const LevyModel& m, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("build_basis: p must be positive");
    validate_or_throw(m);

    std::vector<double> poles;
    poles.reserve(m.jumps.size());
    for (const auto& j : m.jumps) poles.push_back(-j.lambda);
    std::sort(poles.begin(), poles.end());  // ascending: most negative first

    std::vector<double> roots;

    // One root below the lowest pole when the Brownian part is present.
    if (m.sigma > 0.0 && !poles.empty()) {
        auto f = [&](double t) { return laplace_exponent(m, t) - p; };
        const double top = poles.front();
        double off = std::max(1.0, std::abs(top));
        int guard = 0;
        while (f(top - off) < 0.0) {
            off *= 2.0;
            if (++guard > 200) throw numerical_error("build_basis: lower bracket growth failed");
        }
        double dhi = std::max(1e-3, std::abs(top) * 1e-3);
        for (int i = 0; i < 80 && f(top - dhi) >= 0.0; ++i) dhi *= 0.5;
        if (!(f(top - dhi) < 0.0))
            throw numerical_error("build_basis: cannot approach lowest pole");
        roots.push_back(find_root(f, [&](double t) { return laplace_exponent_deriv(m, t); },
                                  top - off, top - dhi));
    }

    // One root in each gap between consecutive poles, and one in (lowest
    // negative gap end, 0): psi runs from +inf down to -inf across each gap,
    // and from +inf at the last pole down to psi(0)=0 < p.
    for (std::size_t k = 0; k + 1 < poles.size(); ++k)
        roots.push_back(root_in_gap(m, p, poles[k], poles[k + 1]));
    if (!poles.empty())
        roots.push_back(root_in_gap(m, p, poles.back(), 0.0));

    roots.push_back(phi(m, p));
    if (m.sigma == 0.0 && poles.empty()) {
        // Pure drift: single root p/c.
        roots.clear();
        roots.push_back(p / m.c);
    } else if (m.sigma > 0.0 && poles.empty()) {
        // Brownian with drift: quadratic, one extra negative root.
        auto f = [&](double t) { return laplace_exponent(m, t) - p; };
        double lo = -1.0;
        int guard = 0;
        while (f(lo) < 0.0) {
            lo *= 2.0;
            if (++guard > 200) throw numerical_error("build_basis: negative bracket failed");
        }
        roots.insert(roots.begin(),
                     find_root(f, [&](double t) { return laplace_exponent_deriv(m, t); }, lo, 0.0));
    }
    std::sort(roots.begin(), roots.end());

    const std::size_t expected = m.jumps.size() + (m.sigma > 0.0 ? 2 : 1);
    if (roots.size() != expected)
        throw numerical_error("build_basis: unexpected root count");

    // Simple-root sanity: the partial-fraction form needs well-separated roots.
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        const double scale = std::max({1.0, std::abs(roots[i]), std::abs(roots[i + 1])});
        if (roots[i + 1] - roots[i] < 1e-9 * scale) {
            std::ostringstream os;
            os << "build_basis: near-degenerate roots " << roots[i] << " and "
               << roots[i + 1] << " at p=" << p;
            throw numerical_error(os.str());
        }
    }

    ScaleBasis b;
    b.rate_p = p;
    b.roots = roots;
    b.coeffs.reserve(roots.size());
    for (double t : roots) b.coeffs.push_back(1.0 / laplace_exponent_deriv(m, t));

    if (m.sigma > 0.0) {
        b.w0 = 0.0;
        b.w0_prime = 2.0 / (m.sigma * m.sigma);
    } else {
        b.w0 = 1.0 / m.c;
        b.w0_prime = (p + m.total_jump_rate()) / (m.c * m.c);
    }

    // Structural invariants of the representation.
    int positives = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (b.roots[i] > 0.0) ++positives;
        if (b.roots[i] < 0.0 && !(b.coeffs[i] < 0.0))
            throw numerical_error("build_basis: negative root with non-negative coefficient");
    }
    if (positives != 1 || !(b.coeffs.back() > 0.0))
        throw numerical_error("build_basis: positive-root structure violated");
    double sum_a = 0.0, sum_at = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        sum_a += b.coeffs[i];
        sum_at += b.coeffs[i] * b.roots[i];
    }
    if (std::abs(sum_a - b.w0) > 1e-9 * std::max(1.0, std::abs(b.w0)))
        throw numerical_error("build_basis: coefficient sum does not match W(0+)");
    if (std::abs(sum_at - b.w0_prime) > 1e-8 * std::max(1.0, std::abs(b.w0_prime)))
        throw numerical_error("build_basis: coefficient-root sum does not match W'(0+)");
    return b;
}

SpecBases build_spec_bases(const ProblemSpec& s) {
    validate_or_throw(s);
    return SpecBases{s, build_basis(s.model, s.q), build_basis(s.model, s.q + s.r)};
}

std::pair<double, double> Z_phi(const ScaleBasis& q_basis, double phi_qr, double r, double x) {
    if (x < 0.0) {
        const double v = std::exp(phi_qr * x);
        return {v, phi_qr * v};
    }
    double v = 0.0, d = 0.0;
    for (std::size_t i = 0; i < q_basis.roots.size(); ++i) {
        const double t = q_basis.coeffs[i] * std::exp(q_basis.roots[i] * x) /
                         (phi_qr - q_basis.roots[i]);
        v += t;
        d += t * q_basis.roots[i];
    }
    return {r * v, r * d};
}

std::pair<double, double> Z_phi(const SpecBases& bases, double x) {
    return Z_phi(bases.q_basis, bases.phi_qr(), bases.spec.r, x);
}

std::pair<double, double> Z_phi(const ProblemSpec& s, double x) {
    return Z_phi(build_spec_bases(s), x);
}

std::pair<double, double> two_sided_exit(const ScaleBasis& q_basis, double x, double b) {
    if (!(b > 0.0)) throw std::domain_error("two_sided_exit: b must be positive");
    if (x < 0.0 || x > b) throw std::domain_error("two_sided_exit: x must lie in [0, b]");
    const double up = q_basis.W_ratio(x, b);
    const double down = q_basis.Z(x) - q_basis.Z(b) * up;
    return {up, down};
}

std::pair<double, double> two_sided_exit(const ProblemSpec& s, double x, double b) {
    return two_sided_exit(build_basis(s.model, s.q), x, b);
}

} // namespace pdk
