#include "pdk/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdk {

double LevyModel::total_jump_rate() const {
    double k = 0.0;
    for (const auto& j : jumps) k += j.rate;
    return k;
}

double LevyModel::mean_jump_size() const {
    const double k = total_jump_rate();
    if (k <= 0.0) return 0.0;
    double m = 0.0;
    for (const auto& j : jumps) m += (j.rate / k) / j.lambda;
    return m;
}

VariationClass variation_class(const LevyModel& m) {
    return m.sigma > 0.0 ? VariationClass::unbounded : VariationClass::bounded;
}

std::vector<std::string> validate(const LevyModel& m) {
    std::vector<std::string> out;
    if (!(m.sigma >= 0.0) || !std::isfinite(m.sigma))
        out.push_back("sigma must be finite and >= 0");
    if (!std::isfinite(m.c))
        out.push_back("drift c must be finite");
    if (m.sigma == 0.0 && !(m.c > 0.0))
        out.push_back("drift must be positive when sigma=0");
    for (std::size_t i = 0; i < m.jumps.size(); ++i) {
        if (!(m.jumps[i].rate > 0.0) || !std::isfinite(m.jumps[i].rate))
            out.push_back("jump rate must be positive (term " + std::to_string(i) + ")");
        if (!(m.jumps[i].lambda > 0.0) || !std::isfinite(m.jumps[i].lambda))
            out.push_back("jump lambda must be positive (term " + std::to_string(i) + ")");
    }
    for (std::size_t i = 0; i < m.jumps.size(); ++i)
        for (std::size_t j = i + 1; j < m.jumps.size(); ++j)
            if (m.jumps[i].lambda == m.jumps[j].lambda)
                out.push_back("duplicate exponential parameters (terms " +
                              std::to_string(i) + "," + std::to_string(j) + ")");
    return out;
}

static void throw_joined(const std::vector<std::string>& v) {
    if (v.empty()) return;
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << "; ";
        os << v[i];
    }
    throw std::invalid_argument(os.str());
}

void validate_or_throw(const LevyModel& m) { throw_joined(validate(m)); }

double laplace_exponent(const LevyModel& m, double theta) {
    double s = m.c * theta + 0.5 * m.sigma * m.sigma * theta * theta;
    for (const auto& j : m.jumps) {
        const double den = j.lambda + theta;
        if (den == 0.0)
            throw std::domain_error("laplace exponent evaluated at pole theta = " +
                                    std::to_string(theta));
        s -= j.rate * theta / den;
    }
    return s;
}

double laplace_exponent_deriv(const LevyModel& m, double theta) {
    double s = m.c + m.sigma * m.sigma * theta;
    for (const auto& j : m.jumps) {
        const double den = j.lambda + theta;
        if (den == 0.0)
            throw std::domain_error("laplace exponent derivative at pole theta = " +
                                    std::to_string(theta));
        s -= j.rate * j.lambda / (den * den);
    }
    return s;
}

std::vector<std::string> validate(const ProblemSpec& s) {
    std::vector<std::string> out = validate(s.model);
    if (!(s.q > 0.0) || !std::isfinite(s.q)) out.push_back("q must be positive");
    if (!(s.r > 0.0) || !std::isfinite(s.r)) out.push_back("r must be positive");
    return out;
}

void validate_or_throw(const ProblemSpec& s) { throw_joined(validate(s)); }

} // namespace pdk
