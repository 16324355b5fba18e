#include <pdk/simulate.hpp>

#include <pdk/barrier.hpp>
#include <pdk/rng.hpp>
#include <pdk/value.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace pdk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PathOutcome {
    double pv = 0.0;
    bool ruined = false;
};

int pick_jump_component(const LevyModel& m, double total_rate, PathRng& rng) {
    if (m.jumps.size() == 1) return 0;
    double u = rng.uniform() * total_rate;
    double acc = 0.0;
    for (std::size_t i = 0; i < m.jumps.size(); ++i) {
        acc += m.jumps[i].rate;
        if (u <= acc) return static_cast<int>(i);
    }
    return static_cast<int>(m.jumps.size()) - 1;
}

// Advance a sigma > 0 surplus from t to t_target in equal substeps of length
// at most dt. Returns false and sets ruin_time if the path dies on the way.
bool advance_diffusion(double& X, double t, double t_target, double c, double sigma, double dt,
                       bool bridge, PathRng& rng, double& ruin_time, double& pre_ruin) {
    double remaining = t_target - t;
    if (remaining <= 0.0) return true;
    long nsub = static_cast<long>(std::ceil(remaining / dt));
    if (nsub < 1) nsub = 1;
    double h = remaining / static_cast<double>(nsub);
    double srt = sigma * std::sqrt(h);
    double inv = 2.0 / (sigma * sigma * h);
    for (long k = 0; k < nsub; ++k) {
        double xnew = X + c * h + srt * rng.normal();
        if (bridge) {
            if (xnew <= 0.0) {
                ruin_time = t + (k + 1) * h;
                pre_ruin = X;
                X = xnew;
                return false;
            }
            double expo = X * xnew * inv;
            // Interior crossing probability exp(-expo); skip the draw when it
            // cannot fire at double precision.
            if (expo < 40.0 && rng.uniform() < std::exp(-expo)) {
                ruin_time = t + (k + 1) * h;
                pre_ruin = X;
                X = 0.0;
                return false;
            }
        } else if (xnew < 0.0) {
            ruin_time = t + (k + 1) * h;
            pre_ruin = X;
            X = xnew;
            return false;
        }
        X = xnew;
    }
    return true;
}

PathOutcome run_value_path(const ProblemSpec& spec, double b, double x0, const SimConfig& cfg,
                           double horizon, PathRng& rng, std::vector<PathEvent>* log) {
    const LevyModel& m = spec.model;
    const double q = spec.q;
    const double kappa = m.total_jump_rate();

    PathOutcome out;
    if (x0 < 0.0) {
        out.ruined = true;
        if (log) log->push_back({0.0, PathEvent::Kind::ruin, x0, x0, 0.0});
        return out;
    }

    double t = 0.0, X = x0;
    double next_jump = (kappa > 0.0) ? rng.exponential(kappa) : kInf;
    double next_dec = rng.exponential(spec.r);

    while (t < horizon) {
        double t_next = std::min({next_jump, next_dec, horizon});
        if (m.sigma > 0.0) {
            double ruin_time = 0.0;
            double before = X;
            if (!advance_diffusion(X, t, t_next, m.c, m.sigma, cfg.dt, cfg.bridge, rng,
                                   ruin_time, before)) {
                out.ruined = true;
                if (log)
                    log->push_back({ruin_time, PathEvent::Kind::ruin, before,
                                    std::min(X, 0.0), 0.0});
                return out;
            }
        } else {
            X += m.c * (t_next - t);
        }
        t = t_next;
        if (t >= horizon) break;

        if (next_jump <= next_dec) {
            int i = pick_jump_component(m, kappa, rng);
            double size = rng.exponential(m.jumps[i].lambda);
            double before = X;
            X -= size;
            if (log) log->push_back({t, PathEvent::Kind::jump, before, X, 0.0});
            if (X < 0.0) {
                out.ruined = true;
                if (log) log->push_back({t, PathEvent::Kind::ruin, X, X, 0.0});
                return out;
            }
            next_jump = t + rng.exponential(kappa);
        } else {
            if (X > b) {
                double paid = X - b;
                out.pv += std::exp(-q * t) * paid;
                if (log) log->push_back({t, PathEvent::Kind::decision_pay, X, b, paid});
                X = b;
            } else if (log) {
                log->push_back({t, PathEvent::Kind::decision_skip, X, X, 0.0});
            }
            next_dec = t + rng.exponential(spec.r);
        }
    }
    return out;
}

void validate_sim_args(const ProblemSpec& spec, double b, const SimConfig& cfg) {
    validate_or_throw(spec);
    if (std::isnan(b) || b < 0.0)
        throw std::invalid_argument("barrier level must be nonnegative (or infinite)");
    if (cfg.n_paths <= 0) throw std::invalid_argument("n_paths must be positive");
    if (spec.model.sigma > 0.0 && !(cfg.dt > 0.0))
        throw std::invalid_argument("dt must be positive when sigma > 0");
}

template <class Fn>
void parallel_paths(long n, int threads, Fn&& body) {
    int k = std::max(1, threads);
    if (k == 1) {
        body(0L, n);
        return;
    }
    std::vector<std::thread> pool;
    long chunk = (n + k - 1) / k;
    for (int w = 0; w < k; ++w) {
        long lo = w * chunk;
        long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace

double truncation_bound(const ProblemSpec& spec, double x0, double horizon) {
    ClassicalValue cv(spec);
    double vbar = cv(cv.barrier());
    double drift_mass = spec.model.c * horizon +
                        spec.model.sigma * std::sqrt(2.0 * horizon / M_PI);
    return std::exp(-spec.q * horizon) * (vbar + std::max(x0, 0.0) + drift_mass);
}

double auto_horizon(const ProblemSpec& spec, double x0, double rel_target) {
    ClassicalValue cv(spec);
    double ref = std::max(0.1, spec.r / (spec.q + spec.r) * cv(std::max(x0, 0.0)));
    double T = 50.0;
    while (T < 4000.0 && truncation_bound(spec, x0, T) > rel_target * ref) T += 10.0;
    return T;
}

DividendEstimate simulate_value(const ProblemSpec& spec, double b, double x0,
                                const SimConfig& cfg) {
    validate_sim_args(spec, b, cfg);

    long n = cfg.n_paths;
    if (cfg.antithetic && (n & 1)) ++n;
    double horizon = cfg.horizon_t > 0.0 ? cfg.horizon_t : auto_horizon(spec, x0);

    std::vector<double> pv(n);
    std::vector<unsigned char> ruined(n);
    parallel_paths(n, cfg.threads, [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) {
            std::uint64_t stream = cfg.antithetic ? static_cast<std::uint64_t>(p >> 1)
                                                  : static_cast<std::uint64_t>(p);
            PathRng rng(cfg.seed, stream, cfg.antithetic && (p & 1));
            PathOutcome o = run_value_path(spec, b, x0, cfg, horizon, rng, nullptr);
            pv[p] = o.pv;
            ruined[p] = o.ruined ? 1 : 0;
        }
    });

    DividendEstimate est;
    est.n_paths = n;
    est.horizon_t = horizon;
    est.seed = cfg.seed;
    est.truncation_bound = truncation_bound(spec, x0, horizon);

    double sum = 0.0;
    long nruin = 0;
    for (long p = 0; p < n; ++p) {
        sum += pv[p];
        nruin += ruined[p];
    }
    est.mean = sum / static_cast<double>(n);
    est.ruin_fraction = static_cast<double>(nruin) / static_cast<double>(n);

    // Antithetic pairs are dependent by construction; the standard error uses
    // the independent pair averages.
    double ss = 0.0;
    long m_eff = cfg.antithetic ? n / 2 : n;
    if (m_eff > 1) {
        for (long k = 0; k < m_eff; ++k) {
            double v = cfg.antithetic ? 0.5 * (pv[2 * k] + pv[2 * k + 1]) : pv[k];
            double d = v - est.mean;
            ss += d * d;
        }
        est.std_error = std::sqrt(ss / (static_cast<double>(m_eff) *
                                        static_cast<double>(m_eff - 1)));
    }
    return est;
}

std::vector<PathEvent> sample_path(const ProblemSpec& spec, double b, double x0,
                                   const SimConfig& cfg, std::uint64_t path_index) {
    validate_sim_args(spec, b, cfg);
    double horizon = cfg.horizon_t > 0.0 ? cfg.horizon_t : auto_horizon(spec, x0);
    std::uint64_t stream = cfg.antithetic ? (path_index >> 1) : path_index;
    PathRng rng(cfg.seed, stream, cfg.antithetic && (path_index & 1));
    std::vector<PathEvent> log;
    run_value_path(spec, b, x0, cfg, horizon, rng, &log);
    return log;
}

ExitEstimate simulate_exit(const LevyModel& model, double q, double x0, double b,
                           const SimConfig& cfg) {
    validate_or_throw(model);
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("upper level must be positive");
    if (x0 < 0.0 || x0 > b) throw std::invalid_argument("start must lie in [0, b]");
    if (cfg.n_paths <= 0) throw std::invalid_argument("n_paths must be positive");
    if (model.sigma > 0.0 && !(cfg.dt > 0.0))
        throw std::invalid_argument("dt must be positive when sigma > 0");

    const double kappa = model.total_jump_rate();
    const double horizon = cfg.horizon_t > 0.0 ? cfg.horizon_t : 2000.0;
    long n = cfg.n_paths;

    std::vector<double> up(n), down(n);
    parallel_paths(n, cfg.threads, [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) {
            PathRng rng(cfg.seed, static_cast<std::uint64_t>(p), false);
            double t = 0.0, X = x0;
            double u_val = 0.0, d_val = 0.0;
            double next_jump = (kappa > 0.0) ? rng.exponential(kappa) : kInf;
            bool done = false;
            while (!done && t < horizon) {
                if (model.sigma > 0.0) {
                    double t_next = std::min(next_jump, horizon);
                    double remaining = t_next - t;
                    long nsub = std::max(1L, static_cast<long>(std::ceil(remaining / cfg.dt)));
                    double h = remaining / static_cast<double>(nsub);
                    double srt = model.sigma * std::sqrt(h);
                    double inv = 2.0 / (model.sigma * model.sigma * h);
                    for (long k = 0; k < nsub && !done; ++k) {
                        double xnew = X + model.c * h + srt * rng.normal();
                        double tk = t + (k + 1) * h;
                        if (xnew <= 0.0) {
                            d_val = std::exp(-q * tk);
                            done = true;
                        } else if (xnew >= b) {
                            u_val = std::exp(-q * tk);
                            done = true;
                        } else {
                            double expo = X * xnew * inv;
                            if (expo < 40.0 && rng.uniform() < std::exp(-expo)) {
                                d_val = std::exp(-q * tk);
                                done = true;
                            }
                        }
                        X = xnew;
                    }
                    t = t_next;
                } else {
                    // Deterministic climb: reaches b before the jump, or jumps.
                    double t_hit = t + (b - X) / model.c;
                    if (t_hit <= next_jump) {
                        u_val = std::exp(-q * t_hit);
                        done = true;
                    } else {
                        X += model.c * (next_jump - t);
                        t = next_jump;
                    }
                }
                if (done || t >= horizon) break;
                if (t == next_jump) {
                    int i = pick_jump_component(model, kappa, rng);
                    X -= rng.exponential(model.jumps[i].lambda);
                    if (X < 0.0) {
                        d_val = std::exp(-q * t);
                        done = true;
                    }
                    next_jump = t + rng.exponential(kappa);
                }
            }
            up[p] = u_val;
            down[p] = d_val;
        }
    });

    ExitEstimate est;
    est.n_paths = n;
    double su = 0.0, sd = 0.0;
    for (long p = 0; p < n; ++p) {
        su += up[p];
        sd += down[p];
    }
    est.up_mean = su / n;
    est.down_mean = sd / n;
    double ssu = 0.0, ssd = 0.0;
    for (long p = 0; p < n; ++p) {
        ssu += (up[p] - est.up_mean) * (up[p] - est.up_mean);
        ssd += (down[p] - est.down_mean) * (down[p] - est.down_mean);
    }
    est.up_std_error = std::sqrt(ssu / (static_cast<double>(n) * (n - 1.0)));
    est.down_std_error = std::sqrt(ssd / (static_cast<double>(n) * (n - 1.0)));
    return est;
}

} // namespace pdk
