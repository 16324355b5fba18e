#include <CLI11.hpp>
#include <json.hpp>

#include <pdk/barrier.hpp>
#include <pdk/errors.hpp>
#include <pdk/json_io.hpp>
#include <pdk/model.hpp>
#include <pdk/presets.hpp>
#include <pdk/scale.hpp>
#include <pdk/simulate.hpp>
#include <pdk/sweep.hpp>
#include <pdk/value.hpp>
#include <pdk/verify.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ojson = nlohmann::ordered_json;

ojson embed(const std::string& serialized) { return ojson::parse(serialized); }

int resolve_threads(int cli_value) {
    if (cli_value > 0) return cli_value;
    if (const char* env = std::getenv("PDK_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

pdk::ProblemSpec load_spec(const std::string& preset, const std::string& config_path) {
    if (!preset.empty()) return pdk::preset(preset);
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open configuration file '" + config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return pdk::spec_from_json(ss.str());
}

std::vector<double> parse_grid(const std::string& text) {
    double lo = 0.0, hi = 0.0;
    long n = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &n, &extra) != 3 || n < 1)
        throw std::invalid_argument("grid must have the form min:max:count, got '" + text + "'");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (long i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse barrier list entry '" + tok + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("empty barrier list");
    return out;
}

ojson json_number_or_inf(double v) {
    if (std::isinf(v)) return ojson(v > 0 ? "inf" : "-inf");
    return ojson(v);
}

const char* event_name(pdk::PathEvent::Kind k) {
    switch (k) {
        case pdk::PathEvent::Kind::jump: return "jump";
        case pdk::PathEvent::Kind::decision_pay: return "decision_pay";
        case pdk::PathEvent::Kind::decision_skip: return "decision_nopay";
        case pdk::PathEvent::Kind::ruin: return "ruin";
    }
    return "?";
}

struct CommonArgs {
    std::string preset;
    std::string config_path;
    int threads = 0;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    auto* p = cmd->add_option("--preset", args.preset, "Named example model")
                  ->check(CLI::IsMember(pdk::preset_names()));
    auto* c = cmd->add_option("--config", args.config_path, "Model configuration JSON file");
    p->excludes(c);
    cmd->add_option("--threads", args.threads,
                    "Worker threads (default: PDK_THREADS or 1; results do not depend on this)");
    cmd->add_flag("--quiet", args.quiet, "Suppress progress notes on stderr");
}

void require_spec(const CommonArgs& args) {
    if (args.preset.empty() && args.config_path.empty())
        throw CLI::ValidationError("spec", "provide either --preset or --config");
}

int run_solve(const CommonArgs& common, double force_b, bool has_force_b,
              const std::string& values_grid, const std::string& values_out, bool dump_basis) {
    pdk::ProblemSpec spec = load_spec(common.preset, common.config_path);
    pdk::SpecBases bases = pdk::build_spec_bases(spec);
    pdk::BarrierSolution sol = pdk::solve_barrier(bases);
    double b_used = has_force_b ? force_b : sol.b_star;

    if (sol.b_bar_capped && !common.quiet)
        std::cerr << "note: concavity switchpoint exceeded the search cap; reported value is the cap\n";
    if (!common.quiet) {
        std::fprintf(stderr, "b* = %.12g  b_bar = %.12g  (criterion at 0+: %.6g)\n", sol.b_star,
                     sol.b_bar, sol.h_at_zero);
    }

    ojson doc;
    doc["command"] = "solve";
    doc["spec"] = embed(pdk::spec_to_json(spec));
    doc["solution"] = embed(pdk::solution_to_json(sol));
    if (dump_basis) doc["basis"] = embed(pdk::basis_to_json(bases));
    doc["b_used"] = b_used;
    if (!values_grid.empty()) {
        pdk::ValueFunction v(bases, b_used);
        ojson rows = ojson::array();
        std::ofstream csv(values_out);
        if (!csv) throw std::runtime_error("cannot write '" + values_out + "'");
        csv << "x,v,dv\n";
        for (double x : parse_grid(values_grid)) {
            double vx = v(x), dv = v.derivative(x, 1);
            ojson row;
            row["x"] = x;
            row["v"] = vx;
            row["dv"] = dv;
            rows.push_back(row);
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", x, vx, dv);
            csv << buf;
        }
        doc["values"] = rows;
        doc["values_file"] = values_out;
    }
    std::cout << doc.dump() << "\n";
    return 0;
}

int run_check(const CommonArgs& common, double force_b, bool has_force_b, int grid_points) {
    pdk::ProblemSpec spec = load_spec(common.preset, common.config_path);
    pdk::SpecBases bases = pdk::build_spec_bases(spec);
    pdk::BarrierSolution sol = pdk::solve_barrier(bases);
    double b_used = has_force_b ? force_b : sol.b_star;

    pdk::VerifyOptions opt;
    if (grid_points > 1) opt.grid_points = grid_points;
    pdk::VerificationReport rep = pdk::hjb_check(bases, b_used, opt);
    pdk::IdentitySuiteReport suite = pdk::generator_identity_suite(bases);

    ojson doc = embed(pdk::report_to_json(rep));
    doc["pass"] = rep.pass && suite.pass;
    doc["details"]["identities"] = embed(pdk::identity_suite_to_json(suite));
    doc["details"]["spec"] = embed(pdk::spec_to_json(spec));
    std::cout << doc.dump() << "\n";

    if (!common.quiet) {
        std::fprintf(stderr, "checked b = %.12g: %s (gen %.3e, slack %.3e)\n", b_used,
                     doc["pass"].get<bool>() ? "pass" : "FAIL", rep.max_generator_residual,
                     rep.max_hjb_slack);
    }
    return doc["pass"].get<bool>() ? 0 : 1;
}

int run_simulate(const CommonArgs& common, double b_opt, bool has_b, double x0, long paths,
                 std::uint64_t seed, double dt, double horizon, bool antithetic, bool no_bridge,
                 long dump_paths) {
    pdk::ProblemSpec spec = load_spec(common.preset, common.config_path);
    pdk::SpecBases bases = pdk::build_spec_bases(spec);
    double b = b_opt;
    if (!has_b) {
        pdk::BarrierSolution sol = pdk::solve_barrier(bases);
        b = sol.b_star;
    }

    pdk::SimConfig cfg;
    cfg.n_paths = paths;
    cfg.seed = seed;
    cfg.dt = dt;
    cfg.horizon_t = horizon;
    cfg.antithetic = antithetic;
    cfg.bridge = !no_bridge;
    cfg.threads = resolve_threads(common.threads);

    pdk::DividendEstimate est = pdk::simulate_value(spec, b, x0, cfg);

    for (long p = 0; p < dump_paths && p < est.n_paths; ++p) {
        auto events = pdk::sample_path(spec, b, x0, cfg, static_cast<std::uint64_t>(p));
        ojson line;
        line["path"] = p;
        line["events"] = ojson::array();
        for (const auto& ev : events) {
            ojson e;
            e["t"] = ev.time;
            e["type"] = event_name(ev.kind);
            e["before"] = ev.surplus_before;
            e["after"] = ev.surplus_after;
            e["paid"] = ev.paid;
            line["events"].push_back(e);
        }
        std::cerr << line.dump() << "\n";
    }

    double v_exact = 0.0;
    if (std::isfinite(b)) {
        pdk::ValueFunction v(bases, b);
        v_exact = v(x0);
    }
    ojson doc;
    doc["command"] = "simulate";
    doc["spec"] = embed(pdk::spec_to_json(spec));
    doc["b"] = json_number_or_inf(b);
    doc["x0"] = x0;
    doc["estimate"] = embed(pdk::estimate_to_json(est));
    ojson comp;
    comp["v"] = v_exact;
    comp["abs_error"] = std::abs(est.mean - v_exact);
    comp["z"] = est.std_error > 0.0 ? (est.mean - v_exact) / est.std_error : 0.0;
    doc["analytic"] = comp;
    std::cout << doc.dump() << "\n";

    if (!common.quiet) {
        std::fprintf(stderr,
                     "simulated %ld paths to T = %.6g: mean %.8g (se %.2e), analytic %.8g\n",
                     est.n_paths, est.horizon_t, est.mean, est.std_error, v_exact);
    }
    return 0;
}

int run_sweep(const CommonArgs& common, int figure, const std::string& param,
              const std::string& grid, const std::string& x_grid_text,
              const std::string& h_grid_text, const std::string& dominance_b,
              const std::string& out_dir) {
    pdk::ProblemSpec spec = load_spec(common.preset, common.config_path);
    pdk::SpecBases bases = pdk::build_spec_bases(spec);
    pdk::BarrierSolution sol = pdk::solve_barrier(bases);
    int threads = resolve_threads(common.threads);

    std::filesystem::create_directories(out_dir);
    std::vector<double> x_grid = x_grid_text.empty() ? pdk::default_sensitivity_x_grid()
                                                     : parse_grid(x_grid_text);
    ojson outputs = ojson::array();

    auto emit = [&](const std::string& name, auto&& writer, std::size_t rows) {
        std::filesystem::path path = std::filesystem::path(out_dir) / name;
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
        writer(os);
        ojson o;
        o["file"] = path.string();
        o["rows"] = rows;
        outputs.push_back(o);
    };

    auto do_h_curve = [&](const std::vector<double>& b_grid) {
        auto rows = pdk::h_curve(bases, b_grid);
        emit("h_curve.csv", [&](std::ostream& os) { pdk::write_h_curve_csv(os, rows); },
             rows.size());
    };
    auto do_dominance = [&](const std::vector<double>& b_list) {
        auto rows = pdk::dominance_panel(bases, b_list, x_grid);
        emit("dominance.csv", [&](std::ostream& os) { pdk::write_dominance_csv(os, rows); },
             rows.size());
    };
    auto do_sensitivity = [&](pdk::SweepParam p, const std::vector<double>& values) {
        auto rows = pdk::sensitivity(spec, p, values, x_grid, threads);
        long skipped = 0;
        for (const auto& row : rows) {
            if (row.skipped) {
                ++skipped;
                if (!common.quiet)
                    std::fprintf(stderr, "skipped %s = %.6g: %s\n", row.param.c_str(), row.value,
                                 row.reason.c_str());
            }
        }
        std::string name = std::string("sensitivity_") + pdk::sweep_param_name(p) + ".csv";
        emit(name, [&](std::ostream& os) { pdk::write_sensitivity_csv(os, rows); }, rows.size());
        (void)skipped;
    };

    bool did_any = false;
    if (figure > 0) {
        did_any = true;
        switch (figure) {
            case 1: {
                // The criterion-curve panel covers all six named cases.
                for (const std::string& name : pdk::preset_names()) {
                    pdk::SpecBases pb = pdk::build_spec_bases(pdk::preset(name));
                    pdk::BarrierSolution ps = pdk::solve_barrier(pb);
                    double hi = std::max(2.0 * ps.b_bar, 1.0);
                    auto rows = pdk::h_curve(pb, parse_grid("0:" + std::to_string(hi) + ":161"));
                    emit("h_curve_" + name + ".csv",
                         [&](std::ostream& os) { pdk::write_h_curve_csv(os, rows); }, rows.size());
                }
                break;
            }
            case 2: do_dominance(pdk::figure2_b_list(sol)); break;
            case 3: do_sensitivity(pdk::SweepParam::c, pdk::figure_grid_c()); break;
            case 4: do_sensitivity(pdk::SweepParam::kappa, pdk::figure_grid_kappa()); break;
            case 5: do_sensitivity(pdk::SweepParam::lambda, pdk::figure_grid_lambda()); break;
            case 6: do_sensitivity(pdk::SweepParam::r, pdk::figure_grid_r()); break;
            default: throw std::invalid_argument("--figure must be between 1 and 6");
        }
    }
    if (!h_grid_text.empty()) {
        did_any = true;
        do_h_curve(parse_grid(h_grid_text));
    }
    if (!dominance_b.empty()) {
        did_any = true;
        do_dominance(parse_list(dominance_b));
    }
    if (!param.empty()) {
        if (grid.empty())
            throw std::invalid_argument("--param requires --grid min:max:count");
        did_any = true;
        do_sensitivity(pdk::sweep_param_from_name(param), parse_grid(grid));
    }
    if (!did_any)
        throw std::invalid_argument(
            "nothing to sweep: give --figure, --h-grid, --dominance-b, or --param/--grid");

    ojson doc;
    doc["command"] = "sweep";
    doc["outputs"] = outputs;
    std::cout << doc.dump() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal periodic dividend barriers for jump-diffusion surplus models"};
    app.require_subcommand(1);

    CommonArgs solve_common, check_common, sim_common, sweep_common;

    auto* solve = app.add_subcommand("solve", "Solve for the optimal barrier");
    add_common(solve, solve_common);
    double solve_force_b = 0.0;
    std::string solve_values, solve_values_out = "values.csv";
    bool solve_dump_basis = false;
    auto* solve_fb = solve->add_option("--force-b", solve_force_b,
                                       "Evaluate at this barrier instead of the optimum");
    solve->add_option("--values", solve_values, "Also tabulate v and v' on min:max:count (CSV)");
    solve->add_option("--out", solve_values_out, "Path for the --values CSV");
    solve->add_flag("--dump-basis", solve_dump_basis, "Include the exponential representation");

    auto* check = app.add_subcommand("check", "Verify a barrier against the optimality conditions");
    add_common(check, check_common);
    double check_force_b = 0.0;
    int check_grid_points = 64;
    auto* check_fb = check->add_option("--force-b", check_force_b,
                                       "Check this barrier instead of the optimum");
    check->add_option("--grid-points", check_grid_points, "Verification grid size");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of the strategy value");
    add_common(sim, sim_common);
    double sim_b = 0.0, sim_x0 = 0.0, sim_dt = 1e-3, sim_horizon = 0.0;
    long sim_paths = 200000, sim_dump = 0;
    std::uint64_t sim_seed = 12345;
    bool sim_antithetic = false, sim_no_bridge = false;
    auto* sim_b_opt = sim->add_option("--b", sim_b, "Barrier level (default: solved optimum)");
    sim->add_option("--x0", sim_x0, "Initial surplus")->required();
    sim->add_option("--paths", sim_paths, "Number of paths");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--dt", sim_dt, "Gaussian substep cap (sigma > 0)");
    sim->add_option("--horizon", sim_horizon, "Time horizon (default: from truncation bound)");
    sim->add_flag("--antithetic", sim_antithetic, "Antithetic path pairing");
    sim->add_flag("--no-bridge", sim_no_bridge,
                  "Endpoint-only ruin checks (biased; for step-size studies)");
    sim->add_option("--dump-paths", sim_dump, "Write event logs for this many paths to stderr");

    auto* sweep = app.add_subcommand("sweep", "Tabulate curves and parameter sweeps as CSV");
    add_common(sweep, sweep_common);
    int sweep_figure = 0;
    std::string sweep_param, sweep_grid, sweep_x_grid, sweep_h_grid, sweep_dom, sweep_out = ".";
    sweep->add_option("--figure", sweep_figure, "Canonical panel number (1-6)")
        ->check(CLI::Range(1, 6));
    sweep->add_option("--param", sweep_param, "Sweep parameter: c, kappa, lambda, or r");
    sweep->add_option("--grid", sweep_grid, "Parameter grid min:max:count");
    sweep->add_option("--x-grid", sweep_x_grid, "Evaluation grid min:max:count");
    sweep->add_option("--h-grid", sweep_h_grid, "Barrier-criterion curve grid min:max:count");
    sweep->add_option("--dominance-b", sweep_dom, "Comma-separated barrier levels (inf allowed)");
    sweep->add_option("--out-dir", sweep_out, "Output directory for CSV files");

    // Exit codes: 0 success (and verification pass), 1 configuration or
    // validation problem (including a failed check), 2 numerical failure.
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (solve->parsed()) {
            require_spec(solve_common);
            return run_solve(solve_common, solve_force_b, solve_fb->count() > 0, solve_values,
                             solve_values_out, solve_dump_basis);
        }
        if (check->parsed()) {
            require_spec(check_common);
            return run_check(check_common, check_force_b, check_fb->count() > 0,
                             check_grid_points);
        }
        if (sim->parsed()) {
            require_spec(sim_common);
            return run_simulate(sim_common, sim_b, sim_b_opt->count() > 0, sim_x0, sim_paths,
                                sim_seed, sim_dt, sim_horizon, sim_antithetic, sim_no_bridge,
                                sim_dump);
        }
        if (sweep->parsed()) {
            require_spec(sweep_common);
            return run_sweep(sweep_common, sweep_figure, sweep_param, sweep_grid, sweep_x_grid,
                             sweep_h_grid, sweep_dom, sweep_out);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const pdk::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
