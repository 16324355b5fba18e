#include <pdk/json_io.hpp>

#include <json.hpp>

#include <stdexcept>

namespace pdk {

namespace {

using ojson = nlohmann::ordered_json;

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                    const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known)
            throw std::invalid_argument("unknown field '" + it.key() + "' in " + where);
    }
}

double need_number(const nlohmann::json& obj, const char* key, const char* where) {
    if (!obj.contains(key))
        throw std::invalid_argument(std::string("missing field '") + key + "' in " + where);
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw std::invalid_argument(std::string("field '") + key + "' in " + where +
                                    " must be a number");
    return v.get<double>();
}

} // namespace

ProblemSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("configuration must be a JSON object");
    reject_unknown(j, {"sigma", "c", "jumps", "q", "r"}, "configuration");

    ProblemSpec spec;
    spec.model.sigma = j.contains("sigma") ? need_number(j, "sigma", "configuration") : 0.0;
    spec.model.c = need_number(j, "c", "configuration");
    spec.q = need_number(j, "q", "configuration");
    spec.r = need_number(j, "r", "configuration");
    if (j.contains("jumps")) {
        const auto& arr = j.at("jumps");
        if (!arr.is_array()) throw std::invalid_argument("field 'jumps' must be an array");
        for (const auto& e : arr) {
            if (!e.is_object())
                throw std::invalid_argument("each entry of 'jumps' must be an object");
            reject_unknown(e, {"rate", "lambda"}, "jump term");
            JumpTerm t;
            t.rate = need_number(e, "rate", "jump term");
            t.lambda = need_number(e, "lambda", "jump term");
            spec.model.jumps.push_back(t);
        }
    }
    validate_or_throw(spec);
    return spec;
}

std::string spec_to_json(const ProblemSpec& spec) {
    ojson j;
    j["sigma"] = spec.model.sigma;
    j["c"] = spec.model.c;
    j["jumps"] = ojson::array();
    for (const auto& t : spec.model.jumps)
        j["jumps"].push_back(ojson{{"rate", t.rate}, {"lambda", t.lambda}});
    j["q"] = spec.q;
    j["r"] = spec.r;
    return j.dump();
}

std::string solution_to_json(const BarrierSolution& sol) {
    ojson j;
    j["b_star"] = sol.b_star;
    j["b_bar"] = sol.b_bar;
    j["phi_q"] = sol.phi_q;
    j["phi_qr"] = sol.phi_qr;
    j["h_at_zero"] = sol.h_at_zero;
    j["positive_criterion"] = sol.positive_criterion;
    j["smooth_fit_residual"] = sol.smooth_fit_residual;
    j["b_bar_capped"] = sol.b_bar_capped;
    return j.dump();
}

std::string basis_to_json(const SpecBases& bases) {
    auto one = [](const ScaleBasis& b) {
        ojson j;
        j["rate"] = b.rate_p;
        j["roots"] = b.roots;
        j["coeffs"] = b.coeffs;
        j["w0"] = b.w0;
        j["w0_prime"] = b.w0_prime;
        return j;
    };
    ojson j;
    j["q"] = one(bases.q_basis);
    j["q_plus_r"] = one(bases.qr_basis);
    return j.dump();
}

std::string estimate_to_json(const DividendEstimate& est) {
    ojson j;
    j["mean"] = est.mean;
    j["std_error"] = est.std_error;
    j["n_paths"] = est.n_paths;
    j["ruin_fraction"] = est.ruin_fraction;
    j["truncation_bound"] = est.truncation_bound;
    j["horizon_t"] = est.horizon_t;
    j["seed"] = est.seed;
    return j.dump();
}

std::string report_to_json(const VerificationReport& rep) {
    ojson details;
    details["b"] = rep.b;
    details["b_star"] = rep.b_star;
    details["b_bar"] = rep.b_bar;
    details["max_argmax_error"] = rep.max_argmax_error;
    details["slope_violations"] = rep.slope_violations;
    details["points"] = ojson::array();
    for (const auto& p : rep.points) {
        ojson e;
        e["x"] = p.x;
        e["generator_residual"] = p.generator_residual;
        e["hjb_slack"] = p.hjb_slack;
        e["max_term"] = p.max_term;
        e["argmax"] = p.argmax;
        e["argmax_error"] = p.argmax_error;
        e["slope"] = p.slope;
        details["points"].push_back(e);
    }

    ojson j;
    j["pass"] = rep.pass;
    j["max_generator_residual"] = rep.max_generator_residual;
    j["max_hjb_slack"] = rep.max_hjb_slack;
    j["smoothness_jump"] = rep.smoothness_jump;
    ojson grid = ojson::array();
    for (const auto& p : rep.points) grid.push_back(p.x);
    j["grid"] = grid;
    j["details"] = details;
    return j.dump();
}

std::string identity_suite_to_json(const IdentitySuiteReport& rep) {
    ojson j;
    j["pass"] = rep.pass;
    j["max_residual"] = rep.max_residual;
    j["tol"] = rep.tol;
    j["grid"] = rep.grid;
    ojson per = ojson::object();
    for (const auto& res : rep.results) per[res.name] = res.max_scaled_residual;
    j["per_function"] = per;
    return j.dump();
}

} // namespace pdk
