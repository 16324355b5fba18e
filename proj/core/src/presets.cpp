#include <pdk/presets.hpp>

#include <stdexcept>

namespace pdk {

ProblemSpec preset(const std::string& name) {
    double sigma = 0.0, c = 0.0;
    if (name == "case1") {
        sigma = 0.2;
        c = 1.5;
    } else if (name == "case2") {
        sigma = 0.2;
        c = 0.1;
    } else if (name == "case3") {
        sigma = 0.2;
        c = 0.0;
    } else if (name == "case1p") {
        c = 1.5;
    } else if (name == "case2p") {
        c = 1.15;
    } else if (name == "case3p") {
        c = 0.1;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    ProblemSpec spec;
    spec.model.sigma = sigma;
    spec.model.c = c;
    spec.model.jumps = {{1.0, 1.0}};
    spec.q = 0.05;
    spec.r = 0.5;
    return spec;
}

std::vector<std::string> preset_names() {
    return {"case1", "case2", "case3", "case1p", "case2p", "case3p"};
}

} // namespace pdk
