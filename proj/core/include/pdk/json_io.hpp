#pragma once

#include <pdk/barrier.hpp>
#include <pdk/model.hpp>
#include <pdk/scale.hpp>
#include <pdk/simulate.hpp>
#include <pdk/verify.hpp>

#include <string>

namespace pdk {

// Parses {"sigma": .., "c": .., "jumps": [{"rate": .., "lambda": ..}, ..],
// "q": .., "r": ..}. Unknown fields are rejected by name; sigma defaults to 0
// and jumps to none. Model validation runs after parsing.
ProblemSpec spec_from_json(const std::string& text);

// Serializations below emit compact JSON with stable key order, so document
// output is byte-reproducible run to run.
std::string spec_to_json(const ProblemSpec& spec);
std::string solution_to_json(const BarrierSolution& sol);
std::string basis_to_json(const SpecBases& bases);
std::string estimate_to_json(const DividendEstimate& est);
std::string report_to_json(const VerificationReport& rep);
std::string identity_suite_to_json(const IdentitySuiteReport& rep);

} // namespace pdk
