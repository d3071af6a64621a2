#pragma once

// JSON report schema. Every number is wrapped as
//   {"value": <number>, "unit": "<unit>"}             or
//   {"value": <number>, "sigma": <number>, "unit": "<unit>"}
// with unit one of GeV, GeV^-1, GeV^2, GeV^3, rad, counts, dimensionless.
// Non-finite values are written as null.

#include <json.hpp>

#include "cpi/fitting.hpp"
#include "cpi/generator.hpp"

namespace cpi::report {

using json = nlohmann::ordered_json;

json quantity(double value, const char* unit);
json quantity(Measured m, const char* unit);

json to_json(const CpVerdict& v, const DissipationParams& d);
json to_json(const FitResult& fit);
json to_json(const ABEstimate& ab);
json to_json(const AAlphaEstimate& aa);
json to_json(const SimplifiedAlpha& s);
json to_json(const ConservationResidual& c);
json to_json(const AnalysisReport& r, const AnalysisOptions& options);

}  // namespace cpi::report
