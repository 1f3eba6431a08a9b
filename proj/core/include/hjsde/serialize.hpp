#pragma once
#include <string>

#include <json.hpp>

#include "hjsde/curvature.hpp"
#include "hjsde/metrics.hpp"
#include "hjsde/profiles.hpp"
#include "hjsde/resolution.hpp"

namespace hjsde {

using json = nlohmann::json;

// lossless float printing (17 significant digits)
std::string format_double(double v);

json sequence_to_json(const AdmissibleSequence& seq);
json matrix_to_json(const IntersectionMatrix& m);

// {"breakpoints":[{"y":"1/4","value":"-1"},...],"left_slope":"0",
//  "right_slope":"0","infinity_weight":"1",
//  "smooth_pieces":[{"interval":[a,b],"cubic":[c0,c1,c2,c3]},...]}
// Rationals as "num/den" strings; plain numbers are read as doubles.
json profile_to_json(const BoundaryProfile& profile);
BoundaryProfile profile_from_json(const json& j);

json metric_to_json(const MetricSample& s);
json report_to_json(const CurvatureReport& r);
std::string reports_to_csv(const std::vector<CurvatureReport>& rs);

} // namespace hjsde
