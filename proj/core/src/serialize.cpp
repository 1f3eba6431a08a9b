#include "hjsde/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "hjsde/errors.hpp"

namespace hjsde {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json int_to_json(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return v.convert_to<long long>();
  return v.str();
}

json qreal_to_json(const QReal& q) {
  if (q.is_exact()) return rat_to_string(q.rat());
  return q.dbl();
}

QReal qreal_from_json(const json& j) {
  if (j.is_string()) return QReal(rat_from_string(j.get<std::string>()));
  if (j.is_number_integer()) return QReal(Rat(Int(j.get<long long>())));
  if (j.is_number()) return QReal::approx(j.get<double>());
  throw BadInput("expected a rational string or a number");
}

} // namespace

json sequence_to_json(const AdmissibleSequence& seq) {
  json out = json::array();
  for (const auto& [m, n] : seq.pairs()) out.push_back({int_to_json(m), int_to_json(n)});
  return out;
}

json matrix_to_json(const IntersectionMatrix& m) {
  json rows = json::array();
  for (const auto& row : m.entries) {
    json r = json::array();
    for (const auto& v : row) r.push_back(int_to_json(v));
    rows.push_back(r);
  }
  json minors = json::array();
  for (const auto& v : m.leading_minors) minors.push_back(int_to_json(v));
  return json{{"matrix", rows},
              {"leading_minors", minors},
              {"negative_definite", m.negative_definite}};
}

json profile_to_json(const BoundaryProfile& profile) {
  json bp = json::array();
  for (const auto& kn : profile.knots())
    bp.push_back({{"y", qreal_to_json(kn.y)}, {"value", qreal_to_json(kn.value)}});
  json out{{"breakpoints", bp},
           {"left_slope", qreal_to_json(profile.left_slope())},
           {"right_slope", qreal_to_json(profile.right_slope())},
           {"infinity_weight", qreal_to_json(profile.infinity_weight())}};
  if (!profile.patches().empty()) {
    json sp = json::array();
    for (const auto& p : profile.patches())
      sp.push_back({{"interval", {p.a, p.b}}, {"cubic", {p.c[0], p.c[1], p.c[2], p.c[3]}}});
    out["smooth_pieces"] = sp;
  }
  return out;
}

BoundaryProfile profile_from_json(const json& j) {
  std::vector<BoundaryProfile::Knot> knots;
  for (const auto& kn : j.at("breakpoints"))
    knots.push_back({qreal_from_json(kn.at("y")), qreal_from_json(kn.at("value"))});
  QReal ls = qreal_from_json(j.at("left_slope"));
  QReal rs = qreal_from_json(j.at("right_slope"));
  QReal iw = j.contains("infinity_weight") ? qreal_from_json(j.at("infinity_weight"))
                                           : QReal(Rat(0));
  std::vector<CubicPatch> patches;
  if (j.contains("smooth_pieces")) {
    for (const auto& sp : j.at("smooth_pieces")) {
      CubicPatch p;
      p.a = sp.at("interval").at(0).get<double>();
      p.b = sp.at("interval").at(1).get<double>();
      for (int i = 0; i < 4; ++i) p.c[i] = sp.at("cubic").at(i).get<double>();
      patches.push_back(p);
    }
  }
  // insert knots at patch endpoints when missing, values from the cubic
  for (const auto& p : patches) {
    for (double e : {p.a, p.b}) {
      bool found = false;
      for (const auto& kn : knots)
        if (std::abs(kn.y.dbl() - e) <= 1e-12) found = true;
      if (!found) knots.push_back({QReal::approx(e), QReal::approx(p.eval(e))});
    }
  }
  std::sort(knots.begin(), knots.end(),
            [](const auto& a, const auto& b) { return a.y.dbl() < b.y.dbl(); });
  return BoundaryProfile(std::move(knots), ls, rs, iw, std::move(patches));
}

json metric_to_json(const MetricSample& s) {
  json g = json::array(), dg = json::array(), ddg = json::array();
  for (int i = 0; i < 4; ++i)
    for (int j2 = i; j2 < 4; ++j2) {
      g.push_back(s.g(i, j2));
      json d1 = json::array();
      for (int k = 0; k < 4; ++k) d1.push_back(s.dg(k, i, j2));
      dg.push_back(d1);
      json d2 = json::array();
      for (int k = 0; k < 4; ++k)
        for (int l = k; l < 4; ++l) d2.push_back(s.ddg(k, l, i, j2));
      ddg.push_back(d2);
    }
  return json{{"coords", s.coords}, {"base", {s.x0, s.x1}},
              {"orientation", s.orientation}, {"g", g}, {"dg", dg}, {"ddg", ddg}};
}

json report_to_json(const CurvatureReport& r) {
  return json{{"scalar", r.scalar},
              {"einstein_residual", r.einstein_residual},
              {"weyl_plus_norm", r.weyl_plus_norm},
              {"weyl_minus_norm", r.weyl_minus_norm},
              {"orientation", r.orientation}};
}

std::string reports_to_csv(const std::vector<CurvatureReport>& rs) {
  std::string out = "index,scalar,einstein_residual,weyl_plus_norm,weyl_minus_norm\n";
  for (size_t i = 0; i < rs.size(); ++i) {
    out += std::to_string(i) + "," + format_double(rs[i].scalar) + "," +
           format_double(rs[i].einstein_residual) + "," + format_double(rs[i].weyl_plus_norm) +
           "," + format_double(rs[i].weyl_minus_norm) + "\n";
  }
  return out;
}

} // namespace hjsde
