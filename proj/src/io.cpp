#include "holonomy/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "holonomy/errors.hpp"

namespace holonomy::io {

namespace {

void require_object(const Json& j, const char* what, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!keys.contains(item.key())) {
      throw Error(ErrorCode::InvalidConfig,
                  std::string("unknown key '") + item.key() + "' in " + what);
    }
  }
}

double number(const Json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::InvalidConfig, std::string(what) + "." + key + " must be a number");
  }
  return j.at(key).get<double>();
}

Json rate_table(const std::map<int, double>& table) {
  Json out = Json::object();
  for (const auto& [h, v] : table) out[std::to_string(h)] = v;
  return out;
}

std::map<int, double> rate_table_from(const Json& j, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be an object");
  std::map<int, double> out;
  for (const auto& item : j.items()) {
    int h = 0;
    try {
      std::size_t used = 0;
      h = std::stoi(item.key(), &used);
      if (used != item.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig,
                  std::string(what) + " key '" + item.key() + "' is not an integer harmonic");
    }
    if (!item.value().is_number()) {
      throw Error(ErrorCode::InvalidConfig, std::string(what) + " values must be numbers");
    }
    out[h] = item.value().get<double>();
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  return out;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidConfig, "matrix must be an array");
  const std::size_t n = j.size() / 2;
  std::size_t dim = 0;
  while ((dim + 1) * (dim + 1) <= n) ++dim;
  if (j.size() % 2 != 0 || dim * dim != n || dim == 0 || dim > ComplexMatrix::kMaxDim) {
    throw Error(ErrorCode::InvalidConfig, "matrix array must hold 2*dim^2 numbers, dim <= 4");
  }
  ComplexMatrix m(dim);
  for (std::size_t k = 0; k < n; ++k) {
    m.data()[k] = cplx(j.at(2 * k).get<double>(), j.at(2 * k + 1).get<double>());
  }
  return m;
}

Json loop_to_json(const LoopSpec& loop) {
  Json arcs = Json::array();
  for (const ArcSegment& a : loop.arcs) {
    arcs.push_back({{"kind", a.kind == ArcKind::Meridian ? "Meridian" : "Equator"},
                    {"fixed_angle", a.fixed_angle},
                    {"start_angle", a.start_angle},
                    {"end_angle", a.end_angle},
                    {"duration", a.duration}});
  }
  return {{"omega_scale", loop.omega_scale}, {"arcs", arcs}, {"total_time", loop.total_time()}};
}

LoopSpec loop_from_json(const Json& j) {
  require_object(j, "loop", {"omega_scale", "arcs", "total_time"});
  LoopSpec loop;
  loop.omega_scale = number(j, "omega_scale", "loop");
  if (!j.contains("arcs") || !j.at("arcs").is_array()) {
    throw Error(ErrorCode::InvalidConfig, "loop.arcs must be an array");
  }
  for (const Json& a : j.at("arcs")) {
    require_object(a, "arc", {"kind", "fixed_angle", "start_angle", "end_angle", "duration"});
    ArcSegment arc;
    const std::string kind = a.value("kind", "");
    if (kind == "Meridian") {
      arc.kind = ArcKind::Meridian;
    } else if (kind == "Equator") {
      arc.kind = ArcKind::Equator;
    } else {
      throw Error(ErrorCode::InvalidConfig, "arc.kind must be Meridian or Equator");
    }
    arc.fixed_angle = number(a, "fixed_angle", "arc");
    arc.start_angle = number(a, "start_angle", "arc");
    arc.end_angle = number(a, "end_angle", "arc");
    arc.duration = number(a, "duration", "arc");
    loop.arcs.push_back(arc);
  }
  if (j.contains("total_time")) {
    const double declared = number(j, "total_time", "loop");
    if (std::abs(declared - loop.total_time()) > 1e-9 * std::max(1.0, declared)) {
      throw Error(ErrorCode::InvalidConfig, "loop.total_time disagrees with the arc durations");
    }
  }
  loop.validate();
  return loop;
}

Json noise_to_json(const NoiseModel& noise) {
  return {{"lambda_sq", noise.lambda_sq},
          {"gamma", rate_table(noise.gamma)},
          {"lamb_shift", rate_table(noise.lamb_shift)},
          {"label", noise.label}};
}

NoiseModel noise_from_json(const Json& j) {
  require_object(j, "noise model", {"lambda_sq", "gamma", "lamb_shift", "label"});
  NoiseModel m;
  if (j.contains("lambda_sq")) m.lambda_sq = number(j, "lambda_sq", "noise model");
  if (j.contains("gamma")) m.gamma = rate_table_from(j.at("gamma"), "gamma");
  if (j.contains("lamb_shift")) m.lamb_shift = rate_table_from(j.at("lamb_shift"), "lamb_shift");
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw Error(ErrorCode::InvalidConfig, "label must be a string");
    m.label = j.at("label").get<std::string>();
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return m;
}

Json optimal_point_to_json(const OptimalPoint& p) {
  return {{"lambda_sq", p.lambda_sq},
          {"omega_tau_star", p.omega_tau_star},
          {"tau_star", p.tau_star},
          {"f_star", p.f_star},
          {"bracket", {p.bracket_lo, p.bracket_hi}},
          {"tolerance", p.tolerance},
          {"evaluations", p.evaluations}};
}

OptimalPoint optimal_point_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "optimal-point row must be an object");
  OptimalPoint p;
  p.lambda_sq = number(j, "lambda_sq", "row");
  p.omega_tau_star = number(j, "omega_tau_star", "row");
  p.f_star = number(j, "f_star", "row");
  p.tau_star = j.contains("tau_star") ? number(j, "tau_star", "row") : p.omega_tau_star;
  if (j.contains("bracket") && j.at("bracket").is_array() && j.at("bracket").size() == 2) {
    p.bracket_lo = j.at("bracket").at(0).get<double>();
    p.bracket_hi = j.at("bracket").at(1).get<double>();
  }
  if (j.contains("tolerance")) p.tolerance = number(j, "tolerance", "row");
  return p;
}

Json fit_result_to_json(const FitResult& fit) {
  Json coeffs = Json::array();
  for (const FitCoefficient& c : fit.coefficients) {
    coeffs.push_back({{"name", c.name}, {"value", c.value}, {"std_error", c.std_error}});
  }
  Json points = Json::array();
  const std::vector<double> resid = fit.residuals();
  for (std::size_t i = 0; i < fit.points.size(); ++i) {
    points.push_back({{"lambda_sq", fit.points[i].lambda_sq},
                      {"value", fit.points[i].value},
                      {"residual", resid[i]}});
  }
  return {{"model", std::string(to_string(fit.model))},
          {"fixed_intercept", fit.fixed_intercept},
          {"free_intercept", fit.free_intercept},
          {"coefficients", coeffs},
          {"residual_norm", fit.residual_norm},
          {"max_abs_residual", fit.max_abs_residual()},
          {"points", points}};
}

Json robustness_to_json(const RobustnessResult& r) {
  return {{"lambda_sq", r.lambda_sq},
          {"r", r.r},
          {"f_star", r.f_star},
          {"omega_tau_star", r.omega_tau_star},
          {"f_adiabatic", r.f_adiabatic}};
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
  out << "omega_tau,mean_fidelity\n";
  for (const SweepSample& s : curve.samples) {
    out << format_number(s.omega_tau) << ',' << format_number(s.mean_fidelity) << '\n';
  }
}

std::vector<SweepSample> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "omega_tau,mean_fidelity") {
    throw Error(ErrorCode::Io, "missing sweep CSV header");
  }
  std::vector<SweepSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::Io, "malformed CSV row: " + line);
    out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return out;
}

}  // namespace holonomy::io
