#include "holonomy/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

struct Term {
  const char* name;
  int power;
  double sign;
};

std::vector<Term> terms_of(FitModel model) {
  switch (model) {
    case FitModel::FLinear: return {{"F2", 1, -1.0}};
    case FitModel::FQuartic: return {{"F2", 1, -1.0}, {"F4", 2, 1.0}};
    case FitModel::TauLinear: return {{"tau2", 1, -1.0}};
    case FitModel::TauCubic: return {{"tau2", 1, -1.0}, {"tau4", 2, 1.0}, {"tau6", 3, -1.0}};
  }
  return {};
}

bool is_fidelity_model(FitModel m) { return m == FitModel::FLinear || m == FitModel::FQuartic; }

double default_intercept(FitModel m) {
  return is_fidelity_model(m) ? 1.0 : 1.5 * std::numbers::pi * std::sqrt(15.0);
}

}  // namespace

std::string_view to_string(FitModel model) noexcept {
  switch (model) {
    case FitModel::FLinear: return "F-linear";
    case FitModel::FQuartic: return "F-quartic";
    case FitModel::TauLinear: return "tau-linear";
    case FitModel::TauCubic: return "tau-cubic";
  }
  return "unknown";
}

FitModel fit_model_from_string(std::string_view name) {
  for (FitModel m : {FitModel::FLinear, FitModel::FQuartic, FitModel::TauLinear, FitModel::TauCubic})
    if (to_string(m) == name) return m;
  throw Error(ErrorCode::InvalidArgument, "unknown fit model '" + std::string(name) + "'");
}

double FitResult::coefficient(std::string_view name) const {
  for (const FitCoefficient& c : coefficients)
    if (c.name == name) return c.value;
  throw Error(ErrorCode::InvalidArgument, "fit has no coefficient " + std::string(name));
}

double FitResult::predict(double lambda_sq) const {
  const std::vector<Term> terms = terms_of(model);
  double y = fixed_intercept;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    y += terms[k].sign * coefficients[k].value * std::pow(lambda_sq, terms[k].power);
  }
  return y;
}

std::vector<double> FitResult::residuals() const {
  std::vector<double> r;
  r.reserve(points.size());
  for (const NoisePoint& p : points) r.push_back(p.value - predict(p.lambda_sq));
  return r;
}

double FitResult::max_abs_residual() const {
  double m = 0.0;
  for (double r : residuals()) m = std::max(m, std::abs(r));
  return m;
}

double FitResult::rms_residual() const {
  if (points.empty()) return 0.0;
  return residual_norm / std::sqrt(static_cast<double>(points.size()));
}

FitResult fit_noise_response(std::span<const NoisePoint> points, FitModel model,
                             const FitOptions& options) {
  const std::vector<Term> terms = terms_of(model);
  const std::size_t p = terms.size() + (options.free_intercept ? 1 : 0);
  if (points.size() < p + 1) {
    throw Error(ErrorCode::UnderdeterminedFit,
                std::string(to_string(model)) + " needs at least " + std::to_string(p + 1) +
                    " points, got " + std::to_string(points.size()));
  }
  for (const NoisePoint& pt : points) {
    if (!std::isfinite(pt.lambda_sq) || !std::isfinite(pt.value) || pt.lambda_sq < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "fit points must be finite with lambda_sq >= 0");
    }
  }
  const double intercept = options.intercept.value_or(default_intercept(model));
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto cols = static_cast<Eigen::Index>(p);

  Eigen::MatrixXd x(n, cols);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = points[i].lambda_sq;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      x(i, static_cast<Eigen::Index>(k)) = terms[k].sign * std::pow(l, terms[k].power);
    }
    if (options.free_intercept) x(i, cols - 1) = 1.0;
    y(i) = points[i].value - (options.free_intercept ? 0.0 : intercept);
  }
  // Column equilibration keeps the lambda^6 column from wrecking the QR.
  Eigen::VectorXd scale(cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    scale(k) = x.col(k).norm();
    if (scale(k) == 0.0) {
      throw Error(ErrorCode::UnderdeterminedFit, "all lambda_sq are zero");
    }
    x.col(k) /= scale(k);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < cols) throw Error(ErrorCode::UnderdeterminedFit, "design matrix is rank deficient");
  const Eigen::VectorXd beta_scaled = qr.solve(y);
  const Eigen::VectorXd resid = y - x * beta_scaled;
  const double rss = resid.squaredNorm();

  // cov(beta_scaled) = s^2 (X^T X)^{-1}
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
  const double s2 = n > cols ? rss / static_cast<double>(n - cols) : 0.0;

  FitResult out;
  out.model = model;
  out.free_intercept = options.free_intercept;
  out.fixed_intercept = options.free_intercept ? beta_scaled(cols - 1) / scale(cols - 1) : intercept;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out.coefficients.push_back(
        {terms[k].name, beta_scaled(kk) / scale(kk), std::sqrt(s2 * xtx_inv(kk, kk)) / scale(kk)});
  }
  out.points.assign(points.begin(), points.end());
  double norm2 = 0.0;
  for (double r : out.residuals()) norm2 += r * r;
  out.residual_norm = std::sqrt(norm2);
  return out;
}

double f_of_tau_relation(const FitResult& f_fit, const FitResult& tau_fit) {
  if (f_fit.model != FitModel::FLinear || tau_fit.model != FitModel::TauLinear) {
    throw Error(ErrorCode::ModelMismatch, "slope needs an F-linear and a tau-linear fit");
  }
  const double f2 = f_fit.coefficient("F2");
  const double tau2 = tau_fit.coefficient("tau2");
  if (f2 == 0.0) return 0.0;
  if (tau2 == 0.0) throw Error(ErrorCode::ModelMismatch, "tau2 is zero; slope undefined");
  return f2 / tau2;
}

namespace {

std::vector<OptimalPoint> optimal_points(const LoopFamily& family, double gamma0,
                                         std::span<const double> lambda_sq,
                                         std::size_t n_states, std::size_t steps,
                                         const PeakSearchOptions& options) {
  std::vector<OptimalPoint> out;
  out.reserve(lambda_sq.size());
  for (double l : lambda_sq) {
    out.push_back(find_optimal_point(family, NoiseModel::high_temperature(l, gamma0), n_states,
                                     steps, options));
  }
  return out;
}

double fitted_f2(const std::vector<OptimalPoint>& pts) {
  std::vector<NoisePoint> data;
  for (const OptimalPoint& p : pts) data.push_back({p.lambda_sq, p.f_star});
  return fit_noise_response(data, FitModel::FLinear).coefficient("F2");
}

}  // namespace

CalibrationResult calibrate_gamma0(const LoopFamily& family, double target_f2,
                                   std::span<const double> lambda_sq, std::size_t n_states,
                                   std::size_t steps, const PeakSearchOptions& options,
                                   double reference_gamma0) {
  if (!(target_f2 > 0.0) || !(reference_gamma0 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "calibration target and reference must be positive");
  }
  CalibrationResult out;
  out.reference_gamma0 = reference_gamma0;
  out.reference_f2 =
      fitted_f2(optimal_points(family, reference_gamma0, lambda_sq, n_states, steps, options));
  if (!(out.reference_f2 > 0.0)) {
    throw Error(ErrorCode::ModelMismatch, "reference fit has no fidelity loss to scale");
  }
  out.gamma0 = reference_gamma0 * target_f2 / out.reference_f2;
  out.points = optimal_points(family, out.gamma0, lambda_sq, n_states, steps, options);
  out.calibrated_f2 = fitted_f2(out.points);
  return out;
}

}  // namespace holonomy
