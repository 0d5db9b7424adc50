#pragma once

// Least-squares fits of optimal-point coordinates against lambda^2 with the
// intercept pinned to the noiseless value.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holonomy/fidelity.hpp"

namespace holonomy {

/// Models in x = lambda^2, coefficients reported with the signs below:
///   FLinear    y = c - F2 x
///   FQuartic   y = c - F2 x + F4 x^2
///   TauLinear  y = c - tau2 x
///   TauCubic   y = c - tau2 x + tau4 x^2 - tau6 x^3
enum class FitModel { FLinear, FQuartic, TauLinear, TauCubic };

std::string_view to_string(FitModel model) noexcept;
FitModel fit_model_from_string(std::string_view name);

struct NoisePoint {
  double lambda_sq = 0.0;
  double value = 0.0;
};

struct FitCoefficient {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct FitResult {
  FitModel model = FitModel::FLinear;
  double fixed_intercept = 0.0;
  bool free_intercept = false;  // intercept fitted and stored in fixed_intercept
  std::vector<FitCoefficient> coefficients;
  double residual_norm = 0.0;  // ||y - y_fit||_2
  std::vector<NoisePoint> points;

  double coefficient(std::string_view name) const;
  double predict(double lambda_sq) const;
  std::vector<double> residuals() const;
  double max_abs_residual() const;
  double rms_residual() const;
};

struct FitOptions {
  /// Defaults: 1 for fidelity models, (3 pi / 2) sqrt(15) for time models.
  std::optional<double> intercept;
  bool free_intercept = false;
};

/// Needs at least (free coefficients + 1) points; throws UnderdeterminedFit.
FitResult fit_noise_response(std::span<const NoisePoint> points, FitModel model,
                             const FitOptions& options = {});

/// dF*/d(Omega tau*) = F2 / tau2 from the two linear fits; ModelMismatch otherwise.
double f_of_tau_relation(const FitResult& f_fit, const FitResult& tau_fit);

struct CalibrationResult {
  double gamma0 = 0.0;
  double reference_gamma0 = 0.0;
  double reference_f2 = 0.0;   // F2 fitted with reference_gamma0
  double calibrated_f2 = 0.0;  // F2 refitted with gamma0
  std::vector<OptimalPoint> points;  // optimal points at gamma0
};

/// Picks gamma0 of the flat high-temperature model so the fitted F2 over
/// `lambda_sq` hits `target_f2`. F* depends on lambda^2 gamma0 only, so one
/// rescale of a reference fit lands on target up to curvature; the result is
/// refitted to report the achieved F2.
CalibrationResult calibrate_gamma0(const LoopFamily& family, double target_f2,
                                   std::span<const double> lambda_sq,
                                   std::size_t n_states = kDefaultStates,
                                   std::size_t steps = kDefaultSteps,
                                   const PeakSearchOptions& options = {},
                                   double reference_gamma0 = 1.0);

}  // namespace holonomy
