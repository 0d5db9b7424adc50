#include <doctest.h>

#include "holonomy/errors.hpp"
#include "holonomy/fitting.hpp"

using namespace holonomy;

namespace {

std::vector<NoisePoint> synth(double c, std::initializer_list<double> signed_coeffs, double lo,
                              double hi, int n) {
  std::vector<NoisePoint> pts;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    double y = c, xp = x;
    for (double a : signed_coeffs) {
      y += a * xp;
      xp *= x;
    }
    pts.push_back({x, y});
  }
  return pts;
}

}  // namespace

TEST_CASE("fixed-intercept linear fit recovers exact data") {
  const auto pts = synth(1.0, {-6.34}, 0.0, 0.05, 11);
  const FitResult f = fit_noise_response(pts, FitModel::FLinear);
  CHECK(f.coefficient("F2") == doctest::Approx(6.34).epsilon(1e-12));
  CHECK(f.max_abs_residual() < 1e-14);
  CHECK(f.fixed_intercept == 1.0);
}

TEST_CASE("cubic time model recovers large coefficients") {
  const double c = 1.5 * std::numbers::pi * std::sqrt(15.0);
  const auto pts = synth(c, {-59.40, 990.65, -7655.95}, 0.0, 0.05, 11);
  const FitResult f = fit_noise_response(pts, FitModel::TauCubic);
  CHECK(std::abs(f.coefficient("tau2") - 59.40) < 1e-8);
  CHECK(std::abs(f.coefficient("tau4") - 990.65) < 1e-8);
  CHECK(std::abs(f.coefficient("tau6") - 7655.95) < 1e-8);
}

TEST_CASE("free intercept is reported") {
  const auto pts = synth(0.97, {-6.0, 29.93}, 0.0, 0.05, 9);
  FitOptions o;
  o.free_intercept = true;
  const FitResult f = fit_noise_response(pts, FitModel::FQuartic, o);
  CHECK(f.fixed_intercept == doctest::Approx(0.97).epsilon(1e-12));
  CHECK(f.coefficient("F4") == doctest::Approx(29.93).epsilon(1e-9));
}

TEST_CASE("predict and residuals are consistent") {
  auto pts = synth(1.0, {-2.0}, 0.0, 0.1, 5);
  pts[2].value += 1e-3;
  const FitResult f = fit_noise_response(pts, FitModel::FLinear);
  const auto r = f.residuals();
  double s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(r[i] == doctest::Approx(pts[i].value - f.predict(pts[i].lambda_sq)));
    s += r[i] * r[i];
  }
  CHECK(f.residual_norm == doctest::Approx(std::sqrt(s)));
  CHECK(f.coefficients[0].std_error > 0.0);
}

TEST_CASE("underdetermined and degenerate inputs are refused") {
  const auto two = synth(1.0, {-1.0}, 0.0, 0.1, 2);
  CHECK_THROWS_AS(fit_noise_response(std::span(two).first(1), FitModel::FLinear), Error);
  CHECK_THROWS_AS(fit_noise_response(two, FitModel::FQuartic), Error);
  std::vector<NoisePoint> zeros{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(fit_noise_response(zeros, FitModel::FLinear), Error);
  std::vector<NoisePoint> neg{{-0.1, 1.0}, {0.1, 1.0}};
  CHECK_THROWS_AS(fit_noise_response(neg, FitModel::FLinear), Error);
}

TEST_CASE("slope relation and model names") {
  const FitResult f = fit_noise_response(synth(1.0, {-6.34}, 0, 0.01, 4), FitModel::FLinear);
  const FitResult t = fit_noise_response(synth(1.5 * std::numbers::pi * std::sqrt(15.0), {-59.40}, 0, 0.01, 4), FitModel::TauLinear);
  CHECK(f_of_tau_relation(f, t) == doctest::Approx(6.34 / 59.40));
  CHECK_THROWS_AS(f_of_tau_relation(t, f), Error);
  for (FitModel m : {FitModel::FLinear, FitModel::FQuartic, FitModel::TauLinear, FitModel::TauCubic}) {
    CHECK(fit_model_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(fit_model_from_string("cubic"), Error);
}
