#include "holonomy/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "holonomy/errors.hpp"
#include "holonomy/geometric.hpp"
#include "holonomy/parallel.hpp"

namespace holonomy {

namespace {

constexpr double kFlatCurve = 1e-12;

bool is_coherent(const NoiseModel& noise) {
  if (noise.lambda_sq == 0.0) return true;
  for (int h : kHarmonics)
    if (noise.rate(h) != 0.0 || noise.shift(h) != 0.0) return false;
  return true;
}

}  // namespace

InputStateSet bloch_states(std::size_t n, const SphericalPoint& origin) {
  if (n < 6) throw Error(ErrorCode::TooFewStates, "need at least 6 input states");
  const EigenFrame frame = eigenframe(origin);
  const std::vector<cplx> d0 = frame.state(FrameState::Dark0);
  const std::vector<cplx> d1 = frame.state(FrameState::Dark1);
  const double golden_angle = 2.0 * std::numbers::pi / std::numbers::phi;
  InputStateSet set;
  set.states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
    BlochState s;
    s.polar = std::acos(z);
    s.azimuth = std::fmod(golden_angle * static_cast<double>(i), 2.0 * std::numbers::pi);
    s.c0 = std::cos(0.5 * s.polar);
    s.c1 = std::polar(std::sin(0.5 * s.polar), s.azimuth);
    s.lab.resize(kTripodDim);
    for (std::size_t k = 0; k < kTripodDim; ++k) s.lab[k] = s.c0 * d0[k] + s.c1 * d1[k];
    set.states.push_back(std::move(s));
  }
  return set;
}

ComplexMatrix target_holonomy(const LoopSpec& loop) {
  if (wedge_geometry(loop)) return adiabatic_holonomy(loop);
  return path_ordered_holonomy(loop);
}

std::vector<double> state_fidelities(const LoopSpec& loop, const NoiseModel& noise,
                                     const InputStateSet& inputs, std::size_t steps) {
  loop.validate();
  noise.validate();
  const ComplexMatrix target = target_holonomy(loop);
  std::vector<double> out;
  out.reserve(inputs.size());

  // Targets and outputs live in the coordinates of the initial eigenframe;
  // bright-state phases of the adiabatic target never meet a dark input.
  auto target_state = [&](const BlochState& s) {
    return std::array<cplx, 2>{target(0, 0) * s.c0 + target(0, 1) * s.c1,
                               target(1, 0) * s.c0 + target(1, 1) * s.c1};
  };

  if (is_coherent(noise)) {
    const ComplexMatrix u = to_frame(loop_propagator(loop).matrix, loop.start_point());
    for (const BlochState& s : inputs.states) {
      const auto t = target_state(s);
      cplx amp = 0.0;
      for (std::size_t a = 0; a < 2; ++a)
        amp += std::conj(t[a]) * (u(a, 0) * s.c0 + u(a, 1) * s.c1);
      out.push_back(std::norm(amp));
    }
    return out;
  }

  const DarkSubspaceMap map = evolve_dark_map(loop, noise, steps);
  for (const BlochState& s : inputs.states) {
    const auto t = target_state(s);
    const ComplexMatrix sigma = map.apply(s.c0, s.c1);
    cplx f = 0.0;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) f += std::conj(t[a]) * sigma(a, b) * t[b];
    out.push_back(f.real());
  }
  return out;
}

double mean_fidelity(const LoopSpec& loop, const NoiseModel& noise, std::size_t n_states,
                     std::size_t steps) {
  const InputStateSet inputs = bloch_states(n_states, loop.start_point());
  const std::vector<double> f = state_fidelities(loop, noise, inputs, steps);
  double sum = 0.0;
  for (double x : f) sum += x;
  return sum / static_cast<double>(f.size());
}

std::vector<SweepCurve> sweep(const LoopFamily& family, std::span<const double> omega_tau_grid,
                              std::span<const double> lambda_sq, const NoiseModel& base,
                              std::size_t n_states, std::size_t steps) {
  for (std::size_t i = 0; i < omega_tau_grid.size(); ++i) {
    if (!(omega_tau_grid[i] > 0.0) || (i > 0 && !(omega_tau_grid[i] > omega_tau_grid[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "Omega*tau grid must be positive and increasing");
    }
  }
  std::vector<SweepCurve> curves(lambda_sq.size());
  const std::size_t per_curve = omega_tau_grid.size();
  for (std::size_t c = 0; c < curves.size(); ++c) {
    curves[c].lambda_sq = lambda_sq[c];
    curves[c].n_states = n_states;
    curves[c].steps = steps;
    curves[c].noise_label = base.label;
    curves[c].samples.resize(per_curve);
  }
  parallel_for(curves.size() * per_curve, [&](std::size_t job) {
    const std::size_t c = job / per_curve, g = job % per_curve;
    NoiseModel noise = base;
    noise.lambda_sq = lambda_sq[c];
    const double x = omega_tau_grid[g];
    curves[c].samples[g] = {x, mean_fidelity(family.at_omega_tau(x), noise, n_states, steps)};
  });
  return curves;
}

PeakLocation locate_peak(const std::function<double(double)>& curve, double lo, double hi,
                         std::size_t coarse_points, double tolerance) {
  if (!(hi > lo) || coarse_points < 3 || !(tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bad peak-search window");
  }
  std::vector<double> xs(coarse_points), ys(coarse_points);
  for (std::size_t i = 0; i < coarse_points; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(coarse_points - 1);
  }
  parallel_for(coarse_points, [&](std::size_t i) { ys[i] = curve(xs[i]); });
  const auto best = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  const auto [min_it, max_it] = std::minmax_element(ys.begin(), ys.end());
  if (*max_it - *min_it <= kFlatCurve) {
    throw Error(ErrorCode::NoPeakInWindow, "curve is flat in the search window");
  }
  if (best == 0 || best + 1 == coarse_points) {
    throw Error(ErrorCode::NoPeakInWindow, "maximum sits on the window edge at " +
                                               std::to_string(xs[best]));
  }

  PeakLocation peak{xs[best], ys[best], xs[best - 1], xs[best + 1], coarse_points};
  double a = xs[best - 1], b = xs[best + 1];
  const double inv_phi = 1.0 / std::numbers::phi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = curve(c), fd = curve(d);
  peak.evaluations += 2;
  auto consider = [&](double x, double fx) {
    if (fx > peak.value) {
      peak.x = x;
      peak.value = fx;
    }
  };
  consider(c, fc);
  consider(d, fd);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = curve(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = curve(d);
      consider(d, fd);
    }
    ++peak.evaluations;
  }
  return peak;
}

OptimalPoint find_optimal_point(const LoopFamily& family, const NoiseModel& noise,
                                std::size_t n_states, std::size_t steps,
                                const PeakSearchOptions& options) {
  noise.validate();
  const double first = family.optimal_omega_tau(1);
  const PeakLocation peak = locate_peak(
      [&](double x) { return mean_fidelity(family.at_omega_tau(x), noise, n_states, steps); },
      options.window_lo * first, options.window_hi * first, options.coarse_points,
      options.tolerance);
  OptimalPoint p;
  p.omega_tau_star = peak.x;
  p.tau_star = peak.x / family.omega;
  p.f_star = peak.value;
  p.lambda_sq = noise.lambda_sq;
  p.bracket_lo = peak.bracket_lo;
  p.bracket_hi = peak.bracket_hi;
  p.tolerance = options.tolerance;
  p.evaluations = peak.evaluations;
  return p;
}

RobustnessResult robustness(const LoopFamily& family, const NoiseModel& noise,
                            std::size_t n_states, std::size_t steps,
                            const PeakSearchOptions& options) {
  const OptimalPoint opt = find_optimal_point(family, noise, n_states, steps, options);
  RobustnessResult r;
  r.lambda_sq = noise.lambda_sq;
  r.f_star = opt.f_star;
  r.omega_tau_star = opt.omega_tau_star;
  r.f_adiabatic =
      mean_fidelity(family.at_omega_tau(family.optimal_omega_tau(3)), noise, n_states, steps);
  r.r = (r.f_star - r.f_adiabatic) / r.f_star;
  return r;
}

}  // namespace holonomy
