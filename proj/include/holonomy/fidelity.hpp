#pragma once

// Mean gate fidelity over dark-subspace inputs, fidelity sweeps, optimal
// working point search and the robustness parameter.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "holonomy/loop.hpp"
#include "holonomy/open_system.hpp"

namespace holonomy {

inline constexpr std::size_t kDefaultStates = 100;

struct BlochState {
  double polar = 0.0;    // Bloch angle vartheta
  double azimuth = 0.0;  // Bloch angle varphi
  cplx c0;               // amplitude on D0(0)
  cplx c1;               // amplitude on D1(0)
  std::vector<cplx> lab;  // cos(vartheta/2)|D0(0)> + e^{i varphi} sin(vartheta/2)|D1(0)>
};

struct InputStateSet {
  std::vector<BlochState> states;
  std::size_t size() const noexcept { return states.size(); }
};

/// Golden-spiral lattice of n >= 6 pure states in span{D0, D1} at `origin`.
InputStateSet bloch_states(std::size_t n, const SphericalPoint& origin = {});

/// Tr{sigma_ad sigma} per input state. Noise with zero rates and shifts (or
/// lambda^2 = 0) uses the exact propagator instead of the ODE.
std::vector<double> state_fidelities(const LoopSpec& loop, const NoiseModel& noise,
                                     const InputStateSet& inputs,
                                     std::size_t steps = kDefaultSteps);

double mean_fidelity(const LoopSpec& loop, const NoiseModel& noise,
                     std::size_t n_states = kDefaultStates, std::size_t steps = kDefaultSteps);

/// 2x2 holonomy used as the fidelity target: closed form when available,
/// otherwise the path-ordered connection.
ComplexMatrix target_holonomy(const LoopSpec& loop);

struct SweepSample {
  double omega_tau = 0.0;
  double mean_fidelity = 0.0;
};

struct SweepCurve {
  double lambda_sq = 0.0;
  std::vector<SweepSample> samples;
  std::size_t n_states = kDefaultStates;
  std::size_t steps = kDefaultSteps;
  std::string noise_label;
};

/// One curve per lambda^2 (the base model's tables with lambda^2 replaced).
/// Grid must be strictly increasing and positive.
std::vector<SweepCurve> sweep(const LoopFamily& family, std::span<const double> omega_tau_grid,
                              std::span<const double> lambda_sq, const NoiseModel& base,
                              std::size_t n_states = kDefaultStates,
                              std::size_t steps = kDefaultSteps);

struct PeakSearchOptions {
  double window_lo = 0.7;  // in units of the first noiseless revival
  double window_hi = 1.3;
  std::size_t coarse_points = 25;
  double tolerance = 1e-4;  // on Omega*tau
};

struct OptimalPoint {
  double tau_star = 0.0;
  double omega_tau_star = 0.0;
  double f_star = 0.0;
  double lambda_sq = 0.0;
  double bracket_lo = 0.0;  // Omega*tau
  double bracket_hi = 0.0;
  double tolerance = 0.0;
  std::size_t evaluations = 0;
};

struct PeakLocation {
  double x = 0.0;
  double value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::size_t evaluations = 0;
};

/// Coarse scan of [lo, hi] followed by golden-section refinement around the
/// best interior sample. Throws NoPeakInWindow when the best sample sits on
/// the window edge or the curve is flat.
PeakLocation locate_peak(const std::function<double(double)>& curve, double lo, double hi,
                         std::size_t coarse_points, double tolerance);

OptimalPoint find_optimal_point(const LoopFamily& family, const NoiseModel& noise,
                                std::size_t n_states = kDefaultStates,
                                std::size_t steps = kDefaultSteps,
                                const PeakSearchOptions& options = {});

struct RobustnessResult {
  double lambda_sq = 0.0;
  double f_star = 0.0;
  double omega_tau_star = 0.0;
  double f_adiabatic = 0.0;  // mean fidelity at the third revival
  double r = 0.0;            // (F* - F_adiab) / F*
};

RobustnessResult robustness(const LoopFamily& family, const NoiseModel& noise,
                            std::size_t n_states = kDefaultStates,
                            std::size_t steps = kDefaultSteps,
                            const PeakSearchOptions& options = {});

}  // namespace holonomy
