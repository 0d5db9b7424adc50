#pragma once

// Lindblad master equation for the tripod with the bath coupled to the
// |0> <-> |e> transition, integrated in the transported (R-) picture.

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "holonomy/kernels.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/matrix.hpp"

namespace holonomy {

inline constexpr std::size_t kDefaultSteps = 4000;

/// Harmonics h of the transition frequencies omega = h * Omega.
inline constexpr std::array<int, 5> kHarmonics{-2, -1, 0, 1, 2};

struct NoiseModel {
  double lambda_sq = 0.0;
  /// Decay rate per harmonic (1/time); missing entries mean zero.
  std::map<int, double> gamma;
  /// Lamb shift per harmonic (1/time); missing entries mean zero.
  std::map<int, double> lamb_shift;
  std::string label;

  /// Flat table gamma(omega) = gamma0 with zero Lamb shifts.
  static NoiseModel high_temperature(double lambda_sq, double gamma0 = 1.0);

  double rate(int harmonic) const;
  double shift(int harmonic) const;
  void validate() const;
};

struct DensityMatrix {
  ComplexMatrix matrix;

  static DensityMatrix pure(std::span<const cplx> state);
  double trace_deviation() const;
  double min_eigenvalue() const;
  /// Hermitian and unit trace to `tolerance`, eigenvalues >= -1e-8.
  void validate(double tolerance = 1e-10) const;
};

struct JumpOperator {
  int harmonic = 0;
  double frequency = 0.0;  // harmonic * Omega
  ComplexMatrix op;        // lab basis
};

/// Eigenoperator decomposition A = sum_omega A_omega of A = |0><e| + |e><0|
/// at one path point, A_omega = sum_{e' - e = omega} P_e A P_e'.
struct JumpOperatorSet {
  std::vector<JumpOperator> ops;

  ComplexMatrix sum() const;
  const JumpOperator& at(int harmonic) const;
};

JumpOperatorSet jump_operators(const SphericalPoint& p);

/// Gamma(sigma) = sum_w gamma(w) [A_w sigma A_w^dag - {A_w^dag A_w, sigma}/2]
///                - i [sum_w s(w) A_w^dag A_w, sigma]
/// (without the lambda^2 prefactor).
ComplexMatrix dissipator_apply(const JumpOperatorSet& ops, const NoiseModel& noise,
                               const ComplexMatrix& sigma);

/// Integrates the master equation around the loop with classical RK4 and
/// returns the lab-frame density matrix at loop closure. Throws
/// StepCountTooSmall if the trace drifts by more than 1e-6.
DensityMatrix evolve_density(const LoopSpec& loop, const NoiseModel& noise,
                             const DensityMatrix& sigma0, std::size_t steps = kDefaultSteps,
                             const simd::KernelTable& kernels = simd::active_kernels());

/// Images of |D_a(0)><D_b(0)| (a, b in {0, 1}) after one loop, in the
/// coordinates of the initial eigenframe. images[2*a + b].
struct DarkSubspaceMap {
  std::array<ComplexMatrix, 4> images;

  /// Output state for the dark-subspace input c0 |D0(0)> + c1 |D1(0)>.
  ComplexMatrix apply(cplx c0, cplx c1) const;
};

DarkSubspaceMap evolve_dark_map(const LoopSpec& loop, const NoiseModel& noise,
                                std::size_t steps = kDefaultSteps,
                                const simd::KernelTable& kernels = simd::active_kernels());

}  // namespace holonomy
