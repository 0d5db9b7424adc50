#pragma once

// Four-level tripod: three ground levels |0>, |1>, |a> coupled to one
// excited level |e> with real Rabi frequencies on a sphere of radius Omega.

#include <array>
#include <cstddef>

#include "holonomy/matrix.hpp"

namespace holonomy {

inline constexpr std::size_t kTripodDim = 4;

/// Global basis ordering shared by every module.
enum class Level : std::size_t { Zero = 0, One = 1, Ancilla = 2, Excited = 3 };

constexpr std::size_t index(Level level) noexcept { return static_cast<std::size_t>(level); }

/// Column order of an EigenFrame.
enum class FrameState : std::size_t { Dark0 = 0, Dark1 = 1, BrightPlus = 2, BrightMinus = 3 };

constexpr std::size_t index(FrameState s) noexcept { return static_cast<std::size_t>(s); }

/// A point on the control sphere. omega is the (constant) Rabi scale, hbar = 1.
struct SphericalPoint {
  double theta = 0.0;
  double phi = 0.0;
  double omega = 1.0;

  /// Throws InvalidArgument for omega <= 0, theta outside [0, pi] or non-finite angles.
  void validate() const;
};

struct RabiFrequencies {
  double omega0 = 0.0;
  double omega1 = 0.0;
  double omega_a = 0.0;
};

RabiFrequencies rabi_from_angles(const SphericalPoint& p);

/// H = |e>(Omega0 <0| + Omega1 <1| + Omega_a <a|) + h.c.
ComplexMatrix hamiltonian(const SphericalPoint& p);

struct EigenFrame {
  ComplexMatrix vectors;                                      // columns D0, D1, D+, D-
  std::array<double, kTripodDim> energies{0.0, 0.0, 0.0, 0.0};  // 0, 0, +Omega, -Omega

  std::vector<cplx> state(FrameState s) const { return vectors.column(index(s)); }
};

/// Closed-form dark/bright eigenvectors in a fixed gauge; smooth in (theta, phi).
EigenFrame eigenframe(const SphericalPoint& p);

/// Time derivative of the eigenframe columns along a path with the given
/// angular rates (chain rule through theta and phi).
ComplexMatrix eigenframe_rate(const SphericalPoint& p, double theta_dot, double phi_dot);

}  // namespace holonomy
