#pragma once

// Closed control paths on the parameter sphere built from meridian and
// equator arcs, each traversed at constant angular speed.

#include <cstddef>
#include <optional>
#include <vector>

#include "holonomy/tripod.hpp"

namespace holonomy {

enum class ArcKind { Meridian, Equator };

/// Meridian: theta runs start->end at phi = fixed_angle.
/// Equator: phi runs start->end at theta = pi/2 (fixed_angle unused, kept at pi/2).
struct ArcSegment {
  ArcKind kind = ArcKind::Meridian;
  double fixed_angle = 0.0;
  double start_angle = 0.0;
  double end_angle = 0.0;
  double duration = 1.0;

  double angular_length() const;
  double rate() const;
  SphericalPoint point_at(double local_t, double omega) const;
};

struct LoopSpec {
  double omega_scale = 1.0;
  std::vector<ArcSegment> arcs;

  double total_time() const;
  /// Time at which arc `index` starts.
  double arc_start(std::size_t index) const;
  SphericalPoint start_point() const;
  SphericalPoint end_point() const;

  /// Throws InvalidDuration / InvalidArgument when arcs are malformed or the
  /// path does not close.
  void validate() const;
};

struct PathState {
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
};

/// Pole -> equator at phi=0, along the equator to phi=pi/2, back to the pole;
/// three arcs of equal duration.
LoopSpec standard_not_loop(double omega, double tau);

/// Same construction with an equatorial opening of pi/(2n); durations are
/// proportional to angular length. wedge_loop(1, ...) == standard_not_loop.
LoopSpec wedge_loop(int n, double omega, double tau);

/// Arcs in reverse order with start/end swapped.
LoopSpec reversed(const LoopSpec& loop);

/// Angles and rates at time t in [0, total_time]. On an arc boundary the
/// later arc wins (except at t = total_time).
PathState angles_at(const LoopSpec& loop, double t);

/// Locates the arc containing t: (arc index, time since that arc started).
std::pair<std::size_t, double> locate(const LoopSpec& loop, double t);

struct WedgeGeometry {
  double phi_first = 0.0;   // meridian leaving the pole
  double phi_second = 0.0;  // meridian returning to the pole
  /// Signed enclosed solid angle; positive for the pole -> phi_first ->
  /// phi_second orientation with phi_second > phi_first.
  double solid_angle() const { return phi_second - phi_first; }
};

/// Recognizes the pole/meridian/equator/meridian triangle family.
std::optional<WedgeGeometry> wedge_geometry(const LoopSpec& loop);

/// Signed solid angle; throws UnsupportedLoop outside the wedge family.
double solid_angle(const LoopSpec& loop);

/// Splits `total` integration steps across the arcs in proportion to their
/// durations (largest-remainder rounding, at least one step per arc).
std::vector<std::size_t> steps_per_arc(const LoopSpec& loop, std::size_t total);

/// tau*_k(n) = (2n+1) pi / (2 n Omega) * sqrt(16 k^2 n^2 - 1)
double optimal_time(int k, int n, double omega);

/// The wedge family at fixed (n, Omega, orientation), parametrized by tau.
struct LoopFamily {
  int n = 1;
  double omega = 1.0;
  bool reverse = false;

  LoopSpec at_time(double tau) const;
  LoopSpec at_omega_tau(double omega_tau) const { return at_time(omega_tau / omega); }
  double optimal_omega_tau(int k) const { return omega * optimal_time(k, n, omega); }
};

}  // namespace holonomy
