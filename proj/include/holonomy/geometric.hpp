#pragma once

// Transport generator, exact piecewise propagators, adiabatic holonomy and a
// brute-force Schrodinger integrator for loops on the tripod control sphere.
//
// Conventions: R(t, t0) = sum_k |D_k(t)><D_k(t0)| is built from the analytic
// eigenframe F (columns D0, D1, D+, D-), so R(t, t0) = F(t) F(t0)^T. The
// generator D(t, t0) = -i R^dagger dR/dt is constant on every arc, which makes
// U_arc = e^{i dt D} e^{-i dt (H(t0) + D)} exact.

#include <cstddef>

#include "holonomy/loop.hpp"
#include "holonomy/matrix.hpp"

namespace holonomy {

struct TransportGenerator {
  ComplexMatrix matrix;  // lab basis, units of 1/time
  std::size_t arc_index = 0;
};

enum class PropagatorKind { Exact, Adiabatic, Oracle };

struct GatePropagator {
  ComplexMatrix matrix;  // lab basis
  LoopSpec loop;
  PropagatorKind kind = PropagatorKind::Exact;

  /// 2x2 block acting on span{D0(0), D1(0)} in that basis.
  ComplexMatrix dark_block() const;
};

/// F(p)^dagger * op * F(p): an operator expressed in the eigenframe at p.
ComplexMatrix to_frame(const ComplexMatrix& op, const SphericalPoint& p);

/// D(t0, t0) = -i sum_k |dD_k/dt><D_k| at the start of the arc.
TransportGenerator transport_generator(const LoopSpec& loop, std::size_t arc_index);

/// D(t, t0) = -i R(t,t0)^dagger dR(t,t0)/dt at local time t - t0 inside the arc.
ComplexMatrix transport_generator_at(const LoopSpec& loop, std::size_t arc_index, double local_t);

/// The same generator in eigenframe coordinates, M = -i F^T dF/dt; constant
/// along the arc. Shared with the open-system integrator.
ComplexMatrix frame_generator(const LoopSpec& loop, std::size_t arc_index);

/// Lab-frame propagator across one arc.
ComplexMatrix arc_propagator(const LoopSpec& loop, std::size_t arc_index);

/// U = U_last ... U_2 U_1 (arc 0 acts first).
GatePropagator loop_propagator(const LoopSpec& loop);

/// Same propagator via the global transported frame:
/// F(tau) * prod_i exp(-i dt_i (diag(0,0,W,-W) + M_i)) * F(0)^T.
ComplexMatrix transported_frame_propagator(const LoopSpec& loop);

/// R(tau, 0) = F(tau) F(0)^T.
ComplexMatrix loop_frame_change(const LoopSpec& loop);

/// exp(i sigma_y omega) on span{D0(0), D1(0)} with omega the signed solid
/// angle. Throws UnsupportedLoop outside the wedge family.
ComplexMatrix adiabatic_holonomy(const LoopSpec& loop);

/// Path-ordered exponential of the dark-subspace connection on a midpoint
/// grid, closed by the frame overlap <D_j(0)|D_k(tau)>. Works for any loop.
ComplexMatrix path_ordered_holonomy(const LoopSpec& loop, std::size_t steps = 4096);

/// Adiabatic target: holonomy on the dark block, e^{-/+ i tau Omega} on D+/D-.
GatePropagator adiabatic_propagator(const LoopSpec& loop);

/// prod_j exp(-i H(t_j) dt) with midpoint samples t_j; O(dt^2) accurate.
GatePropagator schrodinger_oracle(const LoopSpec& loop, std::size_t steps);

}  // namespace holonomy
