#include "holonomy/geometric.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

void check_arc(const LoopSpec& loop, std::size_t arc_index) {
  if (arc_index >= loop.arcs.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "arc index " + std::to_string(arc_index) +
                                                " for a loop with " +
                                                std::to_string(loop.arcs.size()) + " arcs");
  }
}

struct ArcPoint {
  SphericalPoint point;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
};

ArcPoint arc_point(const LoopSpec& loop, std::size_t arc_index, double local_t) {
  const ArcSegment& arc = loop.arcs[arc_index];
  ArcPoint out{arc.point_at(local_t, loop.omega_scale)};
  (arc.kind == ArcKind::Meridian ? out.theta_dot : out.phi_dot) = arc.rate();
  return out;
}

ComplexMatrix times_minus_i(ComplexMatrix m) { return m *= cplx(0.0, -1.0); }

ComplexMatrix frame_energies(double omega) {
  const double e[] = {0.0, 0.0, omega, -omega};
  return ComplexMatrix::diagonal(std::span<const double>(e));
}

}  // namespace

ComplexMatrix GatePropagator::dark_block() const {
  return to_frame(matrix, loop.start_point()).block(0, 2);
}

ComplexMatrix to_frame(const ComplexMatrix& op, const SphericalPoint& p) {
  const ComplexMatrix f = eigenframe(p).vectors;
  return f.adjoint() * op * f;
}

TransportGenerator transport_generator(const LoopSpec& loop, std::size_t arc_index) {
  check_arc(loop, arc_index);
  const ArcPoint ap = arc_point(loop, arc_index, 0.0);
  const ComplexMatrix f = eigenframe(ap.point).vectors;
  const ComplexMatrix df = eigenframe_rate(ap.point, ap.theta_dot, ap.phi_dot);
  return {times_minus_i(df * f.adjoint()), arc_index};
}

ComplexMatrix transport_generator_at(const LoopSpec& loop, std::size_t arc_index, double local_t) {
  check_arc(loop, arc_index);
  const ArcSegment& arc = loop.arcs[arc_index];
  if (local_t < 0.0 || local_t > arc.duration) {
    throw Error(ErrorCode::TimeOutOfRange, "local time outside the arc");
  }
  const ArcPoint start = arc_point(loop, arc_index, 0.0);
  const ArcPoint now = arc_point(loop, arc_index, local_t);
  const ComplexMatrix f0 = eigenframe(start.point).vectors;
  const ComplexMatrix f = eigenframe(now.point).vectors;
  const ComplexMatrix df = eigenframe_rate(now.point, now.theta_dot, now.phi_dot);
  return times_minus_i(f0 * f.adjoint() * df * f0.adjoint());
}

ComplexMatrix frame_generator(const LoopSpec& loop, std::size_t arc_index) {
  check_arc(loop, arc_index);
  const ArcPoint ap = arc_point(loop, arc_index, 0.0);
  const ComplexMatrix f = eigenframe(ap.point).vectors;
  const ComplexMatrix df = eigenframe_rate(ap.point, ap.theta_dot, ap.phi_dot);
  return times_minus_i(f.adjoint() * df);
}

ComplexMatrix arc_propagator(const LoopSpec& loop, std::size_t arc_index) {
  check_arc(loop, arc_index);
  const double dt = loop.arcs[arc_index].duration;
  const ComplexMatrix d = transport_generator(loop, arc_index).matrix;
  const ComplexMatrix h = hamiltonian(arc_point(loop, arc_index, 0.0).point);
  return exp_i_hermitian(d, dt) * exp_i_hermitian(h + d, -dt);
}

GatePropagator loop_propagator(const LoopSpec& loop) {
  loop.validate();
  ComplexMatrix u = ComplexMatrix::identity(kTripodDim);
  for (std::size_t i = 0; i < loop.arcs.size(); ++i) u = arc_propagator(loop, i) * u;
  return {u, loop, PropagatorKind::Exact};
}

ComplexMatrix loop_frame_change(const LoopSpec& loop) {
  return eigenframe(loop.end_point()).vectors * eigenframe(loop.start_point()).vectors.adjoint();
}

ComplexMatrix transported_frame_propagator(const LoopSpec& loop) {
  loop.validate();
  const ComplexMatrix energies = frame_energies(loop.omega_scale);
  ComplexMatrix u = ComplexMatrix::identity(kTripodDim);
  for (std::size_t i = 0; i < loop.arcs.size(); ++i) {
    u = exp_i_hermitian(energies + frame_generator(loop, i), -loop.arcs[i].duration) * u;
  }
  return eigenframe(loop.end_point()).vectors * u * eigenframe(loop.start_point()).vectors.adjoint();
}

ComplexMatrix adiabatic_holonomy(const LoopSpec& loop) {
  loop.validate();
  const double w = solid_angle(loop);
  double c = std::cos(w), s = std::sin(w);
  // quarter turns come out exact
  const double q = w / (0.5 * std::numbers::pi);
  if (std::abs(q - std::round(q)) < 1e-12) {
    const long k = ((std::lround(q) % 4) + 4) % 4;
    constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    c = kCos[k];
    s = kSin[k];
  }
  // exp(i sigma_y w) with sigma_y = -i(|D0><D1| - |D1><D0|)
  return ComplexMatrix(2, {c, s, -s, c});
}

ComplexMatrix path_ordered_holonomy(const LoopSpec& loop, std::size_t steps) {
  loop.validate();
  const std::vector<std::size_t> per_arc = steps_per_arc(loop, steps);
  ComplexMatrix u = ComplexMatrix::identity(2);
  for (std::size_t i = 0; i < loop.arcs.size(); ++i) {
    const double dt = loop.arcs[i].duration / static_cast<double>(per_arc[i]);
    for (std::size_t j = 0; j < per_arc[i]; ++j) {
      const ArcPoint ap = arc_point(loop, i, (j + 0.5) * dt);
      const ComplexMatrix f = eigenframe(ap.point).vectors;
      const ComplexMatrix df = eigenframe_rate(ap.point, ap.theta_dot, ap.phi_dot);
      // connection A = P F^T dF P is anti-Hermitian; exp(-A dt) = exp(i (iA) dt)
      ComplexMatrix i_a = (f.adjoint() * df).block(0, 2);
      i_a *= cplx(0.0, 1.0);
      u = exp_i_hermitian(i_a, dt) * u;
    }
  }
  const ComplexMatrix overlap =
      (eigenframe(loop.start_point()).vectors.adjoint() * eigenframe(loop.end_point()).vectors)
          .block(0, 2);
  return overlap * u;
}

GatePropagator adiabatic_propagator(const LoopSpec& loop) {
  const ComplexMatrix hol = adiabatic_holonomy(loop);
  const double tau_omega = loop.total_time() * loop.omega_scale;
  ComplexMatrix in_frame(kTripodDim);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) in_frame(i, j) = hol(i, j);
  in_frame(2, 2) = std::polar(1.0, -tau_omega);
  in_frame(3, 3) = std::polar(1.0, tau_omega);
  const ComplexMatrix f0 = eigenframe(loop.start_point()).vectors;
  return {f0 * in_frame * f0.adjoint(), loop, PropagatorKind::Adiabatic};
}

GatePropagator schrodinger_oracle(const LoopSpec& loop, std::size_t steps) {
  loop.validate();
  const std::vector<std::size_t> per_arc = steps_per_arc(loop, steps);
  ComplexMatrix u = ComplexMatrix::identity(kTripodDim);
  for (std::size_t i = 0; i < loop.arcs.size(); ++i) {
    const double dt = loop.arcs[i].duration / static_cast<double>(per_arc[i]);
    for (std::size_t j = 0; j < per_arc[i]; ++j) {
      const SphericalPoint p = loop.arcs[i].point_at((j + 0.5) * dt, loop.omega_scale);
      u = exp_i_hermitian(hamiltonian(p), -dt) * u;
    }
  }
  return {u, loop, PropagatorKind::Oracle};
}

}  // namespace holonomy
