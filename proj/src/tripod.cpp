#include "holonomy/tripod.hpp"

#include <cmath>
#include <numbers>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {
constexpr double kAngleSlack = 1e-12;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

void SphericalPoint::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite spherical point");
  }
  if (omega <= 0.0) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  if (theta < -kAngleSlack || theta > std::numbers::pi + kAngleSlack) {
    throw Error(ErrorCode::InvalidArgument, "theta outside [0, pi]");
  }
}

RabiFrequencies rabi_from_angles(const SphericalPoint& p) {
  p.validate();
  const double st = std::sin(p.theta);
  return {p.omega * st * std::sin(p.phi), p.omega * st * std::cos(p.phi),
          p.omega * std::cos(p.theta)};
}

ComplexMatrix hamiltonian(const SphericalPoint& p) {
  const RabiFrequencies r = rabi_from_angles(p);
  ComplexMatrix h(kTripodDim);
  const std::size_t e = index(Level::Excited);
  h(e, index(Level::Zero)) = h(index(Level::Zero), e) = r.omega0;
  h(e, index(Level::One)) = h(index(Level::One), e) = r.omega1;
  h(e, index(Level::Ancilla)) = h(index(Level::Ancilla), e) = r.omega_a;
  return h;
}

EigenFrame eigenframe(const SphericalPoint& p) {
  p.validate();
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  EigenFrame f;
  f.vectors = ComplexMatrix(kTripodDim);
  f.energies = {0.0, 0.0, p.omega, -p.omega};
  ComplexMatrix& v = f.vectors;
  const std::size_t z = index(Level::Zero), o = index(Level::One), a = index(Level::Ancilla),
                    e = index(Level::Excited);
  const std::size_t d0 = index(FrameState::Dark0), d1 = index(FrameState::Dark1),
                    bp = index(FrameState::BrightPlus), bm = index(FrameState::BrightMinus);

  v(z, d0) = cp;
  v(o, d0) = -sp;

  v(z, d1) = ct * sp;
  v(o, d1) = ct * cp;
  v(a, d1) = -st;

  for (std::size_t col : {bp, bm}) {
    v(z, col) = kInvSqrt2 * st * sp;
    v(o, col) = kInvSqrt2 * st * cp;
    v(a, col) = kInvSqrt2 * ct;
  }
  v(e, bp) = kInvSqrt2;
  v(e, bm) = -kInvSqrt2;
  return f;
}

ComplexMatrix eigenframe_rate(const SphericalPoint& p, double theta_dot, double phi_dot) {
  p.validate();
  if (!std::isfinite(theta_dot) || !std::isfinite(phi_dot)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite angular rate");
  }
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  const double td = theta_dot, pd = phi_dot;
  ComplexMatrix r(kTripodDim);
  const std::size_t z = index(Level::Zero), o = index(Level::One), a = index(Level::Ancilla);
  const std::size_t d0 = index(FrameState::Dark0), d1 = index(FrameState::Dark1),
                    bp = index(FrameState::BrightPlus), bm = index(FrameState::BrightMinus);

  r(z, d0) = -sp * pd;
  r(o, d0) = -cp * pd;

  r(z, d1) = -st * sp * td + ct * cp * pd;
  r(o, d1) = -st * cp * td - ct * sp * pd;
  r(a, d1) = -ct * td;

  for (std::size_t col : {bp, bm}) {
    r(z, col) = kInvSqrt2 * (ct * sp * td + st * cp * pd);
    r(o, col) = kInvSqrt2 * (ct * cp * td - st * sp * pd);
    r(a, col) = -kInvSqrt2 * st * td;
  }
  return r;
}

}  // namespace holonomy
