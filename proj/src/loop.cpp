#include "holonomy/loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kClosureTol = 1e-12;
constexpr double kGeometryTol = 1e-12;
}  // namespace

double ArcSegment::angular_length() const { return std::abs(end_angle - start_angle); }

double ArcSegment::rate() const { return (end_angle - start_angle) / duration; }

SphericalPoint ArcSegment::point_at(double local_t, double omega) const {
  // Exact endpoint at the end of the arc, not start + rate*duration.
  const double angle = local_t >= duration ? end_angle : start_angle + rate() * local_t;
  if (kind == ArcKind::Meridian) return {angle, fixed_angle, omega};
  return {kPi / 2, angle, omega};
}

double LoopSpec::total_time() const {
  double t = 0.0;
  for (const ArcSegment& a : arcs) t += a.duration;
  return t;
}

double LoopSpec::arc_start(std::size_t index) const {
  if (index >= arcs.size()) throw Error(ErrorCode::IndexOutOfRange, "arc index");
  double t = 0.0;
  for (std::size_t i = 0; i < index; ++i) t += arcs[i].duration;
  return t;
}

SphericalPoint LoopSpec::start_point() const {
  if (arcs.empty()) throw Error(ErrorCode::InvalidArgument, "loop has no arcs");
  return arcs.front().point_at(0.0, omega_scale);
}

SphericalPoint LoopSpec::end_point() const {
  if (arcs.empty()) throw Error(ErrorCode::InvalidArgument, "loop has no arcs");
  return arcs.back().point_at(arcs.back().duration, omega_scale);
}

namespace {

// Points agree as locations on the sphere: theta equal, and phi equal up to
// 2 pi wherever sin(theta) does not vanish.
bool same_location(const SphericalPoint& a, const SphericalPoint& b) {
  if (std::abs(a.theta - b.theta) > kClosureTol) return false;
  const double dphi = std::remainder(a.phi - b.phi, 2 * kPi);
  return std::abs(dphi * std::sin(a.theta)) <= kClosureTol;
}

}  // namespace

void LoopSpec::validate() const {
  if (!(omega_scale > 0.0) || !std::isfinite(omega_scale)) {
    throw Error(ErrorCode::InvalidArgument, "omega_scale must be positive and finite");
  }
  if (arcs.empty()) throw Error(ErrorCode::InvalidArgument, "loop has no arcs");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const ArcSegment& a = arcs[i];
    if (!(a.duration > 0.0) || !std::isfinite(a.duration)) {
      throw Error(ErrorCode::InvalidDuration, "arc " + std::to_string(i) + " duration must be > 0");
    }
    if (!std::isfinite(a.start_angle) || !std::isfinite(a.end_angle) ||
        !std::isfinite(a.fixed_angle)) {
      throw Error(ErrorCode::InvalidArgument, "arc " + std::to_string(i) + " has non-finite angle");
    }
    if (a.kind == ArcKind::Meridian) {
      for (double th : {a.start_angle, a.end_angle}) {
        if (th < -kGeometryTol || th > kPi + kGeometryTol) {
          throw Error(ErrorCode::InvalidArgument, "meridian theta outside [0, pi]");
        }
      }
    }
    if (i + 1 < arcs.size() &&
        !same_location(a.point_at(a.duration, omega_scale),
                       arcs[i + 1].point_at(0.0, omega_scale))) {
      throw Error(ErrorCode::InvalidArgument,
                  "arcs " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not join");
    }
  }
  if (!same_location(end_point(), start_point())) {
    throw Error(ErrorCode::InvalidArgument, "loop is not closed");
  }
}

LoopSpec standard_not_loop(double omega, double tau) { return wedge_loop(1, omega, tau); }

LoopSpec wedge_loop(int n, double omega, double tau) {
  if (n < 1) throw Error(ErrorCode::InvalidOrder, "wedge order n must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::InvalidDuration, "loop time must be positive");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  }
  const double opening = kPi / (2.0 * n);
  const double total_length = kPi + opening;
  const double meridian_time = tau * (kPi / 2) / total_length;
  const double equator_time = tau * opening / total_length;

  LoopSpec loop;
  loop.omega_scale = omega;
  loop.arcs = {
      {ArcKind::Meridian, 0.0, 0.0, kPi / 2, meridian_time},
      {ArcKind::Equator, kPi / 2, 0.0, opening, equator_time},
      {ArcKind::Meridian, opening, kPi / 2, 0.0, meridian_time},
  };
  return loop;
}

LoopSpec reversed(const LoopSpec& loop) {
  LoopSpec out;
  out.omega_scale = loop.omega_scale;
  out.arcs.reserve(loop.arcs.size());
  for (auto it = loop.arcs.rbegin(); it != loop.arcs.rend(); ++it) {
    ArcSegment a = *it;
    std::swap(a.start_angle, a.end_angle);
    out.arcs.push_back(a);
  }
  return out;
}

std::pair<std::size_t, double> locate(const LoopSpec& loop, double t) {
  const double total = loop.total_time();
  // rounding in the summed durations
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * total;
  if (!(t >= 0.0) || t > total + slack) {
    throw Error(ErrorCode::TimeOutOfRange,
                "t = " + std::to_string(t) + " outside [0, " + std::to_string(total) + "]");
  }
  double start = 0.0;
  for (std::size_t i = 0; i < loop.arcs.size(); ++i) {
    const double end = start + loop.arcs[i].duration;
    if (t < end || i + 1 == loop.arcs.size()) {
      return {i, std::min(t - start, loop.arcs[i].duration)};
    }
    start = end;
  }
  return {loop.arcs.size() - 1, loop.arcs.back().duration};
}

PathState angles_at(const LoopSpec& loop, double t) {
  if (loop.arcs.empty()) throw Error(ErrorCode::InvalidArgument, "loop has no arcs");
  const auto [i, local] = locate(loop, t);
  const ArcSegment& arc = loop.arcs[i];
  const SphericalPoint p = arc.point_at(local, loop.omega_scale);
  PathState s{p.theta, p.phi, 0.0, 0.0};
  if (arc.kind == ArcKind::Meridian) {
    s.theta_dot = arc.rate();
  } else {
    s.phi_dot = arc.rate();
  }
  return s;
}

std::optional<WedgeGeometry> wedge_geometry(const LoopSpec& loop) {
  if (loop.arcs.size() != 3) return std::nullopt;
  const ArcSegment& up = loop.arcs[0];
  const ArcSegment& eq = loop.arcs[1];
  const ArcSegment& down = loop.arcs[2];
  auto near = [](double a, double b) { return std::abs(a - b) <= kGeometryTol; };
  if (up.kind != ArcKind::Meridian || eq.kind != ArcKind::Equator || down.kind != ArcKind::Meridian)
    return std::nullopt;
  if (!near(up.start_angle, 0.0) || !near(up.end_angle, kPi / 2)) return std::nullopt;
  if (!near(down.start_angle, kPi / 2) || !near(down.end_angle, 0.0)) return std::nullopt;
  if (!near(eq.start_angle, up.fixed_angle) || !near(eq.end_angle, down.fixed_angle))
    return std::nullopt;
  return WedgeGeometry{up.fixed_angle, down.fixed_angle};
}

double solid_angle(const LoopSpec& loop) {
  const auto geometry = wedge_geometry(loop);
  if (!geometry) {
    throw Error(ErrorCode::UnsupportedLoop, "solid angle only defined for the wedge family");
  }
  return geometry->solid_angle();
}

std::vector<std::size_t> steps_per_arc(const LoopSpec& loop, std::size_t total) {
  const std::size_t n = loop.arcs.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "loop has no arcs");
  if (total < n) throw Error(ErrorCode::InvalidArgument, "fewer steps than arcs");
  const double tau = loop.total_time();
  std::vector<std::size_t> out(n, 1);
  std::vector<double> remainder(n, 0.0);
  const std::size_t spare = total - n;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double share = spare * loop.arcs[i].duration / tau;
    const auto whole = static_cast<std::size_t>(std::floor(share));
    out[i] += whole;
    used += whole;
    remainder[i] = share - whole;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t j = 0; used < spare; ++j, ++used) out[order[j % n]] += 1;
  return out;
}

double optimal_time(int k, int n, double omega) {
  if (k < 1 || n < 1) throw Error(ErrorCode::InvalidOrder, "k and n must be >= 1");
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  const double kn = static_cast<double>(k) * n;
  return (2.0 * n + 1.0) * kPi / (2.0 * n * omega) * std::sqrt(16.0 * kn * kn - 1.0);
}

LoopSpec LoopFamily::at_time(double tau) const {
  LoopSpec loop = wedge_loop(n, omega, tau);
  return reverse ? reversed(loop) : loop;
}

}  // namespace holonomy
