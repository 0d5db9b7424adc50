#include "holonomy/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "holonomy/errors.hpp"
#include "holonomy/geometric.hpp"
#include "holonomy/tripod.hpp"

namespace holonomy {

namespace {

constexpr double kTraceDriftLimit = 1e-6;
// Eigenframe energies in units of Omega: D0, D1, D+, D-.
constexpr std::array<int, kTripodDim> kFrameHarmonic{0, 0, 1, -1};

double lookup(const std::map<int, double>& table, int harmonic) {
  const auto it = table.find(harmonic);
  return it == table.end() ? 0.0 : it->second;
}

// Coupling operator A = |0><e| + |e><0| expressed in the eigenframe F (real,
// orthogonal): A_jk = F_0j F_ek + F_ej F_0k.
void coupling_in_frame(const ComplexMatrix& f, std::array<double, 16>& out) {
  const std::size_t z = index(Level::Zero), e = index(Level::Excited);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k)
      out[4 * j + k] = f(z, j).real() * f(e, k).real() + f(e, j).real() * f(z, k).real();
}

// Generator of the frame equation at one instant:
//   d sigma/dt = -i (K sigma - sigma K^dag) + sum_c w_c L_c sigma L_c^dag
// with K = H_E + M + lambda^2 H_LS - (i/2) lambda^2 sum_w gamma(w) A_w^dag A_w.
struct Snapshot {
  std::array<cplx, 16> k{};
  std::array<cplx, 16> k_dag{};
  std::size_t channels = 0;
  std::array<std::array<cplx, 16>, kHarmonics.size()> jump{};
  std::array<std::array<cplx, 16>, kHarmonics.size()> jump_dag{};
  std::array<double, kHarmonics.size()> weight{};
};

class FrameGenerator {
 public:
  FrameGenerator(const LoopSpec& loop, const NoiseModel& noise) : loop_(loop) {
    for (std::size_t h = 0; h < kHarmonics.size(); ++h) {
      rate_[h] = noise.lambda_sq * noise.rate(kHarmonics[h]);
      shift_[h] = noise.lambda_sq * noise.shift(kHarmonics[h]);
      active_ = active_ || rate_[h] != 0.0 || shift_[h] != 0.0;
    }
  }

  void begin_arc(std::size_t arc) {
    arc_ = arc;
    const ComplexMatrix m = frame_generator(loop_, arc);
    for (std::size_t n = 0; n < 16; ++n) coherent_[n] = m.data()[n];
    for (std::size_t d = 0; d < 4; ++d) {
      coherent_[5 * d] += static_cast<double>(kFrameHarmonic[d]) * loop_.omega_scale;
    }
  }

  void fill(double local_t, Snapshot& s) const {
    s.k = coherent_;
    s.channels = 0;
    if (active_) add_dissipation(local_t, s);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 4; ++i) s.k_dag[4 * j + i] = std::conj(s.k[4 * i + j]);
  }

 private:
  void add_dissipation(double local_t, Snapshot& s) const {
    const SphericalPoint p = loop_.arcs[arc_].point_at(local_t, loop_.omega_scale);
    std::array<double, 16> a{};
    coupling_in_frame(eigenframe(p).vectors, a);
    for (std::size_t h = 0; h < kHarmonics.size(); ++h) {
      if (rate_[h] == 0.0 && shift_[h] == 0.0) continue;
      std::array<double, 16> ah{};
      bool nonzero = false;
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
          if (kFrameHarmonic[k] - kFrameHarmonic[j] != kHarmonics[h]) continue;
          ah[4 * j + k] = a[4 * j + k];
          nonzero = nonzero || a[4 * j + k] != 0.0;
        }
      if (!nonzero) continue;
      // A^dag A for real A: (A^T A)_jk = sum_i A_ij A_ik
      const cplx coeff(shift_[h], -0.5 * rate_[h]);
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
          double ata = 0.0;
          for (std::size_t i = 0; i < 4; ++i) ata += ah[4 * i + j] * ah[4 * i + k];
          s.k[4 * j + k] += coeff * ata;
        }
      if (rate_[h] == 0.0) continue;
      const std::size_t c = s.channels++;
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
          s.jump[c][4 * j + k] = ah[4 * j + k];
          s.jump_dag[c][4 * k + j] = ah[4 * j + k];
        }
      s.weight[c] = rate_[h];
    }
  }

  const LoopSpec& loop_;
  std::array<double, kHarmonics.size()> rate_{};
  std::array<double, kHarmonics.size()> shift_{};
  bool active_ = false;
  std::size_t arc_ = 0;
  std::array<cplx, 16> coherent_{};
};

void apply_generator(const Snapshot& s, const cplx* sigma, cplx* out,
                     const simd::KernelTable& kern) {
  std::fill(out, out + 16, cplx(0.0, 0.0));
  kern.mul4_acc(cplx(0.0, -1.0), s.k.data(), sigma, out);
  kern.mul4_acc(cplx(0.0, 1.0), sigma, s.k_dag.data(), out);
  std::array<cplx, 16> tmp;
  for (std::size_t c = 0; c < s.channels; ++c) {
    kern.mul4(s.jump[c].data(), sigma, tmp.data());
    kern.mul4_acc(cplx(s.weight[c], 0.0), tmp.data(), s.jump_dag[c].data(), out);
  }
}

using Block = std::array<cplx, 16>;

// RK4 on a batch of frame-coordinate matrices, steps aligned to arc
// boundaries because M jumps there.
void integrate_frame(const LoopSpec& loop, const NoiseModel& noise, std::span<Block> batch,
                     std::size_t steps, const simd::KernelTable& kern) {
  const std::vector<std::size_t> per_arc = steps_per_arc(loop, steps);
  FrameGenerator gen(loop, noise);
  Snapshot s0, s_mid, s1;
  std::array<Block, 4> k;
  Block stage;
  for (std::size_t arc = 0; arc < loop.arcs.size(); ++arc) {
    gen.begin_arc(arc);
    const double h = loop.arcs[arc].duration / static_cast<double>(per_arc[arc]);
    gen.fill(0.0, s0);
    for (std::size_t step = 0; step < per_arc[arc]; ++step) {
      const double t = step * h;
      gen.fill(t + 0.5 * h, s_mid);
      gen.fill(step + 1 == per_arc[arc] ? loop.arcs[arc].duration : t + h, s1);
      for (Block& sigma : batch) {
        apply_generator(s0, sigma.data(), k[0].data(), kern);
        for (std::size_t n = 0; n < 16; ++n) stage[n] = sigma[n] + (0.5 * h) * k[0][n];
        apply_generator(s_mid, stage.data(), k[1].data(), kern);
        for (std::size_t n = 0; n < 16; ++n) stage[n] = sigma[n] + (0.5 * h) * k[1][n];
        apply_generator(s_mid, stage.data(), k[2].data(), kern);
        for (std::size_t n = 0; n < 16; ++n) stage[n] = sigma[n] + h * k[2][n];
        apply_generator(s1, stage.data(), k[3].data(), kern);
        for (std::size_t n = 0; n < 16; ++n) {
          sigma[n] += (h / 6.0) * (k[0][n] + 2.0 * k[1][n] + 2.0 * k[2][n] + k[3][n]);
        }
      }
      std::swap(s0, s1);
    }
  }
}

Block to_block(const ComplexMatrix& m) {
  Block b;
  std::copy(m.data(), m.data() + 16, b.begin());
  return b;
}

ComplexMatrix from_block(const Block& b) {
  ComplexMatrix m(kTripodDim);
  std::copy(b.begin(), b.end(), m.data());
  return m;
}

void check_steps(const LoopSpec& loop, std::size_t steps) {
  if (steps < loop.arcs.size()) {
    throw Error(ErrorCode::StepCountTooSmall, "need at least one step per arc");
  }
}

}  // namespace

NoiseModel NoiseModel::high_temperature(double lambda_sq, double gamma0) {
  NoiseModel m;
  m.lambda_sq = lambda_sq;
  for (int h : kHarmonics) {
    m.gamma[h] = gamma0;
    m.lamb_shift[h] = 0.0;
  }
  m.label = "high-temperature";
  return m;
}

double NoiseModel::rate(int harmonic) const { return lookup(gamma, harmonic); }

double NoiseModel::shift(int harmonic) const { return lookup(lamb_shift, harmonic); }

void NoiseModel::validate() const {
  if (!(lambda_sq >= 0.0) || !std::isfinite(lambda_sq)) {
    throw Error(ErrorCode::InvalidArgument, "lambda_sq must be finite and >= 0");
  }
  for (const auto& [h, g] : gamma) {
    if (std::find(kHarmonics.begin(), kHarmonics.end(), h) == kHarmonics.end()) {
      throw Error(ErrorCode::InvalidArgument, "rate table key " + std::to_string(h) +
                                                  " is not a transition harmonic (-2..2)");
    }
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::InvalidArgument, "decay rates must be finite and >= 0");
    }
  }
  for (const auto& [h, s] : lamb_shift) {
    if (std::find(kHarmonics.begin(), kHarmonics.end(), h) == kHarmonics.end()) {
      throw Error(ErrorCode::InvalidArgument, "Lamb-shift key " + std::to_string(h) +
                                                  " is not a transition harmonic (-2..2)");
    }
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "Lamb shift not finite");
  }
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> state) {
  const double n = norm(state);
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "zero state vector");
  std::vector<cplx> v(state.begin(), state.end());
  for (cplx& z : v) z /= n;
  return {ComplexMatrix::outer(v, v)};
}

double DensityMatrix::trace_deviation() const { return std::abs(matrix.trace() - 1.0); }

double DensityMatrix::min_eigenvalue() const {
  ComplexMatrix herm = matrix + matrix.adjoint();
  herm *= 0.5;
  return herm_eig(herm).eigenvalues.front();
}

void DensityMatrix::validate(double tolerance) const {
  if (!matrix.all_finite()) throw Error(ErrorCode::InvalidArgument, "density matrix not finite");
  if (!is_hermitian(matrix, tolerance)) {
    throw Error(ErrorCode::InvalidArgument, "density matrix not Hermitian");
  }
  if (trace_deviation() > tolerance) {
    throw Error(ErrorCode::InvalidArgument, "density matrix trace != 1");
  }
  if (min_eigenvalue() < -1e-8) {
    throw Error(ErrorCode::InvalidArgument, "density matrix has negative eigenvalue");
  }
}

ComplexMatrix JumpOperatorSet::sum() const {
  ComplexMatrix s(kTripodDim);
  for (const JumpOperator& j : ops) s += j.op;
  return s;
}

const JumpOperator& JumpOperatorSet::at(int harmonic) const {
  for (const JumpOperator& j : ops)
    if (j.harmonic == harmonic) return j;
  throw Error(ErrorCode::IndexOutOfRange, "no jump operator at harmonic " + std::to_string(harmonic));
}

JumpOperatorSet jump_operators(const SphericalPoint& p) {
  const ComplexMatrix f = eigenframe(p).vectors;
  std::array<double, 16> a{};
  coupling_in_frame(f, a);
  JumpOperatorSet set;
  for (int h : kHarmonics) {
    ComplexMatrix in_frame(kTripodDim);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        if (kFrameHarmonic[k] - kFrameHarmonic[j] == h) in_frame(j, k) = a[4 * j + k];
    set.ops.push_back({h, h * p.omega, f * in_frame * f.adjoint()});
  }
  return set;
}

ComplexMatrix dissipator_apply(const JumpOperatorSet& ops, const NoiseModel& noise,
                               const ComplexMatrix& sigma) {
  ComplexMatrix out(sigma.dim());
  ComplexMatrix lamb(sigma.dim());
  for (const JumpOperator& j : ops.ops) {
    const double g = noise.rate(j.harmonic);
    const double s = noise.shift(j.harmonic);
    const ComplexMatrix a_dag = j.op.adjoint();
    const ComplexMatrix ata = a_dag * j.op;
    if (g != 0.0) {
      ComplexMatrix term = j.op * sigma * a_dag;
      ComplexMatrix anti = ata * sigma + sigma * ata;
      anti *= 0.5;
      term -= anti;
      out += term * cplx(g, 0.0);
    }
    if (s != 0.0) lamb += ata * cplx(s, 0.0);
  }
  out += commutator(lamb, sigma) * cplx(0.0, -1.0);
  return out;
}

ComplexMatrix DarkSubspaceMap::apply(cplx c0, cplx c1) const {
  const cplx c[2] = {c0, c1};
  ComplexMatrix out(kTripodDim);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) out += images[2 * a + b] * (c[a] * std::conj(c[b]));
  return out;
}

DensityMatrix evolve_density(const LoopSpec& loop, const NoiseModel& noise,
                             const DensityMatrix& sigma0, std::size_t steps,
                             const simd::KernelTable& kernels) {
  loop.validate();
  noise.validate();
  sigma0.validate();
  check_steps(loop, steps);
  const ComplexMatrix f0 = eigenframe(loop.start_point()).vectors;
  const ComplexMatrix f1 = eigenframe(loop.end_point()).vectors;
  std::array<Block, 1> batch{to_block(f0.adjoint() * sigma0.matrix * f0)};
  integrate_frame(loop, noise, batch, steps, kernels);
  DensityMatrix out{f1 * from_block(batch[0]) * f1.adjoint()};
  if (out.trace_deviation() > kTraceDriftLimit) {
    throw Error(ErrorCode::StepCountTooSmall,
                "trace drift " + std::to_string(out.trace_deviation()) + " with " +
                    std::to_string(steps) + " steps");
  }
  return out;
}

DarkSubspaceMap evolve_dark_map(const LoopSpec& loop, const NoiseModel& noise, std::size_t steps,
                                const simd::KernelTable& kernels) {
  loop.validate();
  noise.validate();
  check_steps(loop, steps);
  // |D0><D0|, |D1><D1|, |D0><D1|; the fourth image is the adjoint of the third.
  std::array<Block, 3> batch{};
  batch[0][0] = 1.0;
  batch[1][5] = 1.0;
  batch[2][1] = 1.0;
  integrate_frame(loop, noise, batch, steps, kernels);

  const ComplexMatrix w =
      eigenframe(loop.start_point()).vectors.adjoint() * eigenframe(loop.end_point()).vectors;
  const ComplexMatrix w_dag = w.adjoint();
  DarkSubspaceMap map;
  map.images[0] = w * from_block(batch[0]) * w_dag;
  map.images[3] = w * from_block(batch[1]) * w_dag;
  map.images[1] = w * from_block(batch[2]) * w_dag;
  map.images[2] = map.images[1].adjoint();
  for (std::size_t d : {0u, 3u}) {
    const double drift = std::abs(map.images[d].trace() - 1.0);
    if (drift > kTraceDriftLimit) {
      throw Error(ErrorCode::StepCountTooSmall, "trace drift " + std::to_string(drift));
    }
  }
  return map;
}

}  // namespace holonomy
