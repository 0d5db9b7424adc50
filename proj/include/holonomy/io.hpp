#pragma once

// JSON and CSV representations of loops, noise models, propagators and
// analysis results.

#include <iosfwd>
#include <json.hpp>
#include <vector>

#include "holonomy/fidelity.hpp"
#include "holonomy/fitting.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/matrix.hpp"
#include "holonomy/open_system.hpp"

namespace holonomy::io {

using Json = nlohmann::ordered_json;

/// 2*dim^2 reals, row-major, re/im interleaved.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"omega_scale", "arcs": [{"kind", "fixed_angle", "start_angle",
/// "end_angle", "duration"}], "total_time"}. Unknown keys are rejected.
Json loop_to_json(const LoopSpec& loop);
LoopSpec loop_from_json(const Json& j);

/// {"lambda_sq", "gamma": {"-2": r, ...}, "lamb_shift": {...}, "label"};
/// table keys are multiples of Omega.
Json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const Json& j);

Json optimal_point_to_json(const OptimalPoint& p);
OptimalPoint optimal_point_from_json(const Json& j);

Json fit_result_to_json(const FitResult& fit);
Json robustness_to_json(const RobustnessResult& r);

/// Header `omega_tau,mean_fidelity`, one row per sample, 12 significant digits.
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);
std::vector<SweepSample> read_sweep_csv(std::istream& in);

/// %.12g
std::string format_number(double x);

}  // namespace holonomy::io
