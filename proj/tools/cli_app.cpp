#include "cli_app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "holonomy/errors.hpp"
#include "holonomy/fitting.hpp"
#include "holonomy/geometric.hpp"

namespace holonomy::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kCommands{"ideal-sweep", "noisy-sweep", "optimal",
                                      "fit",         "robustness",  "holonomy"};

constexpr double kDefaultGridStart = 0.25;
constexpr double kDefaultGridStop = 60.0;
constexpr std::size_t kDefaultGridPoints = 240;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    config_error("cannot parse " + what + " '" + s + "'");
  }
}

int wedge_order(const std::string& loop) {
  if (loop == "standard") return 1;
  if (loop.rfind("wedge:", 0) == 0) {
    const std::string n = loop.substr(6);
    if (!n.empty() && std::all_of(n.begin(), n.end(), ::isdigit)) {
      const int v = std::stoi(n);
      if (v >= 1) return v;
    }
  }
  config_error("loop must be 'standard' or 'wedge:n' with n >= 1, got '" + loop + "'");
}

std::vector<double> doubles_from(const io::Json& j, const char* key) {
  if (!j.is_array()) config_error(std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) config_error(std::string(key) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double number_from(const io::Json& j, const char* key) {
  if (!j.is_number()) config_error(std::string(key) + " must be a number");
  return j.get<double>();
}

std::size_t count_from(const io::Json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    config_error(std::string(key) + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string string_from(const io::Json& j, const char* key) {
  if (!j.is_string()) config_error(std::string(key) + " must be a string");
  return j.get<std::string>();
}

bool bool_from(const io::Json& j, const char* key) {
  if (!j.is_boolean()) config_error(std::string(key) + " must be a boolean");
  return j.get<bool>();
}

io::Json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, std::string("cannot open ") + what + " '" + path + "'");
  try {
    return io::Json::parse(in);
  } catch (const io::Json::exception& e) {
    config_error(std::string(what) + " '" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

NoiseModel base_noise(const RunConfig& cfg) {
  if (cfg.noise_file.empty()) return NoiseModel::high_temperature(0.0, cfg.gamma0);
  return io::noise_from_json(read_json_file(cfg.noise_file, "noise file"));
}

std::string curve_csv(const SweepCurve& c) {
  std::ostringstream os;
  io::write_sweep_csv(os, c);
  return os.str();
}

struct Context {
  RunConfig cfg;
  std::ostream& out;
  fs::path dir;
  io::Json calibration;  // null unless calibration ran
  double input_gamma0 = 0.0;
};

// Applies --calibrate-f2: replaces gamma0 by the calibrated value.
void maybe_calibrate(Context& ctx) {
  if (!ctx.cfg.calibrate_f2) return;
  if (!ctx.cfg.noise_file.empty()) config_error("calibrate_f2 needs the flat high-temperature model");
  const CalibrationResult c =
      calibrate_gamma0(ctx.cfg.family(), *ctx.cfg.calibrate_f2, ctx.cfg.calibration_lambda_sq,
                       ctx.cfg.states, ctx.cfg.steps, ctx.cfg.peak, ctx.cfg.gamma0);
  ctx.calibration = {{"target_f2", *ctx.cfg.calibrate_f2},
                     {"reference_gamma0", c.reference_gamma0},
                     {"reference_f2", c.reference_f2},
                     {"gamma0", c.gamma0},
                     {"calibrated_f2", c.calibrated_f2}};
  ctx.out << "calibrated gamma0 = " << io::format_number(c.gamma0)
          << " (F2 = " << io::format_number(c.calibrated_f2) << ")\n";
  ctx.input_gamma0 = ctx.cfg.gamma0;
  ctx.cfg.gamma0 = c.gamma0;
}

io::Json envelope(const Context& ctx) {
  io::Json j;
  j["config"] = config_to_json(ctx.cfg);
  if (!ctx.calibration.is_null()) {
    // echo the pre-calibration input so a re-run repeats the calibration
    j["config"]["gamma0"] = ctx.input_gamma0;
    j["calibration"] = ctx.calibration;
  }
  return j;
}

std::vector<OptimalPoint> optimal_table(const Context& ctx) {
  const LoopFamily family = ctx.cfg.family();
  const NoiseModel base = base_noise(ctx.cfg);
  std::vector<OptimalPoint> rows;
  for (double l : ctx.cfg.lambda_sq) {
    NoiseModel noise = base;
    noise.lambda_sq = l;
    rows.push_back(find_optimal_point(family, noise, ctx.cfg.states, ctx.cfg.steps, ctx.cfg.peak));
  }
  return rows;
}

void cmd_sweep(Context& ctx, bool noisy) {
  if (noisy) maybe_calibrate(ctx);
  const std::vector<double> grid = ctx.cfg.resolved_grid();
  const std::vector<double> lambdas = noisy ? ctx.cfg.lambda_sq : std::vector<double>{0.0};
  const std::vector<SweepCurve> curves = sweep(ctx.cfg.family(), grid, lambdas,
                                               base_noise(ctx.cfg), ctx.cfg.states, ctx.cfg.steps);
  const std::string stem = noisy ? "noisy_sweep" : "ideal_sweep";
  for (const SweepCurve& c : curves) {
    const std::string name =
        noisy ? stem + "_lambda_sq_" + io::format_number(c.lambda_sq) + ".csv" : stem + ".csv";
    write_text(ctx.dir / name, curve_csv(c));
    ctx.out << "wrote " << (ctx.dir / name).string() << "\n";
  }
  write_text(ctx.dir / (stem + ".config.json"), dump(envelope(ctx)));
}

void cmd_optimal(Context& ctx) {
  maybe_calibrate(ctx);
  io::Json rows = io::Json::array();
  for (const OptimalPoint& p : optimal_table(ctx)) {
    rows.push_back(io::optimal_point_to_json(p));
    ctx.out << "lambda_sq=" << io::format_number(p.lambda_sq)
            << " omega_tau*=" << io::format_number(p.omega_tau_star)
            << " F*=" << io::format_number(p.f_star) << "\n";
  }
  io::Json doc = envelope(ctx);
  doc["rows"] = rows;
  write_text(ctx.dir / "optimal.json", dump(doc));
}

void cmd_fit(Context& ctx) {
  std::vector<OptimalPoint> table;
  if (!ctx.cfg.table.empty()) {
    const io::Json doc = read_json_file(ctx.cfg.table, "table");
    const io::Json& rows = doc.is_object() && doc.contains("rows") ? doc.at("rows") : doc;
    if (!rows.is_array()) config_error("table must be an array of rows or contain 'rows'");
    for (const auto& r : rows) table.push_back(io::optimal_point_from_json(r));
  } else {
    maybe_calibrate(ctx);
    table = optimal_table(ctx);
  }
  std::vector<NoisePoint> f_pts, tau_pts;
  for (const OptimalPoint& p : table) {
    f_pts.push_back({p.lambda_sq, p.f_star});
    tau_pts.push_back({p.lambda_sq, p.omega_tau_star});
  }
  FitOptions f_opts, tau_opts;
  f_opts.free_intercept = tau_opts.free_intercept = ctx.cfg.free_intercept;
  f_opts.intercept = 1.0;
  tau_opts.intercept = ctx.cfg.family().optimal_omega_tau(1);

  const FitResult f_lin = fit_noise_response(f_pts, FitModel::FLinear, f_opts);
  const FitResult tau_lin = fit_noise_response(tau_pts, FitModel::TauLinear, tau_opts);
  io::Json fits = io::Json::array({io::fit_result_to_json(f_lin), io::fit_result_to_json(tau_lin)});
  // Higher orders only when the table can carry them.
  const std::size_t extra = ctx.cfg.free_intercept ? 1 : 0;
  if (f_pts.size() >= 3 + extra) {
    fits.push_back(io::fit_result_to_json(fit_noise_response(f_pts, FitModel::FQuartic, f_opts)));
  }
  if (tau_pts.size() >= 4 + extra) {
    fits.push_back(io::fit_result_to_json(fit_noise_response(tau_pts, FitModel::TauCubic, tau_opts)));
  }
  const double slope = f_of_tau_relation(f_lin, tau_lin);
  io::Json doc = envelope(ctx);
  doc["fits"] = fits;
  doc["f_of_tau_slope"] = slope;
  write_text(ctx.dir / "fit.json", dump(doc));
  ctx.out << "F2=" << io::format_number(f_lin.coefficient("F2"))
          << " tau2=" << io::format_number(tau_lin.coefficient("tau2"))
          << " slope=" << io::format_number(slope) << "\n";
}

void cmd_robustness(Context& ctx) {
  maybe_calibrate(ctx);
  const LoopFamily family = ctx.cfg.family();
  const NoiseModel base = base_noise(ctx.cfg);
  io::Json rows = io::Json::array();
  for (double l : ctx.cfg.lambda_sq) {
    NoiseModel noise = base;
    noise.lambda_sq = l;
    const RobustnessResult r = robustness(family, noise, ctx.cfg.states, ctx.cfg.steps, ctx.cfg.peak);
    rows.push_back(io::robustness_to_json(r));
    ctx.out << "lambda_sq=" << io::format_number(l) << " R=" << io::format_number(r.r) << "\n";
  }
  io::Json doc = envelope(ctx);
  doc["rows"] = rows;
  write_text(ctx.dir / "robustness.json", dump(doc));
}

void cmd_holonomy(Context& ctx) {
  const LoopFamily family = ctx.cfg.family();
  const std::vector<double> grid = ctx.cfg.omega_tau.empty()
                                       ? std::vector<double>{family.optimal_omega_tau(1)}
                                       : ctx.cfg.omega_tau;
  const LoopSpec loop = family.at_omega_tau(grid.front());
  const ComplexMatrix h = adiabatic_holonomy(loop);
  io::Json doc = envelope(ctx);
  doc["loop_spec"] = io::loop_to_json(loop);
  doc["solid_angle"] = solid_angle(loop);
  doc["holonomy"] = io::matrix_to_json(h);
  for (std::size_t i = 0; i < 2; ++i) {
    ctx.out << "[ ";
    for (std::size_t j = 0; j < 2; ++j) {
      const double re = std::abs(h(i, j).real()) < 1e-15 ? 0.0 : h(i, j).real();
      const double im = std::abs(h(i, j).imag()) < 1e-15 ? 0.0 : h(i, j).imag();
      ctx.out << io::format_number(re) << (im < 0 ? "-" : "+") << io::format_number(std::abs(im))
              << "i ";
    }
    ctx.out << "]\n";
  }
  write_text(ctx.dir / "holonomy.json", dump(doc));
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io:
    case ErrorCode::UnderdeterminedFit:
    case ErrorCode::UnsupportedLoop:
    case ErrorCode::TooFewStates:
    case ErrorCode::InvalidDuration:
      return kConfigError;
    default:
      return kNumericalError;
  }
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    config_error("grid must be START:STOP:POINTS, got '" + text + "'");
  }
  GridSpec g;
  g.start = parse_double(text.substr(0, a), "grid start");
  g.stop = parse_double(text.substr(a + 1, b - a - 1), "grid stop");
  const double pts = parse_double(text.substr(b + 1), "grid points");
  if (pts < 0 || pts != std::floor(pts)) config_error("grid points must be a non-negative integer");
  g.points = static_cast<std::size_t>(pts);
  return g;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) config_error("empty entry in list '" + text + "'");
    out.push_back(parse_double(item, "list entry"));
  }
  return out;
}

LoopFamily RunConfig::family() const {
  LoopFamily f;
  f.n = wedge_order(loop);
  f.omega = omega;
  f.reverse = reverse;
  return f;
}

std::vector<double> RunConfig::resolved_grid() const {
  if (!omega_tau.empty()) return omega_tau;
  if (grid) {
    if (grid->points == 0) config_error("grid has no points");
    if (grid->points == 1) return {grid->start};
    std::vector<double> out(grid->points);
    for (std::size_t i = 0; i < grid->points; ++i) {
      out[i] = grid->start + (grid->stop - grid->start) * static_cast<double>(i) /
                                 static_cast<double>(grid->points - 1);
    }
    return out;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < kDefaultGridPoints; ++i) {
    out.push_back(kDefaultGridStart + (kDefaultGridStop - kDefaultGridStart) * static_cast<double>(i) /
                                          static_cast<double>(kDefaultGridPoints - 1));
  }
  const LoopFamily f = family();
  for (int k = 1;; ++k) {
    const double x = f.optimal_omega_tau(k);
    if (x > kDefaultGridStop) break;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void RunConfig::validate() const {
  if (!kCommands.contains(command)) config_error("unknown command '" + command + "'");
  (void)wedge_order(loop);
  if (!(omega > 0.0) || !std::isfinite(omega)) config_error("omega must be positive");
  if (grid && grid->points == 0) config_error("grid has no points");
  if (grid && grid->points > 1 && !(grid->stop > grid->start)) config_error("grid needs STOP > START");
  if (grid && !(grid->start > 0.0)) config_error("grid must start above zero");
  for (std::size_t i = 0; i < omega_tau.size(); ++i) {
    if (!(omega_tau[i] > 0.0) || (i > 0 && !(omega_tau[i] > omega_tau[i - 1]))) {
      config_error("omega_tau must be positive and strictly increasing");
    }
  }
  if (lambda_sq.empty()) config_error("lambda_sq list is empty");
  for (double l : lambda_sq)
    if (!(l >= 0.0) || !std::isfinite(l)) config_error("lambda_sq entries must be >= 0");
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) config_error("gamma0 must be >= 0");
  if (states < 6) config_error("states must be at least 6");
  if (steps < 3) config_error("steps must be at least 3");
  if (calibrate_f2 && !(*calibrate_f2 > 0.0)) config_error("calibrate_f2 must be positive");
  if (calibration_lambda_sq.size() < 2) config_error("calibration_lambda_sq needs two entries");
  if (!(peak.window_hi > peak.window_lo) || peak.window_lo <= 0.0 || peak.coarse_points < 3 ||
      !(peak.tolerance > 0.0)) {
    config_error("invalid peak search options");
  }
}

void apply_json(RunConfig& cfg, const io::Json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const io::Json& v = item.value();
    if (k == "command") {
      cfg.command = string_from(v, "command");
    } else if (k == "loop") {
      cfg.loop = string_from(v, "loop");
    } else if (k == "omega") {
      cfg.omega = number_from(v, "omega");
    } else if (k == "reverse") {
      cfg.reverse = bool_from(v, "reverse");
    } else if (k == "grid") {
      if (v.is_null()) {
        cfg.grid.reset();
      } else {
        cfg.grid = parse_grid(string_from(v, "grid"));
      }
    } else if (k == "omega_tau") {
      cfg.omega_tau = doubles_from(v, "omega_tau");
      if (cfg.omega_tau.empty()) config_error("omega_tau is empty");
    } else if (k == "lambda_sq") {
      cfg.lambda_sq = doubles_from(v, "lambda_sq");
    } else if (k == "gamma0") {
      cfg.gamma0 = number_from(v, "gamma0");
    } else if (k == "noise_file") {
      cfg.noise_file = string_from(v, "noise_file");
    } else if (k == "states") {
      cfg.states = count_from(v, "states");
    } else if (k == "steps") {
      cfg.steps = count_from(v, "steps");
    } else if (k == "out") {
      cfg.out = string_from(v, "out");
    } else if (k == "calibrate_f2") {
      if (v.is_null()) {
        cfg.calibrate_f2.reset();
      } else {
        cfg.calibrate_f2 = number_from(v, "calibrate_f2");
      }
    } else if (k == "calibration_lambda_sq") {
      cfg.calibration_lambda_sq = doubles_from(v, "calibration_lambda_sq");
    } else if (k == "free_intercept") {
      cfg.free_intercept = bool_from(v, "free_intercept");
    } else if (k == "table") {
      cfg.table = string_from(v, "table");
    } else if (k == "peak") {
      if (!v.is_object()) config_error("peak must be an object");
      for (const auto& p : v.items()) {
        if (p.key() == "window_lo") {
          cfg.peak.window_lo = number_from(p.value(), "peak.window_lo");
        } else if (p.key() == "window_hi") {
          cfg.peak.window_hi = number_from(p.value(), "peak.window_hi");
        } else if (p.key() == "coarse_points") {
          cfg.peak.coarse_points = count_from(p.value(), "peak.coarse_points");
        } else if (p.key() == "tolerance") {
          cfg.peak.tolerance = number_from(p.value(), "peak.tolerance");
        } else {
          config_error("unknown key 'peak." + p.key() + "'");
        }
      }
    } else {
      config_error("unknown config key '" + k + "'");
    }
  }
}

io::Json config_to_json(const RunConfig& cfg) {
  io::Json j;
  j["command"] = cfg.command;
  j["loop"] = cfg.loop;
  j["omega"] = cfg.omega;
  j["reverse"] = cfg.reverse;
  if (!cfg.omega_tau.empty()) {
    j["omega_tau"] = cfg.omega_tau;
  } else if (cfg.grid) {
    j["grid"] = io::format_number(cfg.grid->start) + ":" + io::format_number(cfg.grid->stop) + ":" +
                std::to_string(cfg.grid->points);
  } else {
    j["grid"] = nullptr;
  }
  j["lambda_sq"] = cfg.lambda_sq;
  j["gamma0"] = cfg.gamma0;
  if (!cfg.noise_file.empty()) j["noise_file"] = cfg.noise_file;
  j["states"] = cfg.states;
  j["steps"] = cfg.steps;
  j["out"] = cfg.out;
  j["calibrate_f2"] = cfg.calibrate_f2 ? io::Json(*cfg.calibrate_f2) : io::Json(nullptr);
  j["calibration_lambda_sq"] = cfg.calibration_lambda_sq;
  j["free_intercept"] = cfg.free_intercept;
  if (!cfg.table.empty()) j["table"] = cfg.table;
  j["peak"] = {{"window_lo", cfg.peak.window_lo},
               {"window_hi", cfg.peak.window_hi},
               {"coarse_points", cfg.peak.coarse_points},
               {"tolerance", cfg.peak.tolerance}};
  return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holonomic NOT gate simulator for the tripod system", "holonomy"};
  std::string command, config_path, out_dir, loop, lambda_list, grid, omega_tau_list, noise, table;
  std::size_t states = 0, steps = 0;
  double calibrate = 0.0, gamma0 = 0.0, omega = 0.0;
  bool free_intercept = false, reverse = false;

  app.add_option("command", command, "ideal-sweep | noisy-sweep | optimal | fit | robustness | holonomy")
      ->required();
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_loop = app.add_option("--loop", loop, "standard | wedge:n");
  auto* o_lambda = app.add_option("--lambda-sq", lambda_list, "comma-separated lambda^2 values");
  auto* o_grid = app.add_option("--grid", grid, "START:STOP:POINTS in Omega*tau");
  auto* o_otau = app.add_option("--omega-tau", omega_tau_list, "comma-separated Omega*tau values");
  auto* o_states = app.add_option("--states", states, "number of input states");
  auto* o_steps = app.add_option("--steps", steps, "RK4 steps per loop");
  auto* o_cal = app.add_option("--calibrate-f2", calibrate, "choose gamma0 so the fitted F2 matches");
  auto* o_gamma = app.add_option("--gamma0", gamma0, "flat high-temperature rate");
  auto* o_omega = app.add_option("--omega", omega, "Rabi frequency scale");
  auto* o_noise = app.add_option("--noise", noise, "noise model JSON file");
  auto* o_table = app.add_option("--table", table, "optimal-point table for fit");
  app.add_flag("--free-intercept", free_intercept, "fit the intercept too");
  app.add_flag("--reverse", reverse, "traverse the loop backwards");

  try {
    std::vector<std::string> reversed_args(args.rbegin(), args.rend());
    app.parse(reversed_args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    RunConfig cfg;
    if (*o_config) apply_json(cfg, read_json_file(config_path, "config"));
    cfg.command = command;
    if (*o_out) cfg.out = out_dir;
    if (*o_loop) cfg.loop = loop;
    if (*o_lambda) cfg.lambda_sq = parse_list(lambda_list);
    if (*o_grid) {
      cfg.grid = parse_grid(grid);
      cfg.omega_tau.clear();
    }
    if (*o_otau) cfg.omega_tau = parse_list(omega_tau_list);
    if (*o_states) cfg.states = states;
    if (*o_steps) cfg.steps = steps;
    if (*o_cal) cfg.calibrate_f2 = calibrate;
    if (*o_gamma) cfg.gamma0 = gamma0;
    if (*o_omega) cfg.omega = omega;
    if (*o_noise) cfg.noise_file = noise;
    if (*o_table) cfg.table = table;
    if (free_intercept) cfg.free_intercept = true;
    if (reverse) cfg.reverse = true;
    if (cfg.command == "ideal-sweep") cfg.lambda_sq = {0.0};
    cfg.validate();

    Context ctx{cfg, out, fs::path(cfg.out), nullptr, cfg.gamma0};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + cfg.out + "'");

    if (command == "ideal-sweep") {
      cmd_sweep(ctx, false);
    } else if (command == "noisy-sweep") {
      cmd_sweep(ctx, true);
    } else if (command == "optimal") {
      cmd_optimal(ctx);
    } else if (command == "fit") {
      cmd_fit(ctx);
    } else if (command == "robustness") {
      cmd_robustness(ctx);
    } else {
      cmd_holonomy(ctx);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}

}  // namespace holonomy::cli
