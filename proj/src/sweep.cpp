#include "weakstrong/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numbers>

#include "weakstrong/errors.hpp"
#include "weakstrong/fock.hpp"

#ifndef WEAKSTRONG_VERSION
#define WEAKSTRONG_VERSION "unknown"
#endif

namespace weakstrong::sweep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_field(double v) { return std::isnan(v) ? std::string() : io::format_double(v); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

io::Json json_number(double v) { return std::isnan(v) ? io::Json(nullptr) : io::Json(v); }

SweepRow blank_row(double theta, double gamma, const std::string& engine) {
  return SweepRow{theta, gamma, kNaN, kNaN, kNaN, kNaN, kNaN, engine, kNaN, kNaN, kNaN, {}};
}

double inferred_factor(double shift, double theta, double gamma0_t) {
  try {
    return analytic::invert_transition_factor(shift, theta, gamma0_t);
  } catch (const NonInvertible&) {
    return kNaN;
  }
}

// Observables that do not depend on the engine.
void fill_common(SweepRow& row, const MeasurementConfig& config) {
  row.transition_factor = analytic::transition_factor(config.gamma_big());
  row.expectation_value = analytic::expectation_value(config.theta());
  try {
    row.weak_value = analytic::weak_value(config.theta());
  } catch (const PoleError& e) {
    row.error = e.what();
  }
}

SweepRow analytic_row(const MeasurementConfig& config) {
  SweepRow row = blank_row(config.theta(), config.gamma_big(), "analytic");
  try {
    fill_common(row, config);
    const double shift = analytic::pointer_shift(config);
    const double d = config.displacement();
    row.shift_over_gamma0t = shift / d;
    row.success_probability = analytic::success_probability(config);
    row.transition_factor_inferred = inferred_factor(shift, config.theta(), d);
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

SweepRow fock_row(const MeasurementConfig& config, const SweepSpec& spec, std::size_t index) {
  SweepRow row = blank_row(config.theta(), config.gamma_big(), "fock");
  try {
    fill_common(row, config);
    const auto post = fock::run_protocol(config, spec.fock_dim);
    double shift = fock::expectation_z(post.motional, config.delta_z());
    if (spec.tomography) {
      const auto& tomo = *spec.tomography;
      const auto grid = tomo.k_grid.empty() ? tomography::default_k_fit_grid() : tomo.k_grid;
      const std::uint64_t seed = tomo.seed + 0x9e3779b97f4a7c15ULL * (index + 1);
      const auto est = tomography::extract_mean_z(config, grid, tomo.shots, seed, {}, spec.fock_dim);
      shift = est.mean_z;
      row.std_error = est.std_error / config.displacement();
    }
    const double d = config.displacement();
    row.shift_over_gamma0t = shift / d;
    row.success_probability = post.probability;
    row.transition_factor_inferred = inferred_factor(shift, config.theta(), d);
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::theta_sweep: return "theta_sweep";
    case SweepKind::gamma_sweep: return "gamma_sweep";
    case SweepKind::grid: return "grid";
    case SweepKind::figure3_panels: return "figure3_panels";
  }
  return "grid";
}

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::analytic: return "analytic";
    case Engine::fock: return "fock";
    case Engine::both: return "both";
  }
  return "analytic";
}

SweepKind parse_kind(const std::string& name) {
  for (auto k : {SweepKind::theta_sweep, SweepKind::gamma_sweep, SweepKind::grid, SweepKind::figure3_panels}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown sweep kind '" + name + "'");
}

Engine parse_engine(const std::string& name) {
  for (auto e : {Engine::analytic, Engine::fock, Engine::both}) {
    if (to_string(e) == name) return e;
  }
  throw ValidationError("unknown engine '" + name + "' (expected analytic|fock|both)");
}

void SweepSpec::validate() const {
  if (theta_values.empty()) throw ValidationError("theta_values must not be empty");
  if (gamma_values.empty()) throw ValidationError("gamma_values must not be empty");
  for (double t : theta_values) {
    if (!(t >= 0.0 && t <= std::numbers::pi / 2)) {
      throw ValidationError("theta value " + std::to_string(t) + " outside [0, pi/2]");
    }
  }
  for (double g : gamma_values) {
    if (!(g > 0.0) || !std::isfinite(g)) throw ValidationError("gamma value " + std::to_string(g) + " must be > 0");
  }
  if (kind == SweepKind::figure3_panels && theta_values.size() != gamma_values.size()) {
    throw ValidationError("figure3_panels needs theta_values and gamma_values of equal length");
  }
  if (engine == Engine::both && !(tolerance && *tolerance > 0.0)) {
    throw ValidationError("engine 'both' requires a positive tolerance");
  }
  if (fock_dim < fock::kMinDimension) throw DimensionTooSmall("fock_dim must be >= 8");
  if (tomography && tomography->shots < 0) throw ValidationError("tomography shots must be >= 0");
}

std::vector<std::pair<double, double>> SweepSpec::points() const {
  std::vector<std::pair<double, double>> out;
  if (kind == SweepKind::figure3_panels) {
    for (std::size_t i = 0; i < theta_values.size(); ++i) out.emplace_back(theta_values[i], gamma_values[i]);
    return out;
  }
  auto thetas = theta_values;
  auto gammas = gamma_values;
  std::sort(thetas.begin(), thetas.end());
  std::sort(gammas.begin(), gammas.end());
  if (kind == SweepKind::gamma_sweep) {
    for (double t : thetas) {
      for (double g : gammas) out.emplace_back(t, g);
    }
  } else if (kind == SweepKind::theta_sweep) {
    for (double g : gammas) {
      for (double t : thetas) out.emplace_back(t, g);
    }
  } else {
    for (double t : thetas) {
      for (double g : gammas) out.emplace_back(t, g);
    }
  }
  return out;
}

io::Json SweepSpec::to_json() const {
  io::Json j;
  j["kind"] = to_string(kind);
  j["theta_values"] = theta_values;
  j["gamma_values"] = gamma_values;
  j["engine"] = to_string(engine);
  if (tolerance) j["tolerance"] = *tolerance;
  j["units"] = weakstrong::to_string(units);
  j["fock_dim"] = fock_dim;
  if (tomography) {
    j["tomography"] = {{"shots", tomography->shots}, {"seed", tomography->seed}, {"k_grid", tomography->k_grid}};
  }
  if (!output_path.empty()) j["output_path"] = output_path;
  return j;
}

SweepSpec SweepSpec::from_json(const io::Json& j) {
  try {
    SweepSpec s;
    s.kind = parse_kind(j.value("kind", std::string("grid")));
    if (s.kind == SweepKind::figure3_panels && !j.contains("theta_values")) s = figure3_spec();
    if (j.contains("theta_values")) s.theta_values = j["theta_values"].get<std::vector<double>>();
    if (j.contains("gamma_values")) s.gamma_values = j["gamma_values"].get<std::vector<double>>();
    s.engine = parse_engine(j.value("engine", std::string("analytic")));
    if (j.contains("tolerance")) s.tolerance = j["tolerance"].get<double>();
    s.units = parse_units(j.value("units", std::string("natural")));
    s.fock_dim = j.value("fock_dim", fock::kDefaultDimension);
    if (j.contains("tomography") && !j["tomography"].is_null()) {
      const auto& t = j["tomography"];
      TomographySpec tomo;
      tomo.shots = t.value("shots", tomo.shots);
      tomo.seed = t.value("seed", tomo.seed);
      if (t.contains("k_grid")) tomo.k_grid = t["k_grid"].get<std::vector<double>>();
      s.tomography = tomo;
    }
    s.output_path = j.value("output_path", std::string());
    s.validate();
    return s;
  } catch (const io::Json::exception& e) {
    throw ValidationError(std::string("bad sweep config: ") + e.what());
  }
}

std::string SweepSpec::hash() const {
  io::Json j = to_json();
  j.erase("output_path");
  return io::fnv1a_hex(j.dump());
}

std::string code_version() { return WEAKSTRONG_VERSION; }

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto pts = spec.points();
  std::vector<std::vector<SweepRow>> slots(pts.size());
  const auto count = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto [theta, gamma] = pts[i];
    auto& out = slots[i];
    std::optional<MeasurementConfig> config;
    try {
      config.emplace(MeasurementConfig::with_units(theta, gamma, spec.units));
    } catch (const Error& e) {
      out.push_back(blank_row(theta, gamma, to_string(spec.engine)));
      out.back().error = e.what();
      continue;
    }
    if (spec.engine != Engine::fock) out.push_back(analytic_row(*config));
    if (spec.engine != Engine::analytic) {
      SweepRow row = fock_row(*config, spec, static_cast<std::size_t>(i));
      if (spec.engine == Engine::both && row.error.empty() && out.front().error.empty()) {
        row.delta_vs_analytic = row.shift_over_gamma0t - out.front().shift_over_gamma0t;
        if (std::abs(row.delta_vs_analytic) > *spec.tolerance) {
          row.error = "engine mismatch exceeds tolerance " + io::format_double(*spec.tolerance);
        }
      }
      out.push_back(std::move(row));
    }
  }
  SweepResult result{{}, spec.hash(), utc_timestamp(), code_version()};
  for (auto& s : slots) {
    for (auto& r : s) result.rows.push_back(std::move(r));
  }
  return result;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "theta",       "gamma_big", "shift_over_gamma0t", "weak_value",        "expectation_value",
      "transition_factor_inferred", "success_probability", "engine", "std_error", "transition_factor",
      "delta_vs_analytic", "error"};
  return cols;
}

std::string to_csv(const SweepResult& result) {
  std::string out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const auto& r : result.rows) {
    out += csv_field(r.theta) + ',' + csv_field(r.gamma_big) + ',' + csv_field(r.shift_over_gamma0t) + ',' +
           csv_field(r.weak_value) + ',' + csv_field(r.expectation_value) + ',' +
           csv_field(r.transition_factor_inferred) + ',' + csv_field(r.success_probability) + ',' +
           csv_quote(r.engine) + ',' + csv_field(r.std_error) + ',' + csv_field(r.transition_factor) + ',' +
           csv_field(r.delta_vs_analytic) + ',' + csv_quote(r.error) + '\n';
  }
  return out;
}

io::Json to_json(const SweepResult& result, const SweepSpec& spec) {
  io::Json j;
  j["schema_version"] = kSchemaVersion;
  j["metadata"] = {{"config_hash", result.config_hash}, {"timestamp", result.timestamp},
                   {"code_version", result.code_version}};
  j["spec"] = spec.to_json();
  io::Json rows = io::Json::array();
  for (const auto& r : result.rows) {
    io::Json row;
    row["theta"] = r.theta;
    row["gamma_big"] = r.gamma_big;
    row["shift_over_gamma0t"] = json_number(r.shift_over_gamma0t);
    row["weak_value"] = json_number(r.weak_value);
    row["expectation_value"] = json_number(r.expectation_value);
    row["transition_factor_inferred"] = json_number(r.transition_factor_inferred);
    row["success_probability"] = json_number(r.success_probability);
    row["engine"] = r.engine;
    row["std_error"] = json_number(r.std_error);
    row["transition_factor"] = json_number(r.transition_factor);
    row["delta_vs_analytic"] = json_number(r.delta_vs_analytic);
    row["error"] = r.error.empty() ? io::Json(nullptr) : io::Json(r.error);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

SweepSpec figure3_spec() {
  SweepSpec s;
  s.kind = SweepKind::figure3_panels;
  const double q = std::numbers::pi / 4;
  s.theta_values = {1.5, q, 0.02, 1.5, 0.02, 1.5, q, 0.02};
  s.gamma_values = {0.1, 0.1, 0.04, 1.0, 1.0, 2.9, 2.9, 2.9};
  return s;
}

analytic::PhaseSpaceGrid default_phase_space_grid(const MeasurementConfig& config) {
  const double half = config.gamma_big() + 7.0;
  const int n_z = static_cast<int>(std::ceil(2.0 * half / 0.1)) + 1;
  return analytic::PhaseSpaceGrid{-half, half, n_z, -6.0, 6.0, 121};
}

std::vector<PanelResult> figure3_panels(const SweepSpec& spec) {
  spec.validate();
  const auto pts = spec.points();
  std::vector<PanelResult> panels(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& panel = panels[i];
    panel.theta = pts[i].first;
    panel.gamma_big = pts[i].second;
    panel.l1_fourier = kNaN;
    panel.l1_least_squares = kNaN;
    try {
      const auto config = MeasurementConfig::natural(panel.theta, panel.gamma_big);
      panel.z_grid = tomography::default_z_grid(config);
      panel.analytic_density = tomography::analytic_density_on_grid(config, panel.z_grid);
      panel.wigner_grid = default_phase_space_grid(config);
      panel.wigner = analytic::wigner(config, panel.wigner_grid);
      if (spec.tomography) {
        const auto& tomo = *spec.tomography;
        const auto k = tomo.k_grid.empty() ? tomography::default_k_grid() : tomo.k_grid;
        panel.dataset = tomography::sample_dataset(config, k, tomo.shots, tomo.seed + i, {spec.fock_dim});
        panel.fourier = tomography::reconstruct_fourier(*panel.dataset, panel.z_grid);
        panel.l1_fourier = tomography::l1_distance(*panel.fourier, panel.analytic_density);
        const auto ls_grid = tomography::least_squares_z_grid(*panel.dataset);
        panel.least_squares = tomography::reconstruct_least_squares(*panel.dataset, ls_grid);
        panel.l1_least_squares =
            tomography::l1_distance(*panel.least_squares, tomography::analytic_density_on_grid(config, ls_grid));
      }
    } catch (const Error& e) {
      panel.error = e.what();
    }
  }
  return panels;
}

std::filesystem::path output_directory(const SweepSpec& spec) {
  if (!spec.output_path.empty()) return spec.output_path;
  return std::filesystem::path("out") / spec.hash();
}

void write_sweep(const std::filesystem::path& dir, const SweepSpec& spec, const SweepResult& result) {
  io::write_file_atomic(dir / "sweep.csv", to_csv(result));
  io::write_file_atomic(dir / "sweep.json", to_json(result, spec).dump(2) + "\n");
}

void write_panels(const std::filesystem::path& dir, const std::vector<PanelResult>& panels) {
  io::Json summary = io::Json::array();
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& p = panels[i];
    const std::string stem = "panel" + std::to_string(i + 1);
    io::Json entry = {{"panel", i + 1}, {"theta", p.theta}, {"gamma_big", p.gamma_big}};
    if (p.error.empty()) {
      io::write_file_atomic(dir / (stem + "_analytic.csv"), io::density_csv(p.z_grid, p.analytic_density));
      io::write_file_atomic(dir / (stem + "_wigner.csv"), io::wigner_csv(p.wigner_grid, p.wigner));
      if (p.dataset) {
        io::write_file_atomic(dir / (stem + "_dataset.json"), io::dataset_to_json(*p.dataset).dump(2) + "\n");
        io::write_file_atomic(dir / (stem + "_fourier.csv"), io::density_csv(*p.fourier));
        io::write_file_atomic(dir / (stem + "_least_squares.csv"), io::density_csv(*p.least_squares));
        entry["l1_fourier"] = p.l1_fourier;
        entry["l1_least_squares"] = p.l1_least_squares;
      }
    } else {
      entry["error"] = p.error;
    }
    summary.push_back(std::move(entry));
  }
  io::write_file_atomic(dir / "panels.json", summary.dump(2) + "\n");
}

}  // namespace weakstrong::sweep
