#include "weakstrong/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "weakstrong/analytic.hpp"
#include "weakstrong/errors.hpp"
#include "weakstrong/fock.hpp"
#include "weakstrong/io.hpp"
#include "weakstrong/sweep.hpp"
#include "weakstrong/tomography.hpp"

namespace weakstrong::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
  double theta = 0.0;
  double gamma = 0.0;
  std::string engine = "analytic";
  std::string units = "natural";
  std::int64_t shots = 10000;
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  bool deg = false;
  double tolerance = 1e-6;
  std::string grid = "full";
  int fock_dim = fock::kDefaultDimension;
  CLI::App* active = nullptr;
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

bool given(const Flags& f, const std::string& name) {
  const CLI::Option* opt = f.active->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

io::Json load_config(const Flags& f) {
  if (f.config.empty()) return io::Json::object();
  if (!fs::exists(f.config)) throw ValidationError("--config: file '" + f.config + "' does not exist");
  try {
    return io::Json::parse(io::read_file(f.config));
  } catch (const io::Json::parse_error& e) {
    throw ValidationError("--config: " + std::string(e.what()));
  }
}

// Single-point inputs: config file first, explicit flags on top.
struct PointInputs {
  MeasurementConfig config;
  sweep::Engine engine;
  io::Json file;
};

PointInputs resolve_point(const Flags& f) {
  io::Json file = load_config(f);
  std::optional<double> theta;
  std::optional<double> gamma;
  std::string units = file.value("units", std::string("natural"));
  std::string engine = file.value("engine", std::string("analytic"));
  if (file.contains("theta")) theta = file["theta"].get<double>();
  if (file.contains("gamma")) gamma = file["gamma"].get<double>();
  if (given(f, "--theta")) theta = f.theta;
  if (given(f, "--gamma")) gamma = f.gamma;
  if (given(f, "--units")) units = f.units;
  if (given(f, "--engine")) engine = f.engine;
  if (!theta) throw ValidationError("--theta is required");
  if (!gamma) throw ValidationError("--gamma is required");
  const double th = f.deg ? *theta * std::numbers::pi / 180.0 : *theta;
  if (th == 0.0) throw PoleError("--theta: theta = 0 is a pole of the weak value (-cot theta diverges)");
  if (!(th > 0.0 && th <= std::numbers::pi / 2)) throw ValidationError("--theta must lie in (0, pi/2]");
  if (!(*gamma > 0.0)) throw ValidationError("--gamma must be > 0");
  UnitSystem u;
  sweep::Engine e;
  try {
    u = parse_units(units);
  } catch (const ValidationError& ex) {
    throw ValidationError(std::string("--units: ") + ex.what());
  }
  try {
    e = sweep::parse_engine(engine);
  } catch (const ValidationError& ex) {
    throw ValidationError(std::string("--engine: ") + ex.what());
  }
  return PointInputs{MeasurementConfig::with_units(th, *gamma, u), e, std::move(file)};
}

fs::path resolve_out(const Flags& f, const io::Json& file, const std::string& hash_source) {
  if (given(f, "--out")) return f.out;
  if (file.contains("output_path")) return file["output_path"].get<std::string>();
  return fs::path("out") / io::fnv1a_hex(hash_source);
}

int cmd_point(const Flags& f, std::ostream& out) {
  const auto in = resolve_point(f);
  const auto& c = in.config;
  const double d = c.displacement();
  out << "theta                 " << io::format_double(c.theta()) << "\n";
  out << "gamma                 " << io::format_double(c.gamma_big()) << "\n";
  out << "weak_value            " << fixed(analytic::weak_value(c.theta())) << "\n";
  out << "expectation_value     " << fixed(analytic::expectation_value(c.theta())) << "\n";
  out << "transition_factor     " << sci(analytic::transition_factor(c.gamma_big())) << "\n";
  auto report = [&](const std::string& label, double shift, double prob) {
    out << "[" << label << "]\n";
    out << "shift/gamma0t         " << fixed(shift / d) << "\n";
    out << "shift                 " << fixed(shift) << " " << c.length_unit() << "\n";
    out << "success_probability   " << sci(prob) << "\n";
  };
  double analytic_shift = 0.0;
  if (in.engine != sweep::Engine::fock) {
    analytic_shift = analytic::pointer_shift(c);
    report("analytic", analytic_shift, analytic::success_probability(c));
  }
  if (in.engine != sweep::Engine::analytic) {
    const int n = given(f, "--fock-dim") ? f.fock_dim : fock::kDefaultDimension;
    const auto post = fock::run_protocol(c, n);
    const double shift = fock::expectation_z(post.motional, c.delta_z());
    report("fock", shift, post.probability);
    if (in.engine == sweep::Engine::both) {
      out << "delta shift/gamma0t   " << sci((shift - analytic_shift) / d) << "\n";
    }
  }
  return 0;
}

sweep::SweepSpec resolve_sweep(const Flags& f) {
  if (f.config.empty()) throw ValidationError("--config is required for sweep");
  io::Json file = load_config(f);
  if (given(f, "--engine")) file["engine"] = f.engine;
  if (given(f, "--units")) file["units"] = f.units;
  if (given(f, "--fock-dim")) file["fock_dim"] = f.fock_dim;
  if (given(f, "--out")) file["output_path"] = f.out;
  if (given(f, "--shots") || given(f, "--seed")) {
    io::Json tomo = file.contains("tomography") ? file["tomography"] : io::Json::object();
    if (given(f, "--shots")) tomo["shots"] = f.shots;
    if (given(f, "--seed")) tomo["seed"] = f.seed;
    file["tomography"] = tomo;
  }
  return sweep::SweepSpec::from_json(file);
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  const auto spec = resolve_sweep(f);
  const fs::path dir = sweep::output_directory(spec);
  if (spec.kind == sweep::SweepKind::figure3_panels) {
    const auto panels = sweep::figure3_panels(spec);
    sweep::write_panels(dir, panels);
    int failed = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto& p = panels[i];
      out << "panel " << i + 1 << " theta=" << io::format_double(p.theta) << " gamma=" << io::format_double(p.gamma_big);
      if (!p.error.empty()) {
        out << " error: " << p.error;
        ++failed;
      } else if (p.fourier) {
        out << " l1_fourier=" << sci(p.l1_fourier) << " l1_least_squares=" << sci(p.l1_least_squares);
      }
      out << "\n";
    }
    out << "wrote " << dir.string() << "\n";
    return failed == static_cast<int>(panels.size()) ? 3 : 0;
  }
  const auto result = sweep::run_sweep(spec);
  sweep::write_sweep(dir, spec, result);
  std::size_t errors = 0;
  for (const auto& r : result.rows) errors += r.error.empty() ? 0 : 1;
  out << result.rows.size() << " rows (" << errors << " with errors), wrote " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

int cmd_transition(const Flags& f, std::ostream& out) {
  sweep::SweepSpec spec;
  spec.kind = sweep::SweepKind::gamma_sweep;
  const double theta = given(f, "--theta") ? (f.deg ? f.theta * std::numbers::pi / 180.0 : f.theta) : 0.5;
  spec.theta_values = {theta};
  for (int i = 0; i < 30; ++i) spec.gamma_values.push_back(0.02 + (3.0 - 0.02) * i / 29.0);
  if (given(f, "--gamma")) spec.gamma_values = {f.gamma};
  spec.engine = given(f, "--engine") ? sweep::parse_engine(f.engine) : sweep::Engine::analytic;
  if (spec.engine == sweep::Engine::both) spec.tolerance = f.tolerance;
  if (given(f, "--shots") || given(f, "--seed")) spec.tomography = sweep::TomographySpec{f.shots, f.seed, {}};
  if (given(f, "--out")) spec.output_path = f.out;
  const auto result = sweep::run_sweep(spec);
  out << "gamma,transition_factor,transition_factor_inferred,engine,std_error\n";
  for (const auto& r : result.rows) {
    out << io::format_double(r.gamma_big) << "," << sci(r.transition_factor) << ","
        << (std::isnan(r.transition_factor_inferred) ? std::string() : sci(r.transition_factor_inferred)) << ","
        << r.engine << "," << (std::isnan(r.std_error) ? std::string() : sci(r.std_error)) << "\n";
  }
  if (given(f, "--out")) sweep::write_sweep(spec.output_path, spec, result);
  return 0;
}

int cmd_reconstruct(const Flags& f, std::ostream& out) {
  if (f.config.empty()) throw ValidationError("--config is required for reconstruct");
  const auto in = resolve_point(f);
  const auto& c = in.config;
  const io::Json tomo = in.file.value("tomography", io::Json::object());
  std::int64_t shots = tomo.value("shots", std::int64_t{10000});
  std::uint64_t seed = tomo.value("seed", std::uint64_t{1});
  if (given(f, "--shots")) shots = f.shots;
  if (given(f, "--seed")) seed = f.seed;
  const auto k = tomo.contains("k_grid") ? tomo["k_grid"].get<std::vector<double>>() : tomography::default_k_grid();
  const int n = given(f, "--fock-dim") ? f.fock_dim : in.file.value("fock_dim", fock::kDefaultDimension);

  // Everything is computed before anything is written.
  const auto dataset = tomography::sample_dataset(c, k, shots, seed, {n});
  const auto z = tomography::default_z_grid(c);
  const auto fourier = tomography::reconstruct_fourier(dataset, z);
  const auto ls_grid = tomography::least_squares_z_grid(dataset);
  const auto ls = tomography::reconstruct_least_squares(dataset, ls_grid);
  const double l1_f = tomography::l1_distance(fourier, tomography::analytic_density_on_grid(c, z));
  const double l1_ls = tomography::l1_distance(ls, tomography::analytic_density_on_grid(c, ls_grid));

  io::Json key = io::config_to_json(c);
  key["shots"] = shots;
  key["seed"] = seed;
  const fs::path dir = resolve_out(f, in.file, key.dump());
  io::write_file_atomic(dir / "dataset.json", io::dataset_to_json(dataset).dump(2) + "\n");
  io::write_file_atomic(dir / "fourier.csv", io::density_csv(fourier));
  io::write_file_atomic(dir / "least_squares.csv", io::density_csv(ls));
  out << "l1_fourier=" << sci(l1_f) << " l1_least_squares=" << sci(l1_ls)
      << (fourier.negative_excursion ? " (fourier estimate has negative excursions)" : "") << " wrote "
      << dir.string() << "\n";
  return 0;
}

int cmd_wigner(const Flags& f, std::ostream& out) {
  const auto in = resolve_point(f);
  const auto grid = sweep::default_phase_space_grid(in.config);
  const auto w = analytic::wigner(in.config, grid);
  const fs::path dir = resolve_out(f, in.file, io::config_to_json(in.config).dump());
  io::write_file_atomic(dir / "wigner.csv", io::wigner_csv(grid, w));
  out << "wrote " << (dir / "wigner.csv").string() << " (" << grid.n_z << "x" << grid.n_p << ")\n";
  return 0;
}

int cmd_check(const Flags& f, std::ostream& out) {
  if (!(f.tolerance > 0.0)) throw ValidationError("--tolerance must be > 0");
  const double q = std::numbers::pi / 4;
  std::vector<double> thetas = {0.02, 0.3, q, 1.0, 1.5};
  std::vector<double> gammas = {0.04, 0.5, 1.0, 2.0, 2.9};
  if (f.grid == "quick") {
    thetas = {0.02, q, 1.5};
    gammas = {0.04, 1.0, 2.9};
  } else if (f.grid != "full") {
    throw ValidationError("--grid must be full or quick");
  }
  const int n = given(f, "--fock-dim") ? f.fock_dim : fock::kDefaultDimension;
  double worst = -1.0;
  double worst_theta = 0.0;
  double worst_gamma = 0.0;
  for (double t : thetas) {
    for (double g : gammas) {
      const auto c = MeasurementConfig::natural(t, g);
      const double a = analytic::pointer_shift(c);
      const double z = fock::expectation_z(fock::run_protocol(c, n).motional, c.delta_z());
      const double dev = std::abs(z - a) / std::abs(a);
      if (dev > worst) {
        worst = dev;
        worst_theta = t;
        worst_gamma = g;
      }
    }
  }
  out << "max relative deviation " << sci(worst) << " at theta=" << io::format_double(worst_theta)
      << " gamma=" << io::format_double(worst_gamma) << " (" << thetas.size() * gammas.size() << " points, N=" << n
      << ")\n";
  if (worst < f.tolerance) return 0;
  out << "exceeds tolerance " << sci(f.tolerance) << "\n";
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak-to-strong measurement simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sweep::code_version());
  Flags f;

  auto add_point = [&](CLI::App* sub) {
    sub->add_option("--theta", f.theta, "post-selection angle (radians unless --deg)");
    sub->add_option("--gamma", f.gamma, "interference factor gamma0 t / dz");
    sub->add_flag("--deg", f.deg, "read --theta in degrees");
    sub->add_option("--units", f.units, "natural|physical");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--engine", f.engine, "analytic|fock|both");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--fock-dim", f.fock_dim, "Fock truncation dimension");
  };
  auto add_tomo = [&](CLI::App* sub) {
    sub->add_option("--shots", f.shots, "shots per probe point (0: noiseless)");
    sub->add_option("--seed", f.seed, "RNG seed");
  };

  auto* point = app.add_subcommand("point", "observables at one (theta, gamma)");
  add_point(point);
  add_common(point);
  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep described by a JSON config");
  add_common(sweep_cmd);
  add_tomo(sweep_cmd);
  sweep_cmd->add_option("--units", f.units, "natural|physical");
  auto* transition = app.add_subcommand("transition", "infer exp(-gamma^2/2) over gamma in [0.02, 3]");
  add_point(transition);
  add_common(transition);
  add_tomo(transition);
  transition->add_option("--tolerance", f.tolerance, "engine agreement tolerance for --engine both");
  auto* reconstruct = app.add_subcommand("reconstruct", "simulate tomography and reconstruct the pointer density");
  add_point(reconstruct);
  add_common(reconstruct);
  add_tomo(reconstruct);
  auto* wigner = app.add_subcommand("wigner", "write the cat-state Wigner function on a grid");
  add_point(wigner);
  add_common(wigner);
  auto* check = app.add_subcommand("check", "compare the analytic and Fock engines");
  check->add_option("--tolerance", f.tolerance, "maximum relative deviation of <z>");
  check->add_option("--grid", f.grid, "full|quick")->check(CLI::IsMember({"full", "quick"}));
  check->add_option("--fock-dim", f.fock_dim, "Fock truncation dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  f.active = app.get_subcommands().front();
  try {
    if (*point) return cmd_point(f, out);
    if (*sweep_cmd) return cmd_sweep(f, out);
    if (*transition) return cmd_transition(f, out);
    if (*reconstruct) return cmd_reconstruct(f, out);
    if (*wigner) return cmd_wigner(f, out);
    if (*check) return cmd_check(f, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const io::Json::exception& e) {
    err << "error: bad config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace weakstrong::cli
