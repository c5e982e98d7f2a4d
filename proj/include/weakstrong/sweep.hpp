#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weakstrong/analytic.hpp"
#include "weakstrong/config.hpp"
#include "weakstrong/io.hpp"
#include "weakstrong/tomography.hpp"

namespace weakstrong::sweep {

constexpr int kSchemaVersion = 1;

enum class SweepKind { theta_sweep, gamma_sweep, grid, figure3_panels };
enum class Engine { analytic, fock, both };

std::string to_string(SweepKind kind);
std::string to_string(Engine engine);
SweepKind parse_kind(const std::string& name);
Engine parse_engine(const std::string& name);

struct TomographySpec {
  std::int64_t shots = 10000;  // 0: noiseless
  std::uint64_t seed = 1;
  std::vector<double> k_grid;  // empty: the default for the job
};

struct SweepSpec {
  SweepKind kind = SweepKind::grid;
  std::vector<double> theta_values;
  std::vector<double> gamma_values;
  Engine engine = Engine::analytic;
  std::optional<double> tolerance;  // required for engine = both
  UnitSystem units = UnitSystem::natural;
  int fock_dim = fock::kDefaultDimension;
  std::optional<TomographySpec> tomography;
  std::string output_path;  // empty: ./out/<config hash>

  void validate() const;
  // (theta, gamma) pairs in output order. figure3_panels zips the two lists;
  // the other kinds take the product, ordered by the swept axis last.
  std::vector<std::pair<double, double>> points() const;

  io::Json to_json() const;
  static SweepSpec from_json(const io::Json& json);
  std::string hash() const;
};

// Unset optional columns hold NaN and are written as empty CSV fields.
struct SweepRow {
  double theta;
  double gamma_big;
  double shift_over_gamma0t;
  double weak_value;
  double expectation_value;
  double transition_factor_inferred;
  double success_probability;
  std::string engine;
  double std_error;
  double transition_factor;
  double delta_vs_analytic;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string config_hash;
  std::string timestamp;
  std::string code_version;
};

SweepResult run_sweep(const SweepSpec& spec);

const std::vector<std::string>& csv_columns();
std::string to_csv(const SweepResult& result);
io::Json to_json(const SweepResult& result, const SweepSpec& spec);

struct PanelResult {
  double theta;
  double gamma_big;
  Eigen::VectorXd z_grid;            // units of dz
  Eigen::VectorXd analytic_density;  // 1/dz
  analytic::PhaseSpaceGrid wigner_grid;
  Eigen::MatrixXd wigner;
  std::optional<tomography::TomographyDataset> dataset;
  std::optional<tomography::DensityEstimate> fourier;
  std::optional<tomography::DensityEstimate> least_squares;
  double l1_fourier;
  double l1_least_squares;
  std::string error;
};

// Eight (theta, Gamma) panels of the cat-state gallery.
SweepSpec figure3_spec();
// z in [-(Gamma + 7), Gamma + 7] step 0.1, p in [-6, 6] step 0.1 (scaled units).
analytic::PhaseSpaceGrid default_phase_space_grid(const MeasurementConfig& config);
std::vector<PanelResult> figure3_panels(const SweepSpec& spec);

// Writes sweep.csv and sweep.json (or per-panel files for figure3_panels)
// into the directory and returns it.
std::filesystem::path output_directory(const SweepSpec& spec);
void write_sweep(const std::filesystem::path& dir, const SweepSpec& spec, const SweepResult& result);
void write_panels(const std::filesystem::path& dir, const std::vector<PanelResult>& panels);

std::string code_version();

}  // namespace weakstrong::sweep
