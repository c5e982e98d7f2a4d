#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weakstrong/config.hpp"
#include "weakstrong/fock.hpp"
#include "weakstrong/kernels.hpp"

// Indirect readout of the pointer. A conditional kick U_z = exp(-i k z sigma_x / 2)
// maps the pointer's characteristic function onto the qubit:
//   U_z^dagger sigma_z U_z = cos(k z) sigma_z + sin(k z) sigma_y,
// so preparing the qubit in a sigma_z (sigma_y) eigenstate and reading sigma_z
// yields <cos kz> (<sin kz>).
//
// Units: k in 1/dz, z grids and densities in units of dz.
namespace weakstrong::tomography {

constexpr double kMaxProbeK = 6.0;
constexpr double kWeightEpsilon = 1e-6;
constexpr double kMaxSlopeK = 0.3;

std::string to_string(Basis basis);
Basis parse_basis(const std::string& name);

struct TomographyRecord {
  double k;
  Basis basis;
  std::int64_t shots;  // 0 for noiseless records
  std::int64_t ups;
  double mean;         // estimate of <O(k)>: 2 ups / shots - 1, or the exact value
};

struct TomographyDataset {
  std::vector<TomographyRecord> records;
  std::uint64_t seed;
  bool noiseless;
  MeasurementConfig source_config;
  int fock_dim;

  // 0 <= ups <= shots; k strictly increasing within each basis.
  void validate() const;
  std::vector<TomographyRecord> channel(Basis basis) const;
};

enum class Method { fourier, least_squares };
std::string to_string(Method method);

struct DensityEstimate {
  Eigen::VectorXd z_grid;
  Eigen::VectorXd density;
  double residual;
  Method method;
  bool negative_excursion;
};

// <O(k)> for a motional state with the qubit prepared in the given basis,
// computed by building U_z in the Fock engine and reading sigma_z.
double probe_observable(const Eigen::VectorXcd& motional, double k, Basis basis);

// Batch version; one eigendecomposition of the kick generator, k points in parallel.
std::vector<double> probe_observables(const Eigen::VectorXcd& motional, std::span<const double> k, Basis basis);

struct SampleOptions {
  int fock_dim = fock::kDefaultDimension;
  bool sigma_z = true;
  bool sigma_y = true;
};

// shots = 0 selects the noiseless (infinite-shot) mode. For finite shots each
// record draws ups ~ Binomial(shots, (1 + <O>)/2) from a generator seeded by
// (seed, record index).
TomographyDataset sample_dataset(const MeasurementConfig& config, std::span<const double> k_grid,
                                 std::int64_t shots, std::uint64_t seed, const SampleOptions& options = {});

// 41 points on [0, 5].
std::vector<double> default_k_grid();
// 21 points on [-0.3, 0.3].
std::vector<double> default_k_fit_grid();
// 201 points on [-(Gamma + 5), Gamma + 5].
Eigen::VectorXd default_z_grid(const MeasurementConfig& config, int points = 201);
// Grid with spacing pi / k_max spanning at least +-(Gamma + 5).
Eigen::VectorXd least_squares_z_grid(const TomographyDataset& dataset);

DensityEstimate reconstruct_fourier(const TomographyDataset& dataset, const Eigen::VectorXd& z_grid);
DensityEstimate reconstruct_least_squares(const TomographyDataset& dataset, const Eigen::VectorXd& z_grid);

// Sum over records of w_r (model_r(rho) - mean_r)^2 with
// w_r = shots_r / (1 - mean_r^2 + eps) (shots_r -> 1 for noiseless records).
double weighted_residual(const TomographyDataset& dataset, const Eigen::VectorXd& z_grid,
                         const Eigen::VectorXd& density);

struct SlopeFitOptions {
  int odd_order = 7;         // highest odd power of k in the fit
  double significance = 0.01;
};

struct MeanZEstimate {
  double mean_z;     // config length units
  double std_error;  // 0 in noiseless mode
  double f_statistic;
};

// Weighted fit of the sigma_y channel against 1, k, k^3, ..., k^odd_order;
// the linear coefficient is <z>. Throws LinearRegimeViolated when an added
// k^2 term is significant at the requested level.
MeanZEstimate fit_mean_z(const TomographyDataset& dataset, const SlopeFitOptions& options = {});

MeanZEstimate extract_mean_z(const MeasurementConfig& config, std::span<const double> k_fit_grid,
                             std::int64_t shots, std::uint64_t seed, const SlopeFitOptions& options = {},
                             int fock_dim = fock::kDefaultDimension);

// Analytic cat-state density on a grid in units of dz (density in 1/dz).
Eigen::VectorXd analytic_density_on_grid(const MeasurementConfig& config, const Eigen::VectorXd& z_grid);

// Trapezoid integral of |estimate - reference| on the estimate's grid.
double l1_distance(const DensityEstimate& estimate, const Eigen::VectorXd& reference);

}  // namespace weakstrong::tomography
