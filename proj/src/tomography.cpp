#include "weakstrong/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/fisher_f.hpp>

#include "weakstrong/analytic.hpp"
#include "weakstrong/errors.hpp"
#include "weakstrong/solver.hpp"

namespace weakstrong::tomography {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Eigen::MatrixXcd kick_generator(int n) {
  // k z sigma_x / 2 with k in 1/dz and z in dz: generator sigma_x (a + a^dagger) / 2.
  return 0.5 * fock::kron(fock::pauli_x(), fock::position_operator(n, 1.0).cast<std::complex<double>>());
}

fock::JointState prepare(const Eigen::VectorXcd& motional, Basis basis) {
  const auto n = static_cast<int>(motional.size());
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(2 * n);
  if (basis == Basis::sigma_z) {
    amp.segment(n, n) = motional;
  } else {
    // +1 eigenstate of sigma_y: (|up> + i|down>) / sqrt(2)
    amp.segment(0, n) = kI * motional / std::sqrt(2.0);
    amp.segment(n, n) = motional / std::sqrt(2.0);
  }
  return fock::JointState{std::move(amp), n};
}

double measure_sigma_z(const fock::JointState& state) {
  return state.branch(1).squaredNorm() - state.branch(0).squaredNorm();
}

void check_k(double k) {
  if (!(std::abs(k) <= kMaxProbeK)) {
    throw KOutOfRange("|k| must be <= " + std::to_string(kMaxProbeK) + " / dz, got " + std::to_string(k));
  }
}

double record_weight(const TomographyRecord& r) {
  const double shots = r.shots > 0 ? static_cast<double>(r.shots) : 1.0;
  return shots / (1.0 - r.mean * r.mean + kWeightEpsilon);
}

double uniform_spacing(const Eigen::VectorXd& z) {
  if (z.size() < 2) throw ValidationError("z grid needs at least 2 points");
  const double h = (z(z.size() - 1) - z(0)) / static_cast<double>(z.size() - 1);
  if (!(h > 0.0)) throw ValidationError("z grid must be increasing");
  for (Eigen::Index i = 1; i < z.size(); ++i) {
    if (std::abs((z(i) - z(i - 1)) - h) > 1e-9 * std::max(1.0, h)) throw ValidationError("z grid must be uniform");
  }
  return h;
}

double trapezoid(const Eigen::VectorXd& values, double h) {
  const Eigen::Index n = values.size();
  return h * (values.sum() - 0.5 * (values(0) + values(n - 1)));
}

double max_abs_k(const TomographyDataset& dataset) {
  double k_max = 0.0;
  for (const auto& r : dataset.records) k_max = std::max(k_max, std::abs(r.k));
  return k_max;
}

Eigen::MatrixXd design_for(const std::vector<TomographyRecord>& records, const Eigen::VectorXd& z, double h) {
  std::vector<double> k;
  std::vector<Basis> basis;
  for (const auto& r : records) {
    k.push_back(r.k);
    basis.push_back(r.basis);
  }
  return kernels::characteristic_design_parallel(k, basis, std::span<const double>(z.data(), z.size()), h);
}

}  // namespace

std::string to_string(Basis basis) { return basis == Basis::sigma_z ? "sigma_z" : "sigma_y"; }

Basis parse_basis(const std::string& name) {
  if (name == "sigma_z") return Basis::sigma_z;
  if (name == "sigma_y") return Basis::sigma_y;
  throw ValidationError("unknown basis '" + name + "'");
}

std::string to_string(Method method) { return method == Method::fourier ? "fourier" : "least_squares"; }

void TomographyDataset::validate() const {
  double last[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& r : records) {
    if (r.shots < 0 || r.ups < 0 || r.ups > r.shots) throw ValidationError("record needs 0 <= ups <= shots");
    if (!noiseless && r.shots == 0) throw ValidationError("sampled record with zero shots");
    auto& prev = last[r.basis == Basis::sigma_z ? 0 : 1];
    if (!(r.k > prev)) throw ValidationError("k must be strictly increasing within each basis");
    prev = r.k;
  }
}

std::vector<TomographyRecord> TomographyDataset::channel(Basis basis) const {
  std::vector<TomographyRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [basis](const TomographyRecord& r) { return r.basis == basis; });
  return out;
}

double probe_observable(const Eigen::VectorXcd& motional, double k, Basis basis) {
  return probe_observables(motional, std::span<const double>(&k, 1), basis).front();
}

std::vector<double> probe_observables(const Eigen::VectorXcd& motional, std::span<const double> k, Basis basis) {
  for (double kk : k) check_k(kk);
  const auto n = static_cast<int>(motional.size());
  const fock::JointState initial = prepare(motional, basis);
  const fock::SpectralPropagator kick(kick_generator(n));
  std::vector<double> out(k.size());
  const auto count = static_cast<std::ptrdiff_t>(k.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[i] = measure_sigma_z(fock::evolve(initial, kick, k[i]));
  }
  return out;
}

TomographyDataset sample_dataset(const MeasurementConfig& config, std::span<const double> k_grid,
                                 std::int64_t shots, std::uint64_t seed, const SampleOptions& options) {
  if (shots < 0) throw ValidationError("shots must be >= 1 (or 0 for noiseless)");
  if (k_grid.empty()) throw ValidationError("k grid is empty");
  for (std::size_t i = 1; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > k_grid[i - 1])) throw ValidationError("k grid must be strictly increasing");
  }
  const fock::PostSelection pointer = fock::run_protocol(config, options.fock_dim);

  TomographyDataset dataset{{}, seed, shots == 0, config, options.fock_dim};
  for (Basis basis : {Basis::sigma_z, Basis::sigma_y}) {
    if ((basis == Basis::sigma_z && !options.sigma_z) || (basis == Basis::sigma_y && !options.sigma_y)) continue;
    const auto means = probe_observables(pointer.motional, k_grid, basis);
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
      dataset.records.push_back(TomographyRecord{k_grid[i], basis, shots, 0, means[i]});
    }
  }
  if (shots > 0) {
    const auto count = static_cast<std::ptrdiff_t>(dataset.records.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
      auto& rec = dataset.records[r];
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 gen(seq);
      const double p = std::clamp(0.5 * (1.0 + rec.mean), 0.0, 1.0);
      rec.ups = std::binomial_distribution<std::int64_t>(shots, p)(gen);
      rec.mean = 2.0 * static_cast<double>(rec.ups) / static_cast<double>(shots) - 1.0;
    }
  }
  return dataset;
}

std::vector<double> default_k_grid() {
  std::vector<double> k(41);
  for (int i = 0; i < 41; ++i) k[i] = 5.0 * i / 40.0;
  return k;
}

std::vector<double> default_k_fit_grid() {
  std::vector<double> k(21);
  for (int i = 0; i < 21; ++i) k[i] = -kMaxSlopeK + 2.0 * kMaxSlopeK * i / 20.0;
  k[10] = 0.0;
  return k;
}

Eigen::VectorXd default_z_grid(const MeasurementConfig& config, int points) {
  const double half = config.gamma_big() + 5.0;
  return Eigen::VectorXd::LinSpaced(points, -half, half);
}

Eigen::VectorXd least_squares_z_grid(const TomographyDataset& dataset) {
  const double k_max = max_abs_k(dataset);
  if (!(k_max > 0.0)) throw InsufficientKRange("dataset has no k > 0");
  const double h = std::numbers::pi / k_max;
  const auto m = static_cast<int>(std::ceil((dataset.source_config.gamma_big() + 5.0) / h));
  Eigen::VectorXd z(2 * m + 1);
  for (int i = 0; i <= 2 * m; ++i) z(i) = (i - m) * h;
  return z;
}

DensityEstimate reconstruct_fourier(const TomographyDataset& dataset, const Eigen::VectorXd& z_grid) {
  dataset.validate();
  const double h = uniform_spacing(z_grid);
  const auto cz = dataset.channel(Basis::sigma_z);
  const auto sy = dataset.channel(Basis::sigma_y);
  if (cz.size() != sy.size() || cz.size() < 2) {
    throw ValidationError("Fourier reconstruction needs matching sigma_z and sigma_y channels");
  }
  std::vector<double> k(cz.size()), c(cz.size()), s(cz.size());
  for (std::size_t i = 0; i < cz.size(); ++i) {
    if (std::abs(cz[i].k - sy[i].k) > 1e-12) throw ValidationError("sigma_z and sigma_y k grids differ");
    k[i] = cz[i].k;
    c[i] = cz[i].mean;
    s[i] = sy[i].mean;
  }
  if (std::abs(k.front()) > 1e-12) throw ValidationError("Fourier reconstruction needs k grid starting at 0");
  if (k.back() < 2.0) {
    throw InsufficientKRange("Fourier reconstruction needs k_max >= 2 / dz, got " + std::to_string(k.back()));
  }
  Eigen::VectorXd density =
      kernels::fourier_density_parallel(k, c, s, std::span<const double>(z_grid.data(), z_grid.size()));
  const double mass = trapezoid(density, h);
  if (!(mass > 0.0)) throw SolverFailure("Fourier reconstruction has non-positive mass");
  density /= mass;
  const bool negative = density.minCoeff() < -0.01 * density.maxCoeff();
  return DensityEstimate{z_grid, density, weighted_residual(dataset, z_grid, density), Method::fourier, negative};
}

DensityEstimate reconstruct_least_squares(const TomographyDataset& dataset, const Eigen::VectorXd& z_grid) {
  dataset.validate();
  const double h = uniform_spacing(z_grid);
  const auto records = static_cast<Eigen::Index>(dataset.records.size());
  if (z_grid.size() > records) {
    throw RankDeficient("z grid has " + std::to_string(z_grid.size()) + " points but only " +
                        std::to_string(records) + " records");
  }
  const double k_max = max_abs_k(dataset);
  if (!(k_max > 0.0) || h < (std::numbers::pi / k_max) * (1.0 - 1e-9)) {
    throw RankDeficient("z spacing " + std::to_string(h) + " is finer than the resolved band pi/k_max");
  }
  const double reach = dataset.source_config.gamma_big() + 4.0;
  if (z_grid(0) > -reach || z_grid(z_grid.size() - 1) < reach) {
    throw ValidationError("least-squares grid must span at least +-(Gamma + 4)");
  }

  const Eigen::MatrixXd design = design_for(dataset.records, z_grid, h);
  Eigen::VectorXd sqrt_w(records), target(records);
  for (Eigen::Index r = 0; r < records; ++r) {
    sqrt_w(r) = std::sqrt(record_weight(dataset.records[r]));
    target(r) = dataset.records[r].mean;
  }
  const Eigen::MatrixXd b = sqrt_w.asDiagonal() * design;
  const Eigen::VectorXd d = sqrt_w.cwiseProduct(target);
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(z_grid.size(), h);
  const auto fit = solver::nonnegative_sum_constrained_lsq(b, d, a);
  return DensityEstimate{z_grid, fit.x, fit.residual, Method::least_squares, false};
}

double weighted_residual(const TomographyDataset& dataset, const Eigen::VectorXd& z_grid,
                         const Eigen::VectorXd& density) {
  const double h = uniform_spacing(z_grid);
  const Eigen::VectorXd model = design_for(dataset.records, z_grid, h) * density;
  double acc = 0.0;
  for (std::size_t r = 0; r < dataset.records.size(); ++r) {
    const double diff = model(static_cast<Eigen::Index>(r)) - dataset.records[r].mean;
    acc += record_weight(dataset.records[r]) * diff * diff;
  }
  return acc;
}

MeanZEstimate fit_mean_z(const TomographyDataset& dataset, const SlopeFitOptions& options) {
  dataset.validate();
  const auto records = dataset.channel(Basis::sigma_y);
  if (options.odd_order < 1 || options.odd_order % 2 == 0) throw ValidationError("odd_order must be odd and >= 1");
  const int odd_terms = (options.odd_order + 1) / 2;
  const int p = 1 + odd_terms;  // intercept + odd powers
  const auto n = static_cast<Eigen::Index>(records.size());
  if (n < p + 2) throw ValidationError("slope fit needs at least " + std::to_string(p + 2) + " sigma_y points");

  double k_scale = 0.0;
  for (const auto& r : records) {
    if (std::abs(r.k) > kMaxSlopeK + 1e-12) {
      throw ValidationError("slope fit needs |k| dz <= 0.3 (linear regime), got k = " + std::to_string(r.k));
    }
    k_scale = std::max(k_scale, std::abs(r.k));
  }
  for (const auto& r : records) {
    const bool mirrored = std::any_of(records.begin(), records.end(),
                                      [&](const TomographyRecord& o) { return std::abs(o.k + r.k) < 1e-12; });
    if (!mirrored) throw ValidationError("slope fit needs a k grid symmetric around 0");
  }

  // Columns: 1, u, u^3, ..., u^odd_order, then u^2 for the linearity test.
  Eigen::MatrixXd x(n, p + 1);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = records[i].k / k_scale;
    x(i, 0) = 1.0;
    for (int j = 0; j < odd_terms; ++j) x(i, 1 + j) = std::pow(u, 2 * j + 1);
    x(i, p) = u * u;
    y(i) = records[i].mean;
    w(i) = dataset.noiseless ? 1.0 : record_weight(records[i]);
  }
  const Eigen::VectorXd sw = w.cwiseSqrt();

  auto weighted_fit = [&](int cols, Eigen::VectorXd& coeffs) {
    const Eigen::MatrixXd xs = sw.asDiagonal() * x.leftCols(cols);
    coeffs = xs.colPivHouseholderQr().solve(sw.cwiseProduct(y));
    return (xs * coeffs - sw.cwiseProduct(y)).squaredNorm();
  };
  Eigen::VectorXd base, extended;
  const double rss0 = weighted_fit(p, base);

  const double scale = dataset.source_config.delta_z() / k_scale;
  MeanZEstimate out{base(1) * scale, 0.0, 0.0};
  if (dataset.noiseless) return out;

  const Eigen::MatrixXd xs = sw.asDiagonal() * x.leftCols(p);
  const Eigen::MatrixXd cov = (xs.transpose() * xs).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  out.std_error = std::sqrt(cov(1, 1)) * scale;

  const double rss1 = weighted_fit(p + 1, extended);
  const double dof = static_cast<double>(n - p - 1);
  if (rss1 > 0.0) {
    out.f_statistic = std::max(0.0, (rss0 - rss1) / (rss1 / dof));
    const boost::math::fisher_f_distribution<double> dist(1.0, dof);
    const double p_value = boost::math::cdf(boost::math::complement(dist, out.f_statistic));
    if (p_value < options.significance) {
      throw LinearRegimeViolated("quadratic term is significant (F = " + std::to_string(out.f_statistic) +
                                 ", p = " + std::to_string(p_value) + ")");
    }
  }
  return out;
}

MeanZEstimate extract_mean_z(const MeasurementConfig& config, std::span<const double> k_fit_grid,
                             std::int64_t shots, std::uint64_t seed, const SlopeFitOptions& options,
                             int fock_dim) {
  SampleOptions sample{fock_dim, false, true};
  return fit_mean_z(sample_dataset(config, k_fit_grid, shots, seed, sample), options);
}

Eigen::VectorXd analytic_density_on_grid(const MeasurementConfig& config, const Eigen::VectorXd& z_grid) {
  const auto cat = analytic::make_cat_state(config);
  const double dz = config.delta_z();
  Eigen::VectorXd out(z_grid.size());
  for (Eigen::Index i = 0; i < z_grid.size(); ++i) out(i) = dz * analytic::probability_density(cat, z_grid(i) * dz);
  return out;
}

double l1_distance(const DensityEstimate& estimate, const Eigen::VectorXd& reference) {
  if (reference.size() != estimate.density.size()) throw ValidationError("reference/estimate size mismatch");
  return trapezoid((estimate.density - reference).cwiseAbs(), uniform_spacing(estimate.z_grid));
}

}  // namespace weakstrong::tomography
