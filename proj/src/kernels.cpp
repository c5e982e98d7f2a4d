#include "weakstrong/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakstrong::kernels {

namespace {

inline double ground_wigner(double u, double v) {
  return std::exp(-0.5 * (u * u + v * v)) / (2.0 * std::numbers::pi);
}

inline double trapezoid_weight(Eigen::Index i, Eigen::Index n, double h) {
  return (i == 0 || i == n - 1) ? 0.5 * h : h;
}

inline double design_entry(double k, Basis basis, double z, double h) {
  return (basis == Basis::sigma_z ? std::cos(k * z) : std::sin(k * z)) * h;
}

inline double fourier_point(std::span<const double> k, std::span<const double> c,
                            std::span<const double> s, double z) {
  // Trapezoid on [0, K]; doubling accounts for the mirrored half.
  double acc = 0.0;
  const std::size_t n = k.size();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double h = k[j + 1] - k[j];
    const double f0 = c[j] * std::cos(k[j] * z) + s[j] * std::sin(k[j] * z);
    const double f1 = c[j + 1] * std::cos(k[j + 1] * z) + s[j + 1] * std::sin(k[j + 1] * z);
    acc += 0.5 * h * (f0 + f1);
  }
  return 2.0 * acc / (2.0 * std::numbers::pi);
}

void check_fourier_inputs(std::span<const double> k, std::span<const double> c,
                          std::span<const double> s) {
  if (k.size() != c.size() || k.size() != s.size() || k.size() < 2) {
    throw std::invalid_argument("fourier_density: mismatched or short inputs");
  }
}

}  // namespace

double cat_wigner(const CatWignerTerms& t, double u, double v) {
  return t.weight_plus * ground_wigner(u + t.offset, v) + t.weight_minus * ground_wigner(u - t.offset, v) +
         t.weight_cross * std::cos(t.offset * v) * ground_wigner(u, v);
}

void wigner_grid_serial(const CatWignerTerms& terms, std::span<const double> u,
                        std::span<const double> v, Eigen::Ref<Eigen::MatrixXd> out) {
  const auto nu = static_cast<Eigen::Index>(u.size());
  const auto nv = static_cast<Eigen::Index>(v.size());
  for (Eigen::Index i = 0; i < nu; ++i) {
    for (Eigen::Index j = 0; j < nv; ++j) {
      out(i, j) = cat_wigner(terms, u[i], v[j]);
    }
  }
}

void wigner_grid_parallel(const CatWignerTerms& terms, std::span<const double> u,
                          std::span<const double> v, Eigen::Ref<Eigen::MatrixXd> out) {
  const auto nu = static_cast<Eigen::Index>(u.size());
  const auto nv = static_cast<Eigen::Index>(v.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < nu; ++i) {
    for (Eigen::Index j = 0; j < nv; ++j) {
      out(i, j) = cat_wigner(terms, u[i], v[j]);
    }
  }
}

Eigen::VectorXd row_trapezoid_serial(const Eigen::MatrixXd& values, double spacing) {
  Eigen::VectorXd out(values.rows());
  const Eigen::Index n = values.cols();
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += trapezoid_weight(j, n, spacing) * values(i, j);
    out(i) = acc;
  }
  return out;
}

Eigen::VectorXd row_trapezoid_parallel(const Eigen::MatrixXd& values, double spacing) {
  Eigen::VectorXd out(values.rows());
  const Eigen::Index n = values.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += trapezoid_weight(j, n, spacing) * values(i, j);
    out(i) = acc;
  }
  return out;
}

Eigen::MatrixXd characteristic_design_serial(std::span<const double> k, std::span<const Basis> basis,
                                             std::span<const double> z, double h) {
  const auto rows = static_cast<Eigen::Index>(k.size());
  const auto cols = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index j = 0; j < cols; ++j) a(r, j) = design_entry(k[r], basis[r], z[j], h);
  }
  return a;
}

Eigen::MatrixXd characteristic_design_parallel(std::span<const double> k, std::span<const Basis> basis,
                                               std::span<const double> z, double h) {
  const auto rows = static_cast<Eigen::Index>(k.size());
  const auto cols = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd a(rows, cols);
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index j = 0; j < cols; ++j) a(r, j) = design_entry(k[r], basis[r], z[j], h);
  }
  return a;
}

Eigen::VectorXd fourier_density_serial(std::span<const double> k, std::span<const double> cos_mean,
                                       std::span<const double> sin_mean, std::span<const double> z) {
  check_fourier_inputs(k, cos_mean, sin_mean);
  Eigen::VectorXd out(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) out(i) = fourier_point(k, cos_mean, sin_mean, z[i]);
  return out;
}

Eigen::VectorXd fourier_density_parallel(std::span<const double> k, std::span<const double> cos_mean,
                                         std::span<const double> sin_mean, std::span<const double> z) {
  check_fourier_inputs(k, cos_mean, sin_mean);
  const auto n = static_cast<std::ptrdiff_t>(z.size());
  Eigen::VectorXd out(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out(i) = fourier_point(k, cos_mean, sin_mean, z[i]);
  return out;
}

}  // namespace weakstrong::kernels
