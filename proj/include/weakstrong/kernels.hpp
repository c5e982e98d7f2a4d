#pragma once

#include <span>

#include <Eigen/Dense>

// Data-parallel inner loops. Every kernel has a serial reference version and
// an OpenMP version with identical arithmetic per element, so the two agree
// bit for bit. Tests compare them; bench/ times them.
namespace weakstrong {

enum class Basis { sigma_z, sigma_y };

namespace kernels {

// Coefficients of the scaled cat-state Wigner function
//   W(u, v) = wp W0(u + a, v) + wm W0(u - a, v) + wc cos(a v) W0(u, v),
//   W0(u, v) = exp(-u^2/2 - v^2/2) / (2 pi).
struct CatWignerTerms {
  double weight_plus;
  double weight_minus;
  double weight_cross;
  double offset;
};

double cat_wigner(const CatWignerTerms& terms, double u, double v);

void wigner_grid_serial(const CatWignerTerms& terms, std::span<const double> u,
                        std::span<const double> v, Eigen::Ref<Eigen::MatrixXd> out);
void wigner_grid_parallel(const CatWignerTerms& terms, std::span<const double> u,
                          std::span<const double> v, Eigen::Ref<Eigen::MatrixXd> out);

// Trapezoid integral of each row over a uniform column spacing.
Eigen::VectorXd row_trapezoid_serial(const Eigen::MatrixXd& values, double spacing);
Eigen::VectorXd row_trapezoid_parallel(const Eigen::MatrixXd& values, double spacing);

// Linear map from a density sampled on z (spacing h) to the expected probe
// outcome of each record: cos(k z_j) h for sigma_z records and sin(k z_j) h
// for sigma_y records.
Eigen::MatrixXd characteristic_design_serial(std::span<const double> k, std::span<const Basis> basis,
                                             std::span<const double> z, double h);
Eigen::MatrixXd characteristic_design_parallel(std::span<const double> k, std::span<const Basis> basis,
                                               std::span<const double> z, double h);

// (1/2pi) * integral over k in [-K, K] of g(k) e^{-ikz}, with g(-k) = g(k)*,
// g = cos_mean + i sin_mean, by trapezoid on the non-negative k samples.
// k must start at 0 and increase.
Eigen::VectorXd fourier_density_serial(std::span<const double> k, std::span<const double> cos_mean,
                                       std::span<const double> sin_mean, std::span<const double> z);
Eigen::VectorXd fourier_density_parallel(std::span<const double> k, std::span<const double> cos_mean,
                                         std::span<const double> sin_mean, std::span<const double> z);

}  // namespace kernels
}  // namespace weakstrong
