#include "weakstrong/analytic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "weakstrong/errors.hpp"
#include "weakstrong/kernels.hpp"

namespace weakstrong::analytic {

namespace {

constexpr double kDegenerateNorm2 = 1e-15;
constexpr double kMaxGridSpacing = 0.25;

// 1 - cos(2 theta) e^{-Gamma^2/2}, rewritten to avoid cancellation when both
// theta and Gamma are small.
double norm_squared(double theta, double gamma_big) {
  const double s = std::sin(theta);
  return 2.0 * s * s - std::cos(2.0 * theta) * std::expm1(-0.5 * gamma_big * gamma_big);
}

double checked_norm_squared(const MeasurementConfig& config) {
  const double n2 = norm_squared(config.theta(), config.gamma_big());
  if (!(n2 >= kDegenerateNorm2)) {
    throw DegenerateState("post-selected pointer state is degenerate (norm^2 = " + std::to_string(n2) +
                          "); theta and Gamma are both too small");
  }
  return n2;
}

kernels::CatWignerTerms wigner_terms(const MeasurementConfig& config) {
  const CatState cat = make_cat_state(config);
  const double n2 = cat.norm * cat.norm;
  return {cat.coeff_plus * cat.coeff_plus / n2, cat.coeff_minus * cat.coeff_minus / n2,
          2.0 * cat.coeff_plus * cat.coeff_minus / n2, config.gamma_big()};
}

}  // namespace

double weak_value(double theta) {
  if (theta == 0.0) throw PoleError("weak value diverges at theta = 0 (orthogonal post-selection)");
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) throw ValidationError("theta must lie in (0, pi/2]");
  return -std::cos(theta) / std::sin(theta);
}

double expectation_value(double theta) { return -std::sin(2.0 * theta); }

double transition_factor(double gamma_big) {
  if (!(gamma_big >= 0.0)) throw ValidationError("gamma must be >= 0");
  return std::exp(-0.5 * gamma_big * gamma_big);
}

double preselection_overlap(double theta) {
  const double s = std::sin(theta);
  return s * s;
}

double CatState::overlap() const { return std::exp(-0.5 * (displacement / width) * (displacement / width)); }

CatState make_cat_state(const MeasurementConfig& config) {
  const double n2 = checked_norm_squared(config);
  const double phase = config.theta() + std::numbers::pi / 4;
  return CatState{-std::sin(phase), std::cos(phase), config.displacement(), std::sqrt(n2), config.delta_z()};
}

double pointer_shift(const MeasurementConfig& config) {
  const double n2 = checked_norm_squared(config);
  return -config.displacement() * std::sin(2.0 * config.theta()) / n2;
}

double invert_transition_factor(double shift, double theta, double gamma0_t) {
  const double c = std::cos(2.0 * theta);
  if (std::abs(c) < 1e-12) {
    throw NonInvertible("theta = pi/4 carries no transition information (cos 2theta = 0)");
  }
  if (shift == 0.0) throw NonInvertible("zero pointer shift cannot be inverted");
  return (shift + gamma0_t * std::sin(2.0 * theta)) / (shift * c);
}

double success_probability(const MeasurementConfig& config) {
  return 0.5 * norm_squared(config.theta(), config.gamma_big());
}

double ground_wavefunction(double z, double width) {
  const double prefactor = std::pow(2.0 * std::numbers::pi * width * width, -0.25);
  return prefactor * std::exp(-z * z / (4.0 * width * width));
}

double wavefunction(const CatState& cat, double z) {
  return (cat.coeff_plus * ground_wavefunction(z + cat.displacement, cat.width) +
          cat.coeff_minus * ground_wavefunction(z - cat.displacement, cat.width)) /
         cat.norm;
}

double probability_density(const CatState& cat, double z) {
  const double psi = wavefunction(cat, z);
  return psi * psi;
}

double incoherent_density(const CatState& cat, double z) {
  const double a = cat.coeff_plus * ground_wavefunction(z + cat.displacement, cat.width);
  const double b = cat.coeff_minus * ground_wavefunction(z - cat.displacement, cat.width);
  return (a * a + b * b) / (cat.coeff_plus * cat.coeff_plus + cat.coeff_minus * cat.coeff_minus);
}

void PhaseSpaceGrid::validate() const {
  if (n_z < 2 || n_p < 2) throw ValidationError("phase-space grid needs at least 2 points per axis");
  if (!(z_max > z_min) || !(p_max > p_min)) throw ValidationError("phase-space grid needs max > min");
}

Eigen::MatrixXd wigner(const MeasurementConfig& config, const PhaseSpaceGrid& grid) {
  grid.validate();
  if (grid.dz() > kMaxGridSpacing || grid.dp() > kMaxGridSpacing) {
    throw GridTooCoarse("Wigner grid spacing must be <= 1/4 of the natural unit (dz = " +
                        std::to_string(grid.dz()) + ", dp = " + std::to_string(grid.dp()) + ")");
  }
  std::vector<double> u(grid.n_z);
  std::vector<double> v(grid.n_p);
  for (int i = 0; i < grid.n_z; ++i) u[i] = grid.z(i);
  for (int j = 0; j < grid.n_p; ++j) v[j] = grid.p(j);
  Eigen::MatrixXd out(grid.n_z, grid.n_p);
  kernels::wigner_grid_parallel(wigner_terms(config), u, v, out);
  return out;
}

double wigner_point(const MeasurementConfig& config, double u, double v) {
  return kernels::cat_wigner(wigner_terms(config), u, v);
}

double wigner_fringe_point(const MeasurementConfig& config, double u, double v) {
  auto terms = wigner_terms(config);
  terms.weight_plus = 0.0;
  terms.weight_minus = 0.0;
  return kernels::cat_wigner(terms, u, v);
}

}  // namespace weakstrong::analytic
