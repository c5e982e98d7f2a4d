#pragma once

#include <Eigen/Dense>

#include "weakstrong/config.hpp"

// Closed-form predictions for a qubit pre-selected in |down>, coupled to a
// Gaussian pointer through H = gamma0 sigma_x p, and post-selected on
// |f> = cos(theta)|up> - sin(theta)|down>.
namespace weakstrong::analytic {

// -cot(theta). Throws PoleError at theta = 0.
double weak_value(double theta);

// -sin(2 theta).
double expectation_value(double theta);

// exp(-Gamma^2 / 2), the overlap <phi(z + gamma0 t)|phi(z - gamma0 t)>.
double transition_factor(double gamma_big);

// |<f|i>|^2 = sin^2(theta): the post-selection rate an infinitely weak
// coupling would give.
double preselection_overlap(double theta);

// Normalized two-Gaussian pointer state
//   (coeff_plus |phi(z + d)> + coeff_minus |phi(z - d)>) / norm,
// with d = gamma0 t. coeff_plus/coeff_minus are the raw (unnormalized)
// amplitudes; norm^2 = coeff_plus^2 + coeff_minus^2 + 2 coeff_plus coeff_minus e^{-Gamma^2/2}.
struct CatState {
  double coeff_plus;
  double coeff_minus;
  double displacement;
  double norm;
  double width;

  double overlap() const;
};

// Throws DegenerateState when norm^2 < 1e-15.
CatState make_cat_state(const MeasurementConfig& config);

// <delta z>_theta in the config's length unit.
double pointer_shift(const MeasurementConfig& config);

// Infers e^{-Gamma^2/2} from an observed shift. Throws NonInvertible at
// theta = pi/4 (cos 2theta = 0) or for a zero shift.
double invert_transition_factor(double shift, double theta, double gamma0_t);

// (1 - cos(2 theta) e^{-Gamma^2/2}) / 2.
double success_probability(const MeasurementConfig& config);

// Ground-state wavefunction (1 / 2 pi dz^2)^{1/4} exp(-z^2 / 4 dz^2).
double ground_wavefunction(double z, double width);

// Cat-state amplitude psi(z) (real, normalized).
double wavefunction(const CatState& cat, double z);

// |psi(z)|^2 in 1/length.
double probability_density(const CatState& cat, double z);

// Same density without the interference term, for rise/dip comparisons.
double incoherent_density(const CatState& cat, double z);

// Uniform phase-space grid. z in units of dz, p in units of hbar / 2 dz.
struct PhaseSpaceGrid {
  double z_min;
  double z_max;
  int n_z;
  double p_min;
  double p_max;
  int n_p;

  // Throws ValidationError if n < 2 or max <= min.
  void validate() const;
  double dz() const { return (z_max - z_min) / (n_z - 1); }
  double dp() const { return (p_max - p_min) / (n_p - 1); }
  double z(int i) const { return z_min + i * dz(); }
  double p(int j) const { return p_min + j * dp(); }
};

// Scaled Wigner function of the cat state: rows are z samples, columns are p
// samples. Normalized so that the double integral over the scaled variables
// (z / dz, 2 dz p / hbar) is 1 and the p-marginal is dz |psi|^2.
// Throws GridTooCoarse when either spacing exceeds 1/4.
Eigen::MatrixXd wigner(const MeasurementConfig& config, const PhaseSpaceGrid& grid);

// Single-point evaluation of the same function, in scaled units.
double wigner_point(const MeasurementConfig& config, double u, double v);

// Interference (fringe) term of the scaled Wigner function alone.
double wigner_fringe_point(const MeasurementConfig& config, double u, double v);

}  // namespace weakstrong::analytic
