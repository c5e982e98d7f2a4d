#pragma once

#include <complex>

#include <Eigen/Dense>

#include "weakstrong/analytic.hpp"
#include "weakstrong/config.hpp"

// Numeric qubit (x) truncated-Fock engine. Amplitudes are stored qubit-major:
// index q * N + n with q = 0 for |down> and q = 1 for |up>. Hamiltonians are
// returned divided by hbar (angular-frequency units), so evolve() applies
// exp(-i H t).
namespace weakstrong::fock {

using cd = std::complex<double>;

constexpr int kMinDimension = 8;
constexpr int kDefaultDimension = 128;
constexpr double kTailMassLimit = 1e-8;

struct JointState {
  Eigen::VectorXcd amplitudes;
  int truncation_dim;

  double norm() const { return amplitudes.norm(); }
  // Probability in Fock levels n >= N - 4 summed over both qubit branches.
  double tail_mass() const;
  Eigen::VectorXcd branch(int qubit) const { return amplitudes.segment(qubit * truncation_dim, truncation_dim); }
};

enum class HamiltonianKind { carrier, red_sideband, blue_sideband, bichromatic };

struct HamiltonianSpec {
  HamiltonianKind kind;
  double phase_a;  // phi_car, or phi_red for sideband/bichromatic drives
  double phase_b;  // phi_blue; unused otherwise
  double rabi;
  double lamb_dicke;

  static HamiltonianSpec carrier(double phi, double rabi);
  static HamiltonianSpec red_sideband(double phi, double rabi, double eta);
  static HamiltonianSpec blue_sideband(double phi, double rabi, double eta);
  static HamiltonianSpec bichromatic(double phi_red, double phi_blue, double rabi, double eta);
  // phi_plus = (phi_red + phi_blue)/2 picks the qubit operator, phi_minus =
  // (phi_red - phi_blue)/2 the motional one.
  static HamiltonianSpec bichromatic_sum_difference(double phi_plus, double phi_minus, double rabi, double eta);

  // Reduces phases mod 2pi and checks rabi >= 0, 0 < eta < 0.3.
  HamiltonianSpec normalized() const;
};

// Single-mode operators on Fock levels 0..N-1.
Eigen::MatrixXd annihilation(int n);
Eigen::MatrixXd position_operator(int n, double delta_z);        // dz (a + a^dagger)
Eigen::MatrixXcd momentum_operator(int n, double delta_z);       // i (a^dagger - a) / (2 dz), i.e. p / hbar
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
// Kronecker product in the qubit-major ordering used by JointState.
Eigen::MatrixXcd kron(const Eigen::Matrix2cd& qubit, const Eigen::MatrixXcd& mode);

JointState ground_joint_state(int n);

Eigen::MatrixXcd build_hamiltonian(const HamiltonianSpec& spec, int n);

// exp(-i H t) through the eigendecomposition of a Hermitian matrix. The
// decomposition is computed once; apply() can then be called for any t.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Eigen::MatrixXcd& hamiltonian);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& state, double t) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

// Throws ValidationError if H is not Hermitian, TruncationOverflow if the
// evolved state leaks into the top four Fock levels.
JointState evolve(const JointState& state, const Eigen::MatrixXcd& hamiltonian, double t);
JointState evolve(const JointState& state, const SpectralPropagator& propagator, double t);

// exp(-i angle sigma_y / 2) on the qubit.
JointState rotate_qubit_y(const JointState& state, double angle);

struct PostSelection {
  Eigen::VectorXcd motional;  // normalized
  double probability;
};

// Projects onto <f| = cos(theta) <up| - sin(theta) <down|.
PostSelection post_select(const JointState& state, double theta);

// Projects onto <up| only (what the detector does after R_y).
PostSelection project_up(const JointState& state);

double expectation_z(const Eigen::VectorXcd& motional, double delta_z);

// Pre-selection, von Neumann coupling (bichromatic phi+ = phi- = pi/2) for the
// config's duration, R_y(2 theta), projection on |up>.
PostSelection run_protocol(const MeasurementConfig& config, int n = kDefaultDimension);

// Coherent amplitudes e^{-a^2/2} a^m / sqrt(m!) of the displaced ground state
// phi(z - shift); computed by recurrence, independent of evolve().
Eigen::VectorXcd displaced_ground_state(double shift, double delta_z, int n);

// The analytic cat state expanded in the Fock basis.
Eigen::VectorXcd expand_cat_state(const analytic::CatState& cat, int n);

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// Position-space amplitude of a Fock-basis motional state (Hermite functions).
cd position_amplitude(const Eigen::VectorXcd& motional, double z, double delta_z);

}  // namespace weakstrong::fock
