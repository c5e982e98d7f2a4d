#include "weakstrong/fock.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "weakstrong/errors.hpp"

namespace weakstrong::fock {

namespace {

constexpr cd kI{0.0, 1.0};
constexpr double kPostSelectionFloor = 1e-15;

double reduce_phase(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;  // |up><down|
  return m;
}

void check_dimension(int n) {
  if (n < kMinDimension) {
    throw DimensionTooSmall("Fock truncation must be >= " + std::to_string(kMinDimension) + ", got " +
                            std::to_string(n));
  }
}

void check_hermitian(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw ValidationError("Hamiltonian must be square");
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw ValidationError("Hamiltonian is not Hermitian");
}

JointState guarded(Eigen::VectorXcd amplitudes, int n) {
  JointState out{std::move(amplitudes), n};
  const double tail = out.tail_mass();
  if (tail >= kTailMassLimit) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", tail);
    throw TruncationOverflow("evolved state has tail mass " + std::string(buf) +
                             " in the top Fock levels; increase the truncation dimension (N = " +
                             std::to_string(n) + ")");
  }
  return out;
}

}  // namespace

double JointState::tail_mass() const {
  double mass = 0.0;
  const int first = std::max(0, truncation_dim - 4);
  for (int q = 0; q < 2; ++q) {
    for (int n = first; n < truncation_dim; ++n) mass += std::norm(amplitudes(q * truncation_dim + n));
  }
  return mass;
}

HamiltonianSpec HamiltonianSpec::carrier(double phi, double rabi) {
  return HamiltonianSpec{HamiltonianKind::carrier, phi, 0.0, rabi, 0.0}.normalized();
}

HamiltonianSpec HamiltonianSpec::red_sideband(double phi, double rabi, double eta) {
  return HamiltonianSpec{HamiltonianKind::red_sideband, phi, 0.0, rabi, eta}.normalized();
}

HamiltonianSpec HamiltonianSpec::blue_sideband(double phi, double rabi, double eta) {
  return HamiltonianSpec{HamiltonianKind::blue_sideband, 0.0, phi, rabi, eta}.normalized();
}

HamiltonianSpec HamiltonianSpec::bichromatic(double phi_red, double phi_blue, double rabi, double eta) {
  return HamiltonianSpec{HamiltonianKind::bichromatic, phi_red, phi_blue, rabi, eta}.normalized();
}

HamiltonianSpec HamiltonianSpec::bichromatic_sum_difference(double phi_plus, double phi_minus, double rabi,
                                                            double eta) {
  return bichromatic(phi_plus + phi_minus, phi_plus - phi_minus, rabi, eta);
}

HamiltonianSpec HamiltonianSpec::normalized() const {
  if (!(rabi >= 0.0) || !std::isfinite(rabi)) throw ValidationError("Rabi frequency must be >= 0");
  if (kind != HamiltonianKind::carrier && !(lamb_dicke > 0.0 && lamb_dicke < 0.3)) {
    throw ValidationError("Lamb-Dicke parameter must lie in (0, 0.3)");
  }
  HamiltonianSpec out = *this;
  out.phase_a = reduce_phase(phase_a);
  out.phase_b = reduce_phase(phase_b);
  return out;
}

Eigen::MatrixXd annihilation(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int m = 1; m < n; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return a;
}

Eigen::MatrixXd position_operator(int n, double delta_z) {
  const Eigen::MatrixXd a = annihilation(n);
  return delta_z * (a + a.transpose());
}

Eigen::MatrixXcd momentum_operator(int n, double delta_z) {
  const Eigen::MatrixXd a = annihilation(n);
  return (kI / (2.0 * delta_z)) * (a.transpose() - a).cast<cd>();
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  // rows/cols ordered (down, up): sigma_y = -i|up><down| + i|down><up|
  Eigen::Matrix2cd m;
  m << 0.0, kI, -kI, 0.0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << -1.0, 0.0, 0.0, 1.0;
  return m;
}

Eigen::MatrixXcd kron(const Eigen::Matrix2cd& qubit, const Eigen::MatrixXcd& mode) {
  const Eigen::Index n = mode.rows();
  Eigen::MatrixXcd out(2 * n, 2 * n);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block(i * n, j * n, n, n) = qubit(i, j) * mode;
  }
  return out;
}

JointState ground_joint_state(int n) {
  check_dimension(n);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(2 * n);
  amp(0) = 1.0;
  return JointState{std::move(amp), n};
}

Eigen::MatrixXcd build_hamiltonian(const HamiltonianSpec& raw, int n) {
  check_dimension(n);
  const HamiltonianSpec spec = raw.normalized();
  const Eigen::MatrixXcd a = annihilation(n).cast<cd>();
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::Matrix2cd sp = sigma_plus();
  const Eigen::Matrix2cd sm = sp.adjoint();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const double sideband = 0.5 * spec.lamb_dicke * spec.rabi;

  auto red = [&](double phi) -> Eigen::MatrixXcd {
    return kI * sideband * (std::exp(kI * phi) * kron(sp, a) - std::exp(-kI * phi) * kron(sm, ad));
  };
  auto blue = [&](double phi) -> Eigen::MatrixXcd {
    return kI * sideband * (std::exp(kI * phi) * kron(sp, ad) - std::exp(-kI * phi) * kron(sm, a));
  };

  switch (spec.kind) {
    case HamiltonianKind::carrier:
      return 0.5 * spec.rabi *
             (std::exp(kI * spec.phase_a) * kron(sp, id) + std::exp(-kI * spec.phase_a) * kron(sm, id));
    case HamiltonianKind::red_sideband:
      return red(spec.phase_a);
    case HamiltonianKind::blue_sideband:
      return blue(spec.phase_b);
    case HamiltonianKind::bichromatic:
      return red(spec.phase_a) + blue(spec.phase_b);
  }
  throw ValidationError("unknown Hamiltonian kind");
}

SpectralPropagator::SpectralPropagator(const Eigen::MatrixXcd& hamiltonian) {
  check_hermitian(hamiltonian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw SolverFailure("Hermitian eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::VectorXcd SpectralPropagator::apply(const Eigen::VectorXcd& state, double t) const {
  Eigen::VectorXcd coeffs = eigenvectors_.adjoint() * state;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::exp(-kI * (eigenvalues_(i) * t));
  return eigenvectors_ * coeffs;
}

JointState evolve(const JointState& state, const Eigen::MatrixXcd& hamiltonian, double t) {
  if (hamiltonian.rows() != state.amplitudes.size()) throw ValidationError("Hamiltonian/state size mismatch");
  if (t == 0.0) return state;
  return evolve(state, SpectralPropagator(hamiltonian), t);
}

JointState evolve(const JointState& state, const SpectralPropagator& propagator, double t) {
  return guarded(propagator.apply(state.amplitudes, t), state.truncation_dim);
}

JointState rotate_qubit_y(const JointState& state, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const int n = state.truncation_dim;
  const Eigen::VectorXcd down = state.branch(0);
  const Eigen::VectorXcd up = state.branch(1);
  JointState out{Eigen::VectorXcd(2 * n), n};
  out.amplitudes.segment(0, n) = c * down + s * up;
  out.amplitudes.segment(n, n) = -s * down + c * up;
  return out;
}

PostSelection post_select(const JointState& state, double theta) {
  const Eigen::VectorXcd branch = std::cos(theta) * state.branch(1) - std::sin(theta) * state.branch(0);
  const double p = branch.squaredNorm();
  if (!(p >= kPostSelectionFloor)) {
    throw PostSelectionFailed("post-selection probability " + std::to_string(p) + " is below 1e-15");
  }
  return PostSelection{branch / std::sqrt(p), p};
}

PostSelection project_up(const JointState& state) { return post_select(state, 0.0); }

double expectation_z(const Eigen::VectorXcd& motional, double delta_z) {
  double acc = 0.0;
  for (Eigen::Index n = 0; n + 1 < motional.size(); ++n) {
    acc += 2.0 * std::real(std::conj(motional(n)) * motional(n + 1)) * std::sqrt(static_cast<double>(n + 1));
  }
  return delta_z * acc;
}

PostSelection run_protocol(const MeasurementConfig& config, int n) {
  const JointState initial = ground_joint_state(n);
  const auto coupling = HamiltonianSpec::bichromatic_sum_difference(std::numbers::pi / 2, std::numbers::pi / 2,
                                                                    config.omega_rabi(), config.eta());
  const JointState coupled = evolve(initial, build_hamiltonian(coupling, n), config.t());
  return project_up(rotate_qubit_y(coupled, 2.0 * config.theta()));
}

Eigen::VectorXcd displaced_ground_state(double shift, double delta_z, int n) {
  const double alpha = shift / (2.0 * delta_z);
  Eigen::VectorXcd out(n);
  out(0) = std::exp(-0.5 * alpha * alpha);
  for (int m = 1; m < n; ++m) out(m) = out(m - 1) * (alpha / std::sqrt(static_cast<double>(m)));
  return out;
}

Eigen::VectorXcd expand_cat_state(const analytic::CatState& cat, int n) {
  const Eigen::VectorXcd left = displaced_ground_state(-cat.displacement, cat.width, n);
  const Eigen::VectorXcd right = displaced_ground_state(cat.displacement, cat.width, n);
  return (cat.coeff_plus * left + cat.coeff_minus * right) / cat.norm;
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

cd position_amplitude(const Eigen::VectorXcd& motional, double z, double delta_z) {
  const double xi = z / (std::sqrt(2.0) * delta_z);
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  cd acc = motional(0) * cur;
  for (Eigen::Index m = 0; m + 1 < motional.size(); ++m) {
    const double md = static_cast<double>(m);
    const double next = std::sqrt(2.0 / (md + 1.0)) * xi * cur - std::sqrt(md / (md + 1.0)) * prev;
    prev = cur;
    cur = next;
    acc += motional(m + 1) * cur;
  }
  return acc / std::sqrt(std::sqrt(2.0) * delta_z);
}

}  // namespace weakstrong::fock
