#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "weakstrong/analytic.hpp"
#include "weakstrong/errors.hpp"
#include "weakstrong/fock.hpp"

using namespace weakstrong;
using fock::cd;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

fock::JointState random_state(int n, unsigned seed) {
  std::srand(seed);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
  // keep the top levels empty so the tail guard stays quiet
  for (int q = 0; q < 2; ++q) {
    for (int m = 0; m < n / 2; ++m) v(q * n + m) = cd(std::rand() / double(RAND_MAX) - 0.5, std::rand() / double(RAND_MAX) - 0.5) * std::exp(-0.2 * m);
  }
  return fock::JointState{v.normalized(), n};
}

}  // namespace

TEST_CASE("operators") {
  const auto a = fock::annihilation(6);
  CHECK(a(0, 1) == doctest::Approx(1.0));
  CHECK(a(2, 3) == doctest::Approx(std::sqrt(3.0)));
  // [a, a^dagger] = 1 away from the truncation edge
  const Eigen::MatrixXd comm = a * a.transpose() - a.transpose() * a;
  for (int m = 0; m < 5; ++m) CHECK(comm(m, m) == doctest::Approx(1.0));
  CHECK(max_abs(fock::pauli_x() * fock::pauli_y() - kI * fock::pauli_z()) < 1e-15);
  // [z, p] = i hbar in the untruncated block
  const Eigen::MatrixXcd z = fock::position_operator(12, 1.3).cast<cd>();
  const Eigen::MatrixXcd p = fock::momentum_operator(12, 1.3);
  const Eigen::MatrixXcd zp = z * p - p * z;
  for (int m = 0; m < 11; ++m) CHECK(std::abs(zp(m, m) - kI) < 1e-13);
}

TEST_CASE("Hamiltonians are Hermitian to 1e-14") {
  for (double phi : {0.0, 0.4, kPi / 2, 2.0, 5.9, -1.0, 13.0}) {
    for (const auto& spec : {fock::HamiltonianSpec::carrier(phi, 2.0), fock::HamiltonianSpec::red_sideband(phi, 2.0, 0.08),
                             fock::HamiltonianSpec::blue_sideband(phi, 2.0, 0.08),
                             fock::HamiltonianSpec::bichromatic(phi, 1.1 * phi + 0.3, 2.0, 0.08)}) {
      const auto h = fock::build_hamiltonian(spec, 16);
      CHECK(max_abs(h - h.adjoint()) <= 1e-14);
    }
  }
}

TEST_CASE("Hamiltonian validation") {
  CHECK_THROWS_AS(fock::HamiltonianSpec::red_sideband(0.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(fock::HamiltonianSpec::blue_sideband(0.0, 1.0, 0.3), ValidationError);
  CHECK_THROWS_AS(fock::HamiltonianSpec::carrier(0.0, -1.0), ValidationError);
  CHECK(fock::HamiltonianSpec::carrier(-kPi / 2, 1.0).phase_a == doctest::Approx(1.5 * kPi));
  CHECK(max_abs(fock::build_hamiltonian(fock::HamiltonianSpec::carrier(0.3, 0.0), 8)) == 0.0);
  CHECK_THROWS_AS(fock::build_hamiltonian(fock::HamiltonianSpec::carrier(0.0, 1.0), 4), DimensionTooSmall);
  CHECK_THROWS_AS(fock::ground_joint_state(7), DimensionTooSmall);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(16, 16);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(fock::SpectralPropagator{bad}, ValidationError);
}

TEST_CASE("sideband selection rules") {
  const int n = 10;
  const auto red = fock::build_hamiltonian(fock::HamiltonianSpec::red_sideband(0.0, 1.0, 0.1), n);
  const auto blue = fock::build_hamiltonian(fock::HamiltonianSpec::blue_sideband(0.0, 1.0, 0.1), n);
  // |down, m> couples to |up, m - 1> (red) and |up, m + 1> (blue)
  const int m = 3;
  CHECK(std::abs(red(n + m - 1, m)) == doctest::Approx(0.05 * std::sqrt(3.0)));
  CHECK(std::abs(red(n + m + 1, m)) == 0.0);
  CHECK(std::abs(blue(n + m + 1, m)) == doctest::Approx(0.05 * std::sqrt(4.0)));
  CHECK(std::abs(blue(n + m - 1, m)) == 0.0);
}

TEST_CASE("phase dictionary of the bichromatic drive") {
  // H = (eta Omega / 2) S(phi+) (x) X(phi-),  S = i (sigma+ e^{i phi+} - h.c.),  X = a e^{i phi-} + h.c.
  const int n = 12;
  const double eta = 0.08;
  const double rabi = 3.0;
  const Eigen::MatrixXcd z = fock::position_operator(n, 1.0).cast<cd>();  // a + a^dagger
  const Eigen::MatrixXcd p = fock::momentum_operator(n, 1.0);              // i (a^dagger - a) / 2
  struct Case {
    double plus, minus;
    Eigen::Matrix2cd qubit;
    Eigen::MatrixXcd mode;
  };
  const Case cases[] = {
      {kPi / 2, kPi / 2, -fock::pauli_x(), -2.0 * p},
      {kPi / 2, 0.0, -fock::pauli_x(), z},
      {0.0, kPi / 2, -fock::pauli_y(), -2.0 * p},
      {0.0, 0.0, -fock::pauli_y(), z},
  };
  for (const auto& c : cases) {
    const auto h = fock::build_hamiltonian(fock::HamiltonianSpec::bichromatic_sum_difference(c.plus, c.minus, rabi, eta), n);
    CHECK(max_abs(h - 0.5 * eta * rabi * fock::kron(c.qubit, c.mode)) < 1e-14);
  }
  // phi+ = phi- = pi/2 is the von Neumann coupling gamma0 sigma_x p
  const auto h = fock::build_hamiltonian(fock::HamiltonianSpec::bichromatic_sum_difference(kPi / 2, kPi / 2, rabi, eta), n);
  CHECK(max_abs(h - eta * rabi * fock::kron(fock::pauli_x(), p)) < 1e-14);
}

TEST_CASE("unitarity of evolve") {
  const int n = 48;
  for (const auto& spec : {fock::HamiltonianSpec::carrier(0.7, 2.0), fock::HamiltonianSpec::bichromatic(0.3, 2.1, 5.0, 0.1)}) {
    const auto h = fock::build_hamiltonian(spec, n);
    for (double t : {0.1, 1.0, 3.0}) {
      const auto out = fock::evolve(random_state(n, 7), h, t);
      CHECK(std::abs(out.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("carrier drive rotates the qubit about y") {
  const int n = 8;
  const double rabi = 2.0;
  const double t = 0.37;
  const auto h = fock::build_hamiltonian(fock::HamiltonianSpec::carrier(1.5 * kPi, rabi), n);
  const auto s = random_state(n, 3);
  const auto a = fock::evolve(s, h, t);
  const auto b = fock::rotate_qubit_y(s, rabi * t);
  CHECK((a.amplitudes - b.amplitudes).norm() < 1e-13);
}

TEST_CASE("R_y(2 theta) maps the |up> projection onto the post-selected state") {
  const auto s = random_state(16, 11);
  for (double theta : {0.02, 0.5, kPi / 4, 1.5}) {
    const auto direct = fock::post_select(s, theta);
    const auto rotated = fock::project_up(fock::rotate_qubit_y(s, 2.0 * theta));
    CHECK(direct.probability == doctest::Approx(rotated.probability).epsilon(1e-13));
    CHECK(fock::fidelity(direct.motional, rotated.motional) == doctest::Approx(1.0).epsilon(1e-13));
  }
  fock::JointState down = fock::ground_joint_state(8);
  CHECK_THROWS_AS(fock::project_up(down), PostSelectionFailed);
}

TEST_CASE("expectation of z") {
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(16);
  vac(0) = 1.0;
  CHECK(fock::expectation_z(vac, 1.0) == 0.0);
  const auto coh = fock::displaced_ground_state(1.7, 2.0, 64);
  CHECK(fock::expectation_z(coh, 2.0) == doctest::Approx(1.7).epsilon(1e-13));
}

TEST_CASE("protocol at theta = pi/4 leaves a single displaced packet") {
  for (double g : {0.01, 0.1, 1.0, 2.9}) {
    const auto c = MeasurementConfig::natural(kPi / 4, g);
    const auto post = fock::run_protocol(c, 64);
    CHECK(std::abs(fock::expectation_z(post.motional, 1.0) / g + 1.0) < 1e-8);
    CHECK(fock::fidelity(post.motional, fock::displaced_ground_state(-g, 1.0, 64)) >= 1.0 - 1e-8);
  }
}

TEST_CASE("protocol matches the analytic cat state") {
  const double thetas[] = {0.02, 0.3, kPi / 4, 1.0, 1.5};
  const double gammas[] = {0.04, 0.5, 1.0, 2.0, 2.9};
  for (double t : thetas) {
    for (double g : gammas) {
      const auto c = MeasurementConfig::natural(t, g);
      const auto post = fock::run_protocol(c, 128);
      const double z = fock::expectation_z(post.motional, 1.0);
      const double a = analytic::pointer_shift(c);
      CHECK(std::abs(z - a) / std::abs(a) < 1e-6);
      const auto cat = analytic::make_cat_state(c);
      CHECK(fock::fidelity(post.motional, fock::expand_cat_state(cat, 128)) >= 1.0 - 1e-8);
      CHECK(post.probability == doctest::Approx(analytic::success_probability(c)).epsilon(1e-9));
    }
  }
  const auto c = MeasurementConfig::natural(0.5, 2.0);
  CHECK(fock::expectation_z(fock::run_protocol(c).motional, 1.0) == doctest::Approx(-1.8157102737920594).epsilon(1e-10));
}

TEST_CASE("physical units profile gives the same state") {
  const auto nat = fock::run_protocol(MeasurementConfig::natural(0.02, 0.04), 64);
  const auto phys = fock::run_protocol(MeasurementConfig::physical(0.02, 0.04), 64);
  CHECK(fock::fidelity(nat.motional, phys.motional) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fock::expectation_z(phys.motional, 9.47) == doctest::Approx(-9.473788168).epsilon(1e-8));
}

TEST_CASE("truncation convergence at gamma = 2.9") {
  for (double t : {0.02, 0.5, 1.5}) {
    const auto c = MeasurementConfig::natural(t, 2.9);
    const double z128 = fock::expectation_z(fock::run_protocol(c, 128).motional, 1.0);
    const double z256 = fock::expectation_z(fock::run_protocol(c, 256).motional, 1.0);
    CHECK(std::abs(z128 - z256) < 1e-9);
  }
}

TEST_CASE("tail guard") {
  CHECK_THROWS_AS(fock::run_protocol(MeasurementConfig::natural(0.5, 2.9), 8), TruncationOverflow);
  CHECK_NOTHROW(fock::run_protocol(MeasurementConfig::natural(0.5, 2.9), 48));
}

TEST_CASE("two separated peaks at gamma = 2.9, theta = 0.02") {
  const auto post = fock::run_protocol(MeasurementConfig::natural(0.02, 2.9), 96);
  auto rho = [&](double z) { return std::norm(fock::position_amplitude(post.motional, z, 1.0)); };
  CHECK(rho(-2.9) > 20.0 * rho(0.0));
  CHECK(rho(2.9) > 20.0 * rho(0.0));
  CHECK(rho(-2.9) == doctest::Approx(rho(2.9)).epsilon(0.1));
}

TEST_CASE("interference sign at z = 0 from the Fock engine") {
  for (auto [theta, rises] : {std::pair{1.5, true}, {0.02, false}}) {
    const auto c = MeasurementConfig::natural(theta, 1.0);
    const auto post = fock::run_protocol(c, 64);
    const auto cat = analytic::make_cat_state(c);
    const double rho0 = std::norm(fock::position_amplitude(post.motional, 0.0, 1.0));
    CHECK(rho0 == doctest::Approx(analytic::probability_density(cat, 0.0)).epsilon(1e-9));
    CHECK((rho0 > analytic::incoherent_density(cat, 0.0)) == rises);
  }
}

TEST_CASE("position amplitudes of Fock states") {
  Eigen::VectorXcd one = Eigen::VectorXcd::Zero(8);
  one(1) = 1.0;
  // phi_1(z) = (2 pi)^{-1/4} z e^{-z^2/4} for dz = 1
  for (double z : {-1.0, 0.3, 2.0}) {
    CHECK(std::real(fock::position_amplitude(one, z, 1.0)) ==
          doctest::Approx(std::pow(2.0 * kPi, -0.25) * z * std::exp(-z * z / 4.0)).epsilon(1e-13));
  }
}
