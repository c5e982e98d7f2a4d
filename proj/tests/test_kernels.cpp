#include <cmath>
#include <numbers>
#include <vector>

#include <omp.h>

#include "doctest.h"
#include "weakstrong/kernels.hpp"

using namespace weakstrong;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
  Threads threads(4);
  const kernels::CatWignerTerms terms{0.3, 0.6, -0.4, 2.9};
  const auto u = linspace(-8, 8, 97);
  const auto v = linspace(-6, 6, 61);

  Eigen::MatrixXd ws(97, 61), wp(97, 61);
  kernels::wigner_grid_serial(terms, u, v, ws);
  kernels::wigner_grid_parallel(terms, u, v, wp);
  CHECK((ws.array() == wp.array()).all());

  CHECK((kernels::row_trapezoid_serial(ws, 0.2).array() == kernels::row_trapezoid_parallel(ws, 0.2).array()).all());

  const auto k = linspace(0, 5, 41);
  std::vector<Basis> basis(41, Basis::sigma_z);
  for (int i = 20; i < 41; ++i) basis[i] = Basis::sigma_y;
  const auto z = linspace(-7, 7, 23);
  CHECK((kernels::characteristic_design_serial(k, basis, z, 0.6).array() ==
         kernels::characteristic_design_parallel(k, basis, z, 0.6).array())
            .all());

  std::vector<double> c(41), s(41);
  for (int i = 0; i < 41; ++i) {
    c[i] = std::cos(0.7 * k[i]) * std::exp(-0.5 * k[i] * k[i]);
    s[i] = std::sin(0.7 * k[i]) * std::exp(-0.5 * k[i] * k[i]);
  }
  CHECK((kernels::fourier_density_serial(k, c, s, z).array() ==
         kernels::fourier_density_parallel(k, c, s, z).array())
            .all());
}

TEST_CASE("cat wigner reduces to the vacuum for a single centred packet") {
  const kernels::CatWignerTerms vacuum{1.0, 0.0, 0.0, 0.0};
  CHECK(kernels::cat_wigner(vacuum, 0.0, 0.0) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK(kernels::cat_wigner(vacuum, 1.0, -2.0) ==
        doctest::Approx(std::exp(-2.5) / (2.0 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("row trapezoid integrates a Gaussian") {
  const auto v = linspace(-10, 10, 401);
  Eigen::MatrixXd m(3, 401);
  for (int j = 0; j < 401; ++j) {
    m(0, j) = std::exp(-0.5 * v[j] * v[j]);
    m(1, j) = 2.0 * m(0, j);
    m(2, j) = 1.0;
  }
  const auto r = kernels::row_trapezoid_parallel(m, 0.05);
  CHECK(r(0) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(r(1) == doctest::Approx(2.0 * std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(r(2) == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("design matrix entries") {
  const std::vector<double> k{0.0, 1.5};
  const std::vector<Basis> basis{Basis::sigma_z, Basis::sigma_y};
  const std::vector<double> z{-1.0, 0.5};
  const auto a = kernels::characteristic_design_serial(k, basis, z, 0.25);
  CHECK(a(0, 0) == doctest::Approx(0.25));
  CHECK(a(1, 0) == doctest::Approx(std::sin(-1.5) * 0.25));
  CHECK(a(1, 1) == doctest::Approx(std::sin(0.75) * 0.25));
}

TEST_CASE("fourier inversion of a displaced Gaussian characteristic function") {
  // <e^{ikz}> = e^{ik mu - k^2/2}  <->  density N(mu, 1)
  const double mu = -1.3;
  const auto k = linspace(0, 9, 901);
  std::vector<double> c(k.size()), s(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    c[i] = std::cos(mu * k[i]) * std::exp(-0.5 * k[i] * k[i]);
    s[i] = std::sin(mu * k[i]) * std::exp(-0.5 * k[i] * k[i]);
  }
  const auto z = linspace(-6, 4, 51);
  const auto rho = kernels::fourier_density_parallel(k, c, s, z);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double exact = std::exp(-0.5 * (z[i] - mu) * (z[i] - mu)) / std::sqrt(2.0 * std::numbers::pi);
    CHECK(std::abs(rho(i) - exact) < 1e-5);
  }
}

TEST_CASE("fourier inputs are checked") {
  const std::vector<double> k{0.0, 1.0};
  const std::vector<double> c{1.0};
  const std::vector<double> z{0.0};
  CHECK_THROWS(kernels::fourier_density_serial(k, c, c, z));
}
