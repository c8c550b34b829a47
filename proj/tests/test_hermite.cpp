#include "gpe/error.hpp"
#include "gpe/hermite.hpp"
#include "gpe/spectral_ops.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gpe;

namespace {

// Independent evaluation through the physicists' polynomials of <cmath>.
double hermite_function_oracle(int k, double x)
{
  double norm = std::sqrt(std::sqrt(std::numbers::pi));
  for (int j = 1; j <= k; ++j) norm *= std::sqrt(2.0 * j);
  return std::hermite(static_cast<unsigned>(k), x) * std::exp(-0.5 * x * x) / norm;
}

}  // namespace

TEST_CASE("gauss_hermite matches reference rules")
{
  // numpy.polynomial.hermite.hermgauss
  const GaussHermiteRule r8 = gauss_hermite(8);
  CHECK(r8.nodes.back() == doctest::Approx(2.930637420257244).epsilon(1e-14));
  CHECK(r8.weights.back() == doctest::Approx(0.00019960407221136783).epsilon(1e-12));
  CHECK(r8.nodes[4] == doctest::Approx(0.3811869902073221).epsilon(1e-14));
  CHECK(r8.weights[4] == doctest::Approx(0.6611470125582415).epsilon(1e-12));

  const GaussHermiteRule r64 = gauss_hermite(64);
  CHECK(r64.nodes.back() == doctest::Approx(10.526123167960547).epsilon(1e-13));
  CHECK(r64.weights.back() == doctest::Approx(5.535706535856702e-49).epsilon(1e-10));

  double total = 0.0;
  for (double w : r64.weights) total += w;
  CHECK(total == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("nodes are mirror symmetric")
{
  for (int m : {7, 16, 128, 2048}) {
    const GaussHermiteRule r = gauss_hermite(m);
    for (int i = 0; i < m; ++i) CHECK(std::abs(r.nodes[i] + r.nodes[m - 1 - i]) <= 1e-13);
  }
}

TEST_CASE("hermite_functions agree with the polynomial formula")
{
  std::vector<double> h(25);
  for (double x : {-3.7, -0.4, 0.0, 1.3, 5.2}) {
    hermite_functions(x, h);
    for (int k = 0; k < 25; ++k) CHECK(h[k] == doctest::Approx(hermite_function_oracle(k, x)).epsilon(1e-11).scale(1e-14));
  }
}

TEST_CASE("hermite table stays finite for the largest truncation")
{
  const HermiteBasis basis = build_basis(1, 1024, 2);
  CHECK(basis.table().allFinite());
  CHECK(basis.table().cwiseAbs().maxCoeff() < 1.0);
  // spot-check orthonormality at the top of the spectrum
  const auto w = basis.phys_weights();
  for (auto [j, k] : {std::pair{1023, 1023}, std::pair{1000, 1023}, std::pair{511, 512}}) {
    double acc = 0.0;
    for (int i = 0; i < basis.n_nodes(); ++i) acc += w[i] * basis.table()(j, i) * basis.table()(k, i);
    CHECK(std::abs(acc - (j == k ? 1.0 : 0.0)) <= 1e-12);
  }
}

TEST_CASE("build_basis examples")
{
  const HermiteBasis b4 = build_basis(1, 4, 2);
  std::vector<double> h(1);
  hermite_functions(0.0, h);
  CHECK(h[0] == doctest::Approx(0.7511255444649425).epsilon(1e-15));

  const HermiteBasis b8 = build_basis(1, 8, 2);
  const auto w = b8.phys_weights();
  double g33 = 0.0, g25 = 0.0;
  for (int i = 0; i < b8.n_nodes(); ++i) {
    g33 += w[i] * b8.table()(3, i) * b8.table()(3, i);
    g25 += w[i] * b8.table()(2, i) * b8.table()(5, i);
  }
  CHECK(std::abs(g33 - 1.0) <= 1e-12);
  CHECK(std::abs(g25) <= 1e-12);

  for (int n : {2, 16, 64, 256}) {
    const HermiteBasis b = build_basis(1, n, 2);
    const Eigen::MatrixXd gram = b.analysis() * b.table().transpose();
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("build_basis rejects bad arguments")
{
  CHECK_THROWS_AS(build_basis(0, 8, 2), ValidationError);
  CHECK_THROWS_AS(build_basis(4, 8, 2), ValidationError);
  CHECK_THROWS_AS(build_basis(1, 1, 2), ValidationError);
  CHECK_THROWS_AS(build_basis(1, 1025, 2), ValidationError);
  CHECK_THROWS_AS(build_basis(1, 8, 1), ValidationError);
  CHECK_THROWS_AS(build_basis(1, 1024, 9), ValidationError);
  CHECK_NOTHROW(build_basis(1, 1024, 8));
}

TEST_CASE("to_grid of the ground state is the Gaussian")
{
  for (int d : {1, 2, 3}) {
    const HermiteBasis basis = build_basis(d, 6, 2);
    const GridField g = to_grid(basis, SpectralField::eigenstate(basis, {0, 0, 0}));
    const auto r2 = basis.grid_radius_sq();
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      const double expected = std::pow(std::numbers::pi, -0.25 * d) * std::exp(-0.5 * r2[i]);
      CHECK(std::abs(g.values[i] - expected) <= 1e-14);
    }
  }
  const HermiteBasis basis = build_basis(2, 5, 2);
  for (const Complex& v : to_grid(basis, SpectralField::zeros(basis)).values) CHECK(v == Complex{});
}

TEST_CASE("to_grid matches brute-force summation")
{
  const HermiteBasis basis = build_basis(2, 10, 2);
  std::mt19937_64 rng(11);
  SpectralField f = SpectralField::zeros(basis);
  std::uniform_int_distribution<std::size_t> pick(0, f.coeffs.size() - 1);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 6; ++i) f.coeffs[pick(rng)] = Complex(gauss(rng), gauss(rng));

  const GridField g = to_grid(basis, f);
  const auto nodes = basis.nodes();
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const MultiIndex node = basis.node_index(i);
    Complex naive{};
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
      if (f.coeffs[k] == Complex{}) continue;
      const MultiIndex mk = basis.mode_index(k);
      naive += f.coeffs[k] * hermite_function_oracle(mk[0], nodes[node[0]]) *
               hermite_function_oracle(mk[1], nodes[node[1]]);
    }
    CHECK(std::abs(g.values[i] - naive) <= 1e-13);
  }
}

TEST_CASE("to_spectral examples")
{
  const HermiteBasis basis = build_basis(1, 16, 2);
  const auto nodes = basis.nodes();

  GridField h1{1, basis.n_nodes(), {}};
  GridField xg{1, basis.n_nodes(), {}};
  for (double x : nodes) {
    h1.values.emplace_back(hermite_function_oracle(1, x));
    xg.values.emplace_back(x * std::exp(-0.5 * x * x) * std::pow(std::numbers::pi, -0.25));
  }
  const SpectralField c1 = to_spectral(basis, h1);
  for (int k = 0; k < basis.n_modes(); ++k) CHECK(std::abs(c1.coeffs[k] - (k == 1 ? 1.0 : 0.0)) <= 1e-12);
  const SpectralField cx = to_spectral(basis, xg);
  CHECK(std::abs(cx.coeffs[1] - 1.0 / std::numbers::sqrt2) <= 1e-10);

  CHECK_THROWS_AS(to_spectral(basis, GridField{1, 5, std::vector<Complex>(5)}), ValidationError);
  const HermiteBasis other = build_basis(1, 8, 2);
  CHECK_THROWS_AS(to_grid(basis, SpectralField::zeros(other)), ValidationError);
}

TEST_CASE("round trip, Parseval and linearity on random fields")
{
  std::mt19937_64 rng(2024);
  for (auto [d, n] : {std::pair{1, 8}, std::pair{1, 32}, std::pair{1, 128}, std::pair{2, 8}, std::pair{3, 6}}) {
    const HermiteBasis basis = build_basis(d, n, 2);
    for (int trial = 0; trial < 10; ++trial) {
      const SpectralField f = test::random_field(basis, rng);
      const SpectralField g = test::random_field(basis, rng);
      const GridField grid = to_grid(basis, f);
      CHECK(test::max_abs_diff(to_spectral(basis, grid), f) <= 1e-12);

      const double coeff_norm = l2_norm(f);
      const double quad_norm = lp_norm(basis, grid, 2.0);
      CHECK(std::abs(coeff_norm - quad_norm) <= 1e-11 * coeff_norm);

      const Complex a(0.3, -1.2), b(-2.0, 0.5);
      const GridField lhs = to_grid(basis, a * f + b * g);
      const GridField gg = to_grid(basis, g);
      double err = 0.0;
      for (std::size_t i = 0; i < lhs.values.size(); ++i)
        err = std::max(err, std::abs(lhs.values[i] - (a * grid.values[i] + b * gg.values[i])));
      CHECK(err <= 1e-12);
    }
  }
}

TEST_CASE("even coefficient patterns give even grid functions")
{
  std::mt19937_64 rng(5);
  const HermiteBasis basis = build_basis(1, 24, 2);
  SpectralField f = test::random_field(basis, rng);
  for (int k = 1; k < basis.n_modes(); k += 2) f.coeffs[k] = 0.0;
  const GridField g = to_grid(basis, f);
  const int m = basis.n_nodes();
  for (int i = 0; i < m; ++i) CHECK(std::abs(g.values[i] - g.values[m - 1 - i]) <= 1e-12);
}
