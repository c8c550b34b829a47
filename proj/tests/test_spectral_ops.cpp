#include "gpe/error.hpp"
#include "gpe/spectral_ops.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gpe;

TEST_CASE("eigenvalues are 2|k| + d")
{
  const HermiteBasis b1 = build_basis(1, 10, 2);
  for (int k = 0; k < 10; ++k) CHECK(b1.eigenvalues()[k] == 2.0 * k + 1.0);
  const HermiteBasis b3 = build_basis(3, 4, 2);
  for (std::size_t f = 0; f < b3.spectral_size(); ++f) {
    const MultiIndex k = b3.mode_index(f);
    CHECK(b3.eigenvalues()[f] == 2.0 * (k[0] + k[1] + k[2]) + 3.0);
    CHECK(b3.eigenvalues()[f] >= 3.0);
  }
}

TEST_CASE("apply_fractional_h")
{
  const HermiteBasis basis = build_basis(1, 8, 2);
  const SpectralField h3 = SpectralField::eigenstate(basis, {3, 0, 0});
  CHECK(apply_fractional_h(basis, h3, 1.0).coeffs[3] == Complex(7.0));

  std::mt19937_64 rng(3);
  const SpectralField f = test::random_field(basis, rng);
  CHECK(test::max_abs_diff(apply_fractional_h(basis, f, 0.0), f) == 0.0);
  const SpectralField twice = apply_fractional_h(basis, apply_fractional_h(basis, f, 0.5), 0.5);
  const SpectralField once = apply_fractional_h(basis, f, 1.0);
  CHECK(test::max_abs_diff(twice, once) <= 1e-13 * l2_norm(once));
  CHECK(test::max_abs_diff(apply_fractional_h(basis, apply_fractional_h(basis, f, 1.3), -1.3), f) <= 1e-13);
}

TEST_CASE("sobolev_norm examples and monotonicity")
{
  const HermiteBasis basis = build_basis(1, 8, 2);
  CHECK(sobolev_norm(basis, SpectralField::eigenstate(basis, {3, 0, 0}), 2.0) == doctest::Approx(7.0).epsilon(1e-15));
  for (double s : {0.0, 0.7, 3.0}) CHECK(sobolev_norm(basis, SpectralField::eigenstate(basis, {0, 0, 0}), s) == 1.0);
  SpectralField f = SpectralField::zeros(basis);
  f.coeffs[0] = f.coeffs[1] = 1.0;
  CHECK(sobolev_norm(basis, f, 1.0) == doctest::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralField g = test::random_field(basis, rng);
    double prev = 0.0;
    for (double s : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double v = sobolev_norm(basis, g, s);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("lp_norm of the ground state")
{
  const HermiteBasis basis = build_basis(1, 32, 2);
  const SpectralField h0 = SpectralField::eigenstate(basis, {0, 0, 0});
  const GridField g = to_grid(basis, h0);
  CHECK(lp_norm(basis, g, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  // quadrature oracle: (2 pi)^{-1/8}
  CHECK(lp_norm(basis, g, 4.0) == doctest::Approx(0.79474447324033950).epsilon(1e-12));
  const double peak = std::pow(std::numbers::pi, -0.25);
  CHECK(lp_norm(basis, g, kInfinity) <= peak);
  CHECK(std::abs(linf_norm(basis, h0, LinfMode::refined) - peak) <= 1e-3);
  CHECK_THROWS_AS(lp_norm(basis, g, 0.5), ValidationError);
}

TEST_CASE("wsp_norm reduces to lp and sobolev norms")
{
  const HermiteBasis basis = build_basis(1, 16, 2);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const SpectralField f = test::random_field(basis, rng);
    const double s = 0.5 * (trial % 5);
    CHECK(std::abs(wsp_norm(basis, f, s, 2.0) - sobolev_norm(basis, f, s)) <= 1e-11 * sobolev_norm(basis, f, s));
    CHECK(wsp_norm(basis, f, 0.0, 3.0) == lp_norm(basis, to_grid(basis, f), 3.0));
  }
  CHECK(wsp_norm(basis, SpectralField::eigenstate(basis, {1, 0, 0}), 2.0, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("free_propagate phases, group law, periodicity")
{
  const HermiteBasis basis = build_basis(1, 12, 2);
  const SpectralField h0 = SpectralField::eigenstate(basis, {0, 0, 0});
  CHECK(std::abs(free_propagate(basis, h0, std::numbers::pi).coeffs[0] - Complex(-1.0)) <= 1e-15);

  std::mt19937_64 rng(99);
  const SpectralField f = test::random_field(basis, rng);
  CHECK(test::max_abs_diff(free_propagate(basis, f, 2.0 * std::numbers::pi), f) == 0.0);

  for (auto [t1, t2] : {std::pair{0.3, 1.1}, std::pair{-2.0, 0.7}, std::pair{5.0, 9.5}}) {
    const SpectralField a = free_propagate(basis, free_propagate(basis, f, t1), t2);
    const SpectralField b = free_propagate(basis, f, t1 + t2);
    CHECK(test::max_abs_diff(a, b) <= 1e-13 * l2_norm(f));
    for (double s : {0.0, 1.0, 2.0})
      CHECK(std::abs(sobolev_norm(basis, a, s) - sobolev_norm(basis, f, s)) <= 1e-12 * sobolev_norm(basis, f, s));
  }
  const SpectralField g = free_propagate(basis, f, 0.77);
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) CHECK(std::abs(g.coeffs[k]) == doctest::Approx(std::abs(f.coeffs[k])).epsilon(1e-15));
}

TEST_CASE("kato_functional examples")
{
  const HermiteBasis basis = build_basis(1, 32, 2);
  const SpectralField h0 = SpectralField::eigenstate(basis, {0, 0, 0});
  // (4 pi int <x>^{-1} h0^2 dx)^{1/2} from an adaptive quadrature oracle
  const double oracle = 3.2871954916105654;
  CHECK(kato_functional(basis, h0, 0.0, -2 * std::numbers::pi, 2 * std::numbers::pi) ==
        doctest::Approx(oracle).epsilon(1e-9));
  CHECK(kato_functional(basis, SpectralField::zeros(basis), 0.3, -1.0, 1.0) == 0.0);

  CHECK_THROWS_AS(kato_functional(basis, h0, 0.5, -1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(kato_functional(basis, h0, 0.7, -1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(kato_functional(basis, h0, 0.2, -1.0, 1.0, 8), ValidationError);

  // Superpositions use the dense path in 2-D; compare against sparse accumulation.
  const HermiteBasis b2 = build_basis(2, 6, 2);
  std::mt19937_64 rng(4);
  const SpectralField f = test::random_field(b2, rng);
  SpectralField single = SpectralField::eigenstate(b2, {2, 1, 0});
  const double dense = kato_functional(b2, f, 0.2, 0.0, 1.0, 32);
  CHECK(std::isfinite(dense));
  CHECK(dense > 0.0);
  CHECK(kato_functional(b2, single, 0.0, 0.0, 1.0, 32) > 0.0);
}

TEST_CASE("check_admissible")
{
  CHECK(check_admissible(4.0, kInfinity, 1));
  CHECK(check_admissible(2.0, 6.0, 3));
  CHECK_FALSE(check_admissible(2.0, kInfinity, 2));
  CHECK(check_admissible(kInfinity, 2.0, 2));
  CHECK(check_admissible(4.0 / (1.0 + 2 * 0.25), 3.0 / (1.0 - 0.25), 3));
  CHECK_FALSE(check_admissible(3.0, 3.0, 1));
  CHECK_FALSE(check_admissible(1.5, 6.0, 3));
}
