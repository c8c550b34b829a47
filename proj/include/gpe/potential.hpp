#pragma once

#include "gpe/hermite.hpp"

#include <string>
#include <vector>

namespace gpe {

/// Description of the real control potential K(x). Analytic kinds are radial
/// about `center`: with rho = |x - center| / width,
///   gaussian_bump     A exp(-rho^2)
///   sech              A sech(rho)
///   polynomial_decay  A / (1 + rho^2)
///   constant          A
/// `sampled` takes K directly at the tensor quadrature nodes.
struct PotentialSpec
{
  enum class Kind
  {
    gaussian_bump,
    sech,
    polynomial_decay,
    constant,
    sampled,
  };

  Kind kind = Kind::gaussian_bump;
  double amplitude = 1.0;
  double width = 1.0;
  std::vector<double> center;         ///< empty means the origin
  std::vector<double> sampled_values; ///< only for Kind::sampled
};

/// K realized on a basis, with the norms the estimates need.
struct Potential
{
  PotentialSpec spec;
  std::vector<double> grid_values;  ///< K(x_i) on the tensor nodes
  double grad_sup = 0.0;            ///< estimate of ||grad K||_inf
  std::vector<double> wkinf_norms;  ///< wkinf_norms[m] estimates ||K||_{W^{m,inf}}
};

/// Radial profile f(rho * width) of an analytic kind; throws for `sampled`.
double potential_profile(const PotentialSpec& spec, double radius);

/// Checks a spec against a basis shape without evaluating anything.
void validate_potential_spec(const PotentialSpec& spec, int dim, std::size_t grid_size);

/// Evaluates K on the basis nodes and estimates grad_sup and the W^{m,inf}
/// norms (m <= max_order) by finite differences on an oversampled grid.
/// W^{m,inf} is taken as sum_{j <= m} sup |d^j f / dr^j| of the radial profile.
Potential realize_potential(const HermiteBasis& basis, const PotentialSpec& spec, int max_order = 4);

PotentialSpec::Kind parse_potential_kind(const std::string& name);
std::string to_string(PotentialSpec::Kind kind);

}  // namespace gpe
