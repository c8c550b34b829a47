#include "gpe/potential.hpp"

#include "gpe/error.hpp"

#include <algorithm>
#include <cmath>

namespace gpe {

namespace {

double binomial(int n, int k)
{
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Derivatives of a sampled 1-D function along one axis of a tensor grid by
// nonuniform first differences, returned on the same grid (interior-centered,
// one-sided at the ends).
std::vector<double> axis_derivative(const HermiteBasis& basis, const std::vector<double>& values, int axis)
{
  const auto nodes = basis.nodes();
  std::vector<double> out(values.size());
  std::size_t stride = 1;
  for (int j = basis.dim() - 1; j > axis; --j) stride *= static_cast<std::size_t>(basis.n_nodes());
  const int m = basis.n_nodes();
  for (std::size_t f = 0; f < values.size(); ++f) {
    const int i = basis.node_index(f)[axis];
    const int lo = std::max(i - 1, 0), hi = std::min(i + 1, m - 1);
    const std::size_t flo = f - (i - lo) * stride, fhi = f + (hi - i) * stride;
    out[f] = (values[fhi] - values[flo]) / (nodes[hi] - nodes[lo]);
  }
  return out;
}

double sup_abs(const std::vector<double>& v)
{
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double potential_profile(const PotentialSpec& spec, double radius)
{
  const double rho = radius / spec.width;
  switch (spec.kind) {
    case PotentialSpec::Kind::gaussian_bump:
      return spec.amplitude * std::exp(-rho * rho);
    case PotentialSpec::Kind::sech:
      return spec.amplitude / std::cosh(rho);
    case PotentialSpec::Kind::polynomial_decay:
      return spec.amplitude / (1.0 + rho * rho);
    case PotentialSpec::Kind::constant:
      return spec.amplitude;
    case PotentialSpec::Kind::sampled:
      break;
  }
  throw ValidationError("potential.kind", "sampled potentials have no analytic profile");
}

void validate_potential_spec(const PotentialSpec& spec, int dim, std::size_t grid_size)
{
  if (!std::isfinite(spec.amplitude)) throw ValidationError("potential.amplitude", "must be finite");
  if (spec.kind != PotentialSpec::Kind::constant && spec.kind != PotentialSpec::Kind::sampled &&
      !(spec.width > 0.0 && std::isfinite(spec.width)))
    throw ValidationError("potential.width", "must be positive");
  if (!spec.center.empty() && static_cast<int>(spec.center.size()) != dim)
    throw ValidationError("potential.center", "must have one entry per dimension");
  for (double c : spec.center)
    if (!std::isfinite(c)) throw ValidationError("potential.center", "must be finite");
  if (spec.kind == PotentialSpec::Kind::sampled) {
    if (spec.sampled_values.size() != grid_size)
      throw ValidationError("potential.values", "sampled potential needs one value per tensor node");
    for (double v : spec.sampled_values)
      if (!std::isfinite(v)) throw ValidationError("potential.values", "must be finite");
  }
}

Potential realize_potential(const HermiteBasis& basis, const PotentialSpec& spec, int max_order)
{
  if (max_order < 1) throw ValidationError("max_order", "must be at least 1");
  validate_potential_spec(spec, basis.dim(), basis.grid_size());

  Potential pot;
  pot.spec = spec;
  pot.grid_values.resize(basis.grid_size());
  pot.wkinf_norms.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  const auto nodes = basis.nodes();

  if (spec.kind == PotentialSpec::Kind::sampled) {
    pot.grid_values = spec.sampled_values;

    // Iterated axis differences; derivative order j uses the max over axes.
    std::vector<std::vector<double>> current(basis.dim(), pot.grid_values);
    pot.wkinf_norms[0] = sup_abs(pot.grid_values);
    for (int order = 1; order <= max_order; ++order) {
      double sup = 0.0;
      for (int axis = 0; axis < basis.dim(); ++axis) {
        current[axis] = axis_derivative(basis, current[axis], axis);
        sup = std::max(sup, sup_abs(current[axis]));
      }
      if (order == 1) {
        double g = 0.0;
        for (std::size_t f = 0; f < basis.grid_size(); ++f) {
          double g2 = 0.0;
          for (int axis = 0; axis < basis.dim(); ++axis) g2 += current[axis][f] * current[axis][f];
          g = std::max(g, std::sqrt(g2));
        }
        pot.grad_sup = g;
      }
      pot.wkinf_norms[order] = pot.wkinf_norms[order - 1] + sup;
    }
    return pot;
  }

  double center_norm = 0.0;
  for (std::size_t f = 0; f < basis.grid_size(); ++f) {
    const MultiIndex i = basis.node_index(f);
    double r2 = 0.0;
    for (int j = 0; j < basis.dim(); ++j) {
      const double c = spec.center.empty() ? 0.0 : spec.center[j];
      r2 += (nodes[i[j]] - c) * (nodes[i[j]] - c);
    }
    pot.grid_values[f] = potential_profile(spec, std::sqrt(r2));
  }
  for (double c : spec.center) center_norm += c * c;

  if (spec.kind == PotentialSpec::Kind::constant) {
    std::fill(pot.wkinf_norms.begin(), pot.wkinf_norms.end(), std::abs(spec.amplitude));
    pot.grad_sup = 0.0;
    return pot;
  }

  // Central differences of the (even) radial profile on a uniform grid that
  // covers every distance reachable from the center within the node box.
  const double reach = nodes.back() * std::sqrt(double(basis.dim())) + std::sqrt(center_norm) + 4.0 * spec.width;
  const double h = spec.width / 128.0;
  const auto n = static_cast<long>(std::ceil(reach / h));
  std::vector<double> derivative_sup(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (long s = -n; s <= n; ++s) {
    const double r = s * h;
    derivative_sup[0] = std::max(derivative_sup[0], std::abs(potential_profile(spec, std::abs(r))));
    for (int order = 1; order <= max_order; ++order) {
      double acc = 0.0;
      for (int i = 0; i <= order; ++i) {
        const double x = r + (0.5 * order - i) * h;
        acc += ((i % 2) ? -1.0 : 1.0) * binomial(order, i) * potential_profile(spec, std::abs(x));
      }
      derivative_sup[order] = std::max(derivative_sup[order], std::abs(acc) / std::pow(h, order));
    }
  }
  pot.grad_sup = derivative_sup[1];
  pot.wkinf_norms[0] = derivative_sup[0];
  for (int order = 1; order <= max_order; ++order)
    pot.wkinf_norms[order] = pot.wkinf_norms[order - 1] + derivative_sup[order];
  return pot;
}

PotentialSpec::Kind parse_potential_kind(const std::string& name)
{
  if (name == "gaussian_bump") return PotentialSpec::Kind::gaussian_bump;
  if (name == "sech") return PotentialSpec::Kind::sech;
  if (name == "polynomial_decay") return PotentialSpec::Kind::polynomial_decay;
  if (name == "constant") return PotentialSpec::Kind::constant;
  if (name == "sampled") return PotentialSpec::Kind::sampled;
  throw ValidationError("potential.kind", "unknown potential kind '" + name + "'");
}

std::string to_string(PotentialSpec::Kind kind)
{
  switch (kind) {
    case PotentialSpec::Kind::gaussian_bump:
      return "gaussian_bump";
    case PotentialSpec::Kind::sech:
      return "sech";
    case PotentialSpec::Kind::polynomial_decay:
      return "polynomial_decay";
    case PotentialSpec::Kind::constant:
      return "constant";
    case PotentialSpec::Kind::sampled:
      return "sampled";
  }
  return "unknown";
}

}  // namespace gpe
