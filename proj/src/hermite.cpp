#include "gpe/hermite.hpp"

#include "gpe/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gpe {

namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);
const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

// Largest tensor grid we are willing to allocate.
constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

std::size_t ipow(std::size_t base, int e)
{
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Scaled recurrence up to degree n; returns (a_n, a_{n-1}, log_scale) with
// h_n(x) = a_n exp(log_scale). The envelope exp(-x^2/2) lives in log_scale.
struct ScaledPair
{
  double current;
  double previous;
  double log_scale;
};

ScaledPair hermite_scaled(double x, int n)
{
  double prev = 0.0;
  double cur = kPiQuarter;
  double log_scale = -0.5 * x * x;
  for (int k = 0; k < n; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
  }
  return {cur, prev, log_scale};
}

using RowMajorC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Applies `op` (out x in) along `axis` of a row-major tensor whose extent is
// `n_in` on every axis before the call.
std::vector<Complex> apply_axis(const Eigen::MatrixXd& op, const std::vector<Complex>& in,
                                std::array<std::size_t, kMaxDim> shape, int dim, int axis)
{
  std::size_t pre = 1, post = 1;
  for (int j = 0; j < axis; ++j) pre *= shape[j];
  for (int j = axis + 1; j < dim; ++j) post *= shape[j];
  const auto n_in = static_cast<Eigen::Index>(shape[axis]);
  const auto n_out = op.rows();

  std::vector<Complex> out(pre * static_cast<std::size_t>(n_out) * post);
  const auto p = static_cast<Eigen::Index>(post);
  for (std::size_t b = 0; b < pre; ++b) {
    Eigen::Map<const RowMajorC> src(in.data() + b * n_in * post, n_in, p);
    Eigen::Map<RowMajorC> dst(out.data() + b * n_out * post, n_out, p);
    dst.noalias() = op * src;
  }
  return out;
}

std::vector<Complex> apply_all_axes(const Eigen::MatrixXd& op, std::vector<Complex> data,
                                    int dim, std::size_t n_in)
{
  std::array<std::size_t, kMaxDim> shape{};
  for (int j = 0; j < dim; ++j) shape[j] = n_in;
  for (int axis = 0; axis < dim; ++axis) {
    data = apply_axis(op, data, shape, dim, axis);
    shape[axis] = static_cast<std::size_t>(op.rows());
  }
  return data;
}

}  // namespace

void hermite_functions(double x, std::span<double> out)
{
  if (out.empty()) return;
  double prev = 0.0;
  double cur = kPiQuarter;
  double log_scale = -0.5 * x * x;
  out[0] = cur * std::exp(log_scale);
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    const double next = x * std::sqrt(2.0 / (kd + 1)) * cur - std::sqrt(kd / (kd + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
    out[k + 1] = cur * std::exp(log_scale);
  }
}

GaussHermiteRule gauss_hermite(int n_points)
{
  if (n_points < 1) throw ValidationError("n_points", "must be positive");
  const int m = n_points;

  // Golub-Welsch: eigenvalues of the symmetric Jacobi matrix.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd guesses = solver.eigenvalues();

  GaussHermiteRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  rule.phys_weights.resize(m);

  const double root_scale = std::sqrt(2.0 * m);
  const int half = m / 2;
  for (int j = 0; j < half; ++j) {
    // Positive roots, polished by Newton on p_m / p_m' = a_m / (sqrt(2m) a_{m-1}).
    double x = std::abs(guesses[m - 1 - j]);
    for (int it = 0; it < 100; ++it) {
      const ScaledPair h = hermite_scaled(x, m);
      const double dx = h.current / (root_scale * h.previous);
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[m - 1 - j] = x;
    rule.nodes[j] = -x;
  }
  if (m % 2 == 1) rule.nodes[half] = 0.0;

  for (int i = 0; i < m; ++i) {
    const double x = rule.nodes[i];
    // W_i = 1 / (m h_{m-1}(x_i)^2), evaluated in log space.
    const ScaledPair h = hermite_scaled(x, m - 1);
    const double log_w = -std::log(double(m)) - 2.0 * (std::log(std::abs(h.current)) + h.log_scale);
    rule.phys_weights[i] = std::exp(log_w);
    rule.weights[i] = std::exp(log_w - x * x);
  }
  // Exact mirror symmetry of the weights.
  for (int j = 0; j < half; ++j) {
    const double w = 0.5 * (rule.phys_weights[j] + rule.phys_weights[m - 1 - j]);
    rule.phys_weights[j] = rule.phys_weights[m - 1 - j] = w;
    const double q = 0.5 * (rule.weights[j] + rule.weights[m - 1 - j]);
    rule.weights[j] = rule.weights[m - 1 - j] = q;
  }
  return rule;
}

HermiteBasis::HermiteBasis(int dim, int n_modes, int quad_factor)
    : dim_(dim),
      n_modes_(n_modes),
      n_nodes_(n_modes * quad_factor),
      spectral_size_(ipow(static_cast<std::size_t>(n_modes), dim)),
      grid_size_(ipow(static_cast<std::size_t>(n_modes * quad_factor), dim)),
      rule_(gauss_hermite(n_modes * quad_factor))
{
  table_.resize(n_modes_, n_nodes_);
  std::vector<double> column(n_modes_);
  for (int i = 0; i < n_nodes_; ++i) {
    hermite_functions(rule_.nodes[i], column);
    for (int k = 0; k < n_modes_; ++k) table_(k, i) = column[k];
  }
  analysis_ = table_ * Eigen::Map<const Eigen::VectorXd>(rule_.phys_weights.data(), n_nodes_).asDiagonal();
  synthesis_ = table_.transpose();

  eigenvalues_.resize(spectral_size_);
  for (std::size_t f = 0; f < spectral_size_; ++f) {
    const MultiIndex k = mode_index(f);
    double lambda = 0.0;
    for (int j = 0; j < dim_; ++j) lambda += 2.0 * k[j] + 1.0;
    eigenvalues_[f] = lambda;
  }

  grid_weights_.resize(grid_size_);
  grid_radius_sq_.resize(grid_size_);
  for (std::size_t f = 0; f < grid_size_; ++f) {
    const MultiIndex i = node_index(f);
    double w = 1.0, r2 = 0.0;
    for (int j = 0; j < dim_; ++j) {
      w *= rule_.phys_weights[i[j]];
      r2 += rule_.nodes[i[j]] * rule_.nodes[i[j]];
    }
    grid_weights_[f] = w;
    grid_radius_sq_[f] = r2;
  }
}

MultiIndex HermiteBasis::mode_index(std::size_t flat) const
{
  MultiIndex k{};
  for (int j = dim_ - 1; j >= 0; --j) {
    k[j] = static_cast<int>(flat % n_modes_);
    flat /= n_modes_;
  }
  return k;
}

std::size_t HermiteBasis::mode_flat(const MultiIndex& k) const
{
  std::size_t flat = 0;
  for (int j = 0; j < dim_; ++j) flat = flat * n_modes_ + static_cast<std::size_t>(k[j]);
  return flat;
}

MultiIndex HermiteBasis::node_index(std::size_t flat) const
{
  MultiIndex i{};
  for (int j = dim_ - 1; j >= 0; --j) {
    i[j] = static_cast<int>(flat % n_nodes_);
    flat /= n_nodes_;
  }
  return i;
}

void check_basis_args(int dim, int n_modes, int quad_factor)
{
  if (dim < 1 || dim > kMaxDim) throw ValidationError("dim", "must be 1, 2 or 3, got " + std::to_string(dim));
  if (n_modes < 2 || n_modes > kMaxModes)
    throw ValidationError("n_modes", "must lie in [2, 1024], got " + std::to_string(n_modes));
  if (quad_factor < 2) throw ValidationError("quad_factor", "must be at least 2");
  if (static_cast<long long>(n_modes) * quad_factor > kMaxQuadraturePoints)
    throw ValidationError("n_modes", "quadrature size quad_factor*n_modes exceeds 8192");
  if (ipow(static_cast<std::size_t>(n_modes * quad_factor), dim) > kMaxGridPoints)
    throw ValidationError("n_modes", "tensor grid too large for dim " + std::to_string(dim));
}

HermiteBasis build_basis(int dim, int n_modes, int quad_factor)
{
  check_basis_args(dim, n_modes, quad_factor);
  return HermiteBasis(dim, n_modes, quad_factor);
}

SpectralField SpectralField::zeros(const HermiteBasis& basis)
{
  return SpectralField{basis.dim(), basis.n_modes(), std::vector<Complex>(basis.spectral_size())};
}

SpectralField SpectralField::eigenstate(const HermiteBasis& basis, const MultiIndex& k)
{
  for (int j = 0; j < basis.dim(); ++j)
    if (k[j] < 0 || k[j] >= basis.n_modes()) throw ValidationError("k", "mode index outside truncation");
  SpectralField f = zeros(basis);
  f.coeffs[basis.mode_flat(k)] = 1.0;
  return f;
}

GridField to_grid(const HermiteBasis& basis, const SpectralField& f)
{
  if (f.dim != basis.dim() || f.n_modes != basis.n_modes() || f.coeffs.size() != basis.spectral_size())
    throw ValidationError("field", "spectral field does not match basis dimension/truncation");
  return GridField{basis.dim(), basis.n_nodes(),
                   apply_all_axes(basis.synthesis(), f.coeffs, basis.dim(), basis.n_modes())};
}

SpectralField to_spectral(const HermiteBasis& basis, const GridField& g)
{
  if (g.dim != basis.dim() || g.n_nodes != basis.n_nodes() || g.values.size() != basis.grid_size())
    throw ValidationError("field", "grid field node count does not match basis");
  return SpectralField{basis.dim(), basis.n_modes(),
                       apply_all_axes(basis.analysis(), g.values, basis.dim(), basis.n_nodes())};
}

GridField synthesize_at(const HermiteBasis& basis, const SpectralField& f, std::span<const double> points)
{
  if (f.dim != basis.dim() || f.n_modes != basis.n_modes())
    throw ValidationError("field", "spectral field does not match basis dimension/truncation");
  Eigen::MatrixXd op(static_cast<Eigen::Index>(points.size()), basis.n_modes());
  std::vector<double> row(basis.n_modes());
  for (std::size_t i = 0; i < points.size(); ++i) {
    hermite_functions(points[i], row);
    for (int k = 0; k < basis.n_modes(); ++k) op(static_cast<Eigen::Index>(i), k) = row[k];
  }
  return GridField{basis.dim(), static_cast<int>(points.size()),
                   apply_all_axes(op, f.coeffs, basis.dim(), basis.n_modes())};
}

double l2_norm(const SpectralField& f)
{
  double acc = 0.0;
  for (const Complex& c : f.coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

namespace {
void require_compatible(const SpectralField& a, const SpectralField& b)
{
  if (!a.compatible(b) || a.coeffs.size() != b.coeffs.size())
    throw ValidationError("field", "spectral fields have different shapes");
}
}  // namespace

SpectralField operator+(const SpectralField& a, const SpectralField& b)
{
  require_compatible(a, b);
  SpectralField r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b)
{
  require_compatible(a, b);
  SpectralField r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
  return r;
}

SpectralField operator*(Complex s, const SpectralField& a)
{
  SpectralField r = a;
  for (Complex& c : r.coeffs) c *= s;
  return r;
}

}  // namespace gpe
