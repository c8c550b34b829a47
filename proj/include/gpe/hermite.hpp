#pragma once

// Hermite eigenbasis of the harmonic oscillator H = -Laplacian + |x|^2 and the
// transforms between spectral coefficients and values at Gauss-Hermite nodes.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gpe {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 3;
inline constexpr int kMaxModes = 1024;
inline constexpr int kMaxQuadraturePoints = 8192;

/// Multi-index over a tensor rectangle; entries past `dim` are zero.
using MultiIndex = std::array<int, kMaxDim>;

/// Evaluates the L2-normalized Hermite functions h_0..h_{out.size()-1} at x.
/// The Gaussian envelope is carried through the recurrence with a running
/// log-scale, so no intermediate overflows even for thousands of modes.
void hermite_functions(double x, std::span<double> out);

struct GaussHermiteRule
{
  std::vector<double> nodes;         ///< ascending, symmetric about 0
  std::vector<double> weights;       ///< w_i for weight exp(-x^2)
  std::vector<double> phys_weights;  ///< W_i = w_i exp(x_i^2)
};

/// n-point Gauss-Hermite rule: Jacobi-matrix eigenvalues as starting guesses,
/// Newton polish on the scaled recurrence.
GaussHermiteRule gauss_hermite(int n_points);

/// Tensor Hermite basis truncated to k in {0..N-1}^d, sampled on the tensor
/// product of an M-point Gauss-Hermite rule. Immutable after construction.
class HermiteBasis
{
 public:
  HermiteBasis(int dim, int n_modes, int quad_factor);

  int dim() const noexcept { return dim_; }
  int n_modes() const noexcept { return n_modes_; }
  int n_nodes() const noexcept { return n_nodes_; }
  int quad_factor() const noexcept { return n_nodes_ / n_modes_; }

  std::size_t spectral_size() const noexcept { return spectral_size_; }
  std::size_t grid_size() const noexcept { return grid_size_; }

  std::span<const double> nodes() const noexcept { return rule_.nodes; }
  std::span<const double> quad_weights() const noexcept { return rule_.weights; }
  std::span<const double> phys_weights() const noexcept { return rule_.phys_weights; }

  /// h_k(x_i), N x M.
  const Eigen::MatrixXd& table() const noexcept { return table_; }
  /// h_k(x_i) W_i, N x M; applies the quadrature projection along one axis.
  const Eigen::MatrixXd& analysis() const noexcept { return analysis_; }
  /// Transpose of table(), M x N; synthesis along one axis.
  const Eigen::MatrixXd& synthesis() const noexcept { return synthesis_; }

  /// lambda_k = sum_j (2 k_j + 1), one entry per flattened multi-index.
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  /// Product weights W_{i_1} ... W_{i_d} for every tensor node.
  std::span<const double> grid_weights() const noexcept { return grid_weights_; }
  /// Squared distance |x|^2 of every tensor node from the origin.
  std::span<const double> grid_radius_sq() const noexcept { return grid_radius_sq_; }

  MultiIndex mode_index(std::size_t flat) const;
  std::size_t mode_flat(const MultiIndex& k) const;
  MultiIndex node_index(std::size_t flat) const;

 private:
  int dim_;
  int n_modes_;
  int n_nodes_;
  std::size_t spectral_size_;
  std::size_t grid_size_;
  GaussHermiteRule rule_;
  Eigen::MatrixXd table_;
  Eigen::MatrixXd analysis_;
  Eigen::MatrixXd synthesis_;
  std::vector<double> eigenvalues_;
  std::vector<double> grid_weights_;
  std::vector<double> grid_radius_sq_;
};

/// Validating factory; throws ValidationError on out-of-range arguments.
HermiteBasis build_basis(int dim, int n_modes, int quad_factor = 2);

/// The argument checks of build_basis, without building anything.
void check_basis_args(int dim, int n_modes, int quad_factor);

/// Coefficients of psi in the eigenbasis of H, flattened row-major over k.
struct SpectralField
{
  int dim = 1;
  int n_modes = 0;
  std::vector<Complex> coeffs;

  static SpectralField zeros(const HermiteBasis& basis);
  /// The single eigenfunction h_k.
  static SpectralField eigenstate(const HermiteBasis& basis, const MultiIndex& k);

  bool compatible(const SpectralField& other) const noexcept
  {
    return dim == other.dim && n_modes == other.n_modes;
  }
};

/// Values of psi on the tensor quadrature nodes, flattened row-major.
struct GridField
{
  int dim = 1;
  int n_nodes = 0;
  std::vector<Complex> values;
};

GridField to_grid(const HermiteBasis& basis, const SpectralField& f);
SpectralField to_spectral(const HermiteBasis& basis, const GridField& g);

/// Synthesizes f on the tensor product of arbitrary per-axis sample points.
GridField synthesize_at(const HermiteBasis& basis, const SpectralField& f,
                        std::span<const double> points);

/// l2 norm of the coefficients; equals the L2 norm of the function.
double l2_norm(const SpectralField& f);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(Complex s, const SpectralField& a);

}  // namespace gpe
