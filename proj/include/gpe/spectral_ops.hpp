#pragma once

// Functional calculus of H in its eigenbasis: fractional powers, harmonic
// Sobolev and Lebesgue norms, the free propagator, the Kato smoothing
// functional and the Strichartz admissibility relation.

#include "gpe/hermite.hpp"

#include <limits>

namespace gpe {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// How L^infinity is approximated.
enum class LinfMode
{
  nodes,    ///< max over quadrature nodes
  refined,  ///< also synthesize on a 4x-oversampled uniform grid (still a lower bound)
};

/// c_k -> lambda_k^s c_k. Negative exponents are allowed.
SpectralField apply_fractional_h(const HermiteBasis& basis, const SpectralField& f, double s);

/// (sum_k lambda_k^s |c_k|^2)^(1/2); s = 0 gives the L2 norm.
double sobolev_norm(const HermiteBasis& basis, const SpectralField& f, double s);

/// Quadrature L^p norm of grid values; p = infinity is the max over nodes.
double lp_norm(const HermiteBasis& basis, const GridField& g, double p);

/// L^infinity estimate of a spectral field under the given mode.
double linf_norm(const HermiteBasis& basis, const SpectralField& f, LinfMode mode = LinfMode::refined);

/// ||H^{s/2} f||_{L^p}.
double wsp_norm(const HermiteBasis& basis, const SpectralField& f, double s, double p,
                LinfMode mode = LinfMode::refined);

/// Free flow e^{itH}: c_k -> e^{i lambda_k t} c_k.
SpectralField free_propagate(const HermiteBasis& basis, const SpectralField& f, double t);

/// e^{i lambda t} with the angle reduced in turns, so that e.g. t = 2 pi with
/// odd integer lambda is exactly 1.
Complex eigenphase(double lambda, double t);

/// Space-time L2 norm of <x>^{-1/2} H^{beta/2} e^{itH} phi over [t0, t1],
/// by a composite trapezoid rule with n_time panels. Requires 0 <= beta < 1/2.
double kato_functional(const HermiteBasis& basis, const SpectralField& phi, double beta, double t0,
                       double t1, int n_time = 256);

/// 2/q + d/r = d/2 with q, r in [2, inf], excluding the (d, q, r) = (2, 2, inf) endpoint.
bool check_admissible(double q, double r, int dim);

}  // namespace gpe
