#pragma once

#include <optional>

#include "curvedstrip/transverse.hpp"

namespace cstrip {

/// Which representation evaluated the annulus cross-product.
enum class CrossBranch {
  bessel_jy,    // lambda > 0: J/Y of sqrt(lambda) r
  modified_ik,  // lambda < 0: scaled I/K of sqrt(-lambda) r
  series,       // |lambda| small: power series in lambda with the log terms cancelled
  automatic,
};

const char* to_string(CrossBranch b);

/// The constant-curvature cross-section is the radial problem on an annulus.
/// With kappa > 0 the Dirichlet edge sits on the outer circle r = 1/kappa + a
/// and the Robin edge on r = 1/kappa - a; with kappa < 0 the roles swap. The
/// returned function of lambda vanishes exactly at the transverse eigenvalues.
struct CrossValue {
  double value = 0.0;
  CrossBranch branch = CrossBranch::automatic;
};

/// kappa != 0. Throws RangeError if the representation overflows.
CrossValue bessel_cross(double lambda, const TransverseParams& p, CrossBranch branch = CrossBranch::automatic);

/// |lambda| below which the automatic choice uses the series branch.
double series_window(double a);

/// Smallest root of bessel_cross above the lower bound: a 200-panel scan
/// (panels doubled while the bracketed root's radial solution has an
/// interior node) and bisection. kappa != 0; for kappa == 0 use
/// straight_lambda.
double lambda_bessel(const TransverseParams& p, double tol = 1e-13);

/// The kappa in (0, 1/a) with lambda(kappa, alpha) == 0, which exists only
/// for alpha < -1/(2a): the root of
///   kappa - alpha (1 - kappa a) log((1 - kappa a) / (1 + kappa a)).
std::optional<double> zero_eigen_kappa(double alpha, double a);

}  // namespace cstrip
