#pragma once

#include <vector>

#include "curvedstrip/profile.hpp"
#include "curvedstrip/tridiag.hpp"

namespace cstrip {

/// Constant-curvature cross-section: the operator -psi'' + kappa/(1-kappa t) psi'
/// on (-a, a), Dirichlet at t = -a, Robin psi'(a) + alpha psi(a) = 0 at t = a.
struct TransverseParams {
  double kappa = 0.0;
  Robin alpha = Robin::finite(0.0);
  double a = 1.0;

  // Throws ValidationError unless a > 0 and |kappa| a < 1.
  void validate() const;
};

struct EigenResult {
  double lambda = 0.0;               // finest-mesh discrete eigenvalue
  double extrapolated_lambda = 0.0;  // Richardson value over the last two meshes
  double error_estimate = 0.0;       // change of the extrapolated value on the last refinement
  double residual = 0.0;             // ||K x - lambda M x|| / ||M x|| on the finest mesh
  int mesh_n = 0;                    // cells on the finest mesh
  std::vector<double> t;             // mesh_n + 1 nodes over [-a, a]
  std::vector<double> psi;           // psi(-a) == 0; unit norm in L^2((1 - kappa t) dt)
};

struct SolveOptions {
  double tol = 1e-10;  // relative to max(1, |lambda|)
  int n_min = 32;
  int n_max = 1 << 21;
};

/// Stiffness/mass pencil of the weighted form on n uniform cells; the node
/// t = -a is eliminated, the node t = a is eliminated too for Dirichlet alpha.
TridiagPencil assemble_1d(const TransverseParams& p, int n);

/// Same problem after the unitary map phi = (1 - kappa t)^{1/2} psi: flat
/// mass, potential -kappa^2 / (4 (1 - kappa t)^2), Robin coefficient
/// alpha + kappa / (2 (1 - kappa a)).
TridiagPencil assemble_1d_transformed(const TransverseParams& p, int n);

/// lambda(kappa, alpha): mesh doubling with Richardson extrapolation until
/// two consecutive extrapolations agree to opts.tol.
EigenResult lambda_1d(const TransverseParams& p, const SolveOptions& opts = {});
EigenResult lambda_1d_transformed(const TransverseParams& p, const SolveOptions& opts = {});

/// Non-adaptive variant: extrapolation from exactly n and 2n cells. Smooth in
/// the parameters, which finite-difference checks rely on.
EigenResult lambda_1d_fixed(const TransverseParams& p, int n);

/// Discrete eigenvalue at a single mesh (no extrapolation).
double lambda_1d_discrete(const TransverseParams& p, int n);

/// -alpha^2 (1 + |kappa| a)^2 / (1 - |kappa| a)^2; 0 for Dirichlet.
double lambda_lower_bound(const TransverseParams& p);

struct Derivative {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// d lambda / d kappa = int psi psi' / (1 - kappa t) dt for the unit-normalized
/// ground state, by midpoint quadrature per cell, extrapolated over meshes.
Derivative dlambda_dkappa(const TransverseParams& p, const SolveOptions& opts = {});

/// lambda(0, alpha) from the transcendental condition for sin / sinh modes.
double straight_lambda(const Robin& alpha, double a);

/// nu(alpha): lowest eigenvalue of the disc of radius 2a, Robin or Dirichlet
/// on its boundary (radial problem with measure r dr).
EigenResult disc_nu(const Robin& alpha, double a, const SolveOptions& opts = {});

}  // namespace cstrip
