#pragma once

#include <span>
#include <vector>

namespace cstrip {

/// Symmetric tridiagonal pencil (K, M) stored in "form" layout.
///
/// The stiffness is the quadratic form
///
///     E[x] = sum_i conductance[i] * (x[i] - x[i-1])^2 + sum_i potential[i] * x[i]^2
///
/// with x[-1] == 0, i.e. conductance[0] ties the first unknown to an
/// eliminated Dirichlet node. The mass is diagonal and positive. Keeping the
/// form instead of the assembled matrix lets the Rayleigh quotient be summed
/// without the O(1/h^2) cancellation of x^T K x.
struct TridiagPencil {
  std::vector<double> conductance;
  std::vector<double> potential;
  std::vector<double> mass;

  std::size_t size() const { return mass.size(); }
  std::vector<double> diag() const;
  // off[i] couples unknowns i and i+1; size() - 1 entries.
  std::vector<double> off_diag() const;
  double energy(std::span<const double> x) const;
  double mass_norm2(std::span<const double> x) const;
  // ||K x - lambda M x||_2 / ||M x||_2
  double residual(std::span<const double> x, double lambda) const;
};

struct DiscreteEigenpair {
  double lambda = 0.0;
  std::vector<double> vec;  // M-normalized, positive sum
  double residual = 0.0;
};

/// Lowest eigenpair of K x = lambda M x: Sturm-count bisection brackets the
/// eigenvalue, inverse iteration from just below it gives the vector, and the
/// Rayleigh quotient (via the form) gives the value.
DiscreteEigenpair lowest_eigenpair(const TridiagPencil& pencil);

/// Number of eigenvalues of the pencil strictly below sigma.
std::size_t count_below(const TridiagPencil& pencil, double sigma);

}  // namespace cstrip
