#include "curvedstrip/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "curvedstrip/errors.hpp"
#include "numfmt.hpp"

namespace cstrip {

void TransverseParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("half-width a must be positive and finite");
  if (!std::isfinite(kappa) || !(std::abs(kappa) * a < 1.0)) {
    throw ValidationError("curvature must satisfy |kappa| a < 1 (kappa = " + fmt_double(kappa) + ")");
  }
}

TridiagPencil assemble_1d(const TransverseParams& p, int n) {
  p.validate();
  if (n < 2) throw ValidationError("transverse mesh needs at least 2 cells");
  const double h = 2.0 * p.a / n;
  const auto t = [&](double i) { return -p.a + i * h; };
  const bool dir = p.alpha.is_dirichlet();
  const std::size_t m = dir ? n - 1 : n;

  TridiagPencil out;
  out.conductance.resize(m);
  out.potential.assign(m, 0.0);
  out.mass.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double i = static_cast<double>(k + 1);
    out.conductance[k] = (1.0 - p.kappa * t(i - 0.5)) / h;
    out.mass[k] = (1.0 - p.kappa * t(i)) * h;
  }
  if (dir) {
    out.potential[m - 1] += (1.0 - p.kappa * t(n - 0.5)) / h;
  } else {
    out.mass[m - 1] = (1.0 - p.kappa * p.a) * h / 2.0;
    out.potential[m - 1] += p.alpha.value() * (1.0 - p.kappa * p.a);
  }
  return out;
}

TridiagPencil assemble_1d_transformed(const TransverseParams& p, int n) {
  p.validate();
  if (n < 2) throw ValidationError("transverse mesh needs at least 2 cells");
  const double h = 2.0 * p.a / n;
  const bool dir = p.alpha.is_dirichlet();
  const std::size_t m = dir ? n - 1 : n;

  TridiagPencil out;
  out.conductance.assign(m, 1.0 / h);
  out.potential.resize(m);
  out.mass.assign(m, h);
  if (!dir) out.mass[m - 1] = h / 2.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = -p.a + static_cast<double>(k + 1) * h;
    const double g = 1.0 - p.kappa * t;
    out.potential[k] = -p.kappa * p.kappa / (4.0 * g * g) * out.mass[k];
  }
  if (dir) {
    out.potential[m - 1] += 1.0 / h;
  } else {
    const double ga = 1.0 - p.kappa * p.a;
    out.potential[m - 1] += p.alpha.value() + p.kappa / (2.0 * ga);
  }
  return out;
}

namespace {

struct MeshSolution {
  int n = 0;
  DiscreteEigenpair pair;
};

// Full nodal vector on n cells from the reduced unknowns: the left node is
// prepended when the pencil eliminated it, the right node appended for
// Dirichlet.
std::vector<double> expand(const std::vector<double>& reduced, int n, bool left_eliminated) {
  std::vector<double> full(static_cast<std::size_t>(n) + 1, 0.0);
  const std::size_t off = left_eliminated ? 1 : 0;
  for (std::size_t k = 0; k < reduced.size(); ++k) full[k + off] = reduced[k];
  return full;
}

struct Adaptive {
  MeshSolution coarse, fine;
  double extrapolated = 0.0;
  double error_estimate = 0.0;
};

Adaptive refine_until_converged(const std::function<TridiagPencil(int)>& build, int n0, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("tolerance must be positive");
  int n = std::max(n0, opts.n_min);
  Adaptive s;
  s.coarse = {n, lowest_eigenpair(build(n))};
  double prev_ext = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    const int n2 = 2 * n;
    if (n2 > opts.n_max) {
      throw SolverError("transverse solver did not converge within mesh cap (last change " +
                            fmt_double(s.error_estimate) + ")",
                        s.fine.pair.residual);
    }
    s.fine = {n2, lowest_eigenpair(build(n2))};
    const double ext = (4.0 * s.fine.pair.lambda - s.coarse.pair.lambda) / 3.0;
    s.error_estimate = std::isnan(prev_ext) ? std::abs(ext - s.fine.pair.lambda) : std::abs(ext - prev_ext);
    s.extrapolated = ext;
    if (!std::isnan(prev_ext) && s.error_estimate <= opts.tol * std::max(1.0, std::abs(ext))) return s;
    prev_ext = ext;
    s.coarse = std::move(s.fine);
    n = n2;
  }
}

int initial_cells(const TransverseParams& p) {
  // Resolve the thin end of the annulus, where the weight 1 - |kappa| t is
  // smallest.
  const double gap = (1.0 - std::abs(p.kappa) * p.a);
  const double need = 8.0 * std::abs(p.kappa) * p.a / gap;
  int n = 32;
  while (n < need && n < (1 << 20)) n *= 2;
  return n;
}

EigenResult to_result(const Adaptive& s, double a) {
  EigenResult r;
  r.lambda = s.fine.pair.lambda;
  r.extrapolated_lambda = s.extrapolated;
  r.error_estimate = s.error_estimate;
  r.residual = s.fine.pair.residual;
  r.mesh_n = s.fine.n;
  r.psi = expand(s.fine.pair.vec, s.fine.n, true);
  r.t.resize(r.psi.size());
  const double h = 2.0 * a / s.fine.n;
  for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] = -a + static_cast<double>(i) * h;
  r.t.back() = a;
  return r;
}

double derivative_quadrature(const std::vector<double>& psi, double kappa, double a, int n) {
  const double h = 2.0 * a / n;
  double d = 0.0;
  for (int j = 0; j < n; ++j) {
    const double tm = -a + (j + 0.5) * h;
    d += (psi[j + 1] * psi[j + 1] - psi[j] * psi[j]) / (2.0 * (1.0 - kappa * tm));
  }
  return d;
}

}  // namespace

EigenResult lambda_1d(const TransverseParams& p, const SolveOptions& opts) {
  p.validate();
  const auto s = refine_until_converged([&](int n) { return assemble_1d(p, n); }, initial_cells(p), opts);
  return to_result(s, p.a);
}

EigenResult lambda_1d_transformed(const TransverseParams& p, const SolveOptions& opts) {
  p.validate();
  const auto s = refine_until_converged([&](int n) { return assemble_1d_transformed(p, n); }, initial_cells(p), opts);
  return to_result(s, p.a);
}

EigenResult lambda_1d_fixed(const TransverseParams& p, int n) {
  p.validate();
  Adaptive s;
  s.coarse = {n, lowest_eigenpair(assemble_1d(p, n))};
  s.fine = {2 * n, lowest_eigenpair(assemble_1d(p, 2 * n))};
  s.extrapolated = (4.0 * s.fine.pair.lambda - s.coarse.pair.lambda) / 3.0;
  s.error_estimate = std::abs(s.extrapolated - s.fine.pair.lambda);
  return to_result(s, p.a);
}

double lambda_1d_discrete(const TransverseParams& p, int n) { return lowest_eigenpair(assemble_1d(p, n)).lambda; }

double lambda_lower_bound(const TransverseParams& p) {
  p.validate();
  if (p.alpha.is_dirichlet()) return 0.0;
  const double k = std::abs(p.kappa) * p.a;
  const double r = (1.0 + k) / (1.0 - k);
  const double al = p.alpha.value();
  return -al * al * r * r;
}

Derivative dlambda_dkappa(const TransverseParams& p, const SolveOptions& opts) {
  p.validate();
  const auto s = refine_until_converged([&](int n) { return assemble_1d(p, n); }, initial_cells(p), opts);
  const double dc = derivative_quadrature(expand(s.coarse.pair.vec, s.coarse.n, true), p.kappa, p.a, s.coarse.n);
  const double df = derivative_quadrature(expand(s.fine.pair.vec, s.fine.n, true), p.kappa, p.a, s.fine.n);
  const double ext = (4.0 * df - dc) / 3.0;
  return {ext, std::abs(ext - df)};
}

double straight_lambda(const Robin& alpha, double a) {
  if (!(a > 0.0)) throw ValidationError("half-width a must be positive");
  const double pi = std::numbers::pi;
  if (alpha.is_dirichlet()) return pi * pi / (4.0 * a * a);
  const double al = alpha.value();
  const double critical = -1.0 / (2.0 * a);
  if (al == critical) return 0.0;

  const auto bisect = [](auto f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  if (al > critical) {
    // psi = sin(k (t + a)): k cos(2ak) + alpha sin(2ak) = 0, k in (0, pi/(2a)).
    const auto f = [&](double k) { return k * std::cos(2 * a * k) + al * std::sin(2 * a * k); };
    const double k = bisect(f, 1e-300, pi / (2.0 * a));
    return k * k;
  }
  // psi = sinh(mu (t + a)): mu cosh(2a mu) + alpha sinh(2a mu) = 0, mu in (0, |alpha|].
  // Divided by cosh to stay finite.
  const auto f = [&](double mu) { return mu + al * std::tanh(2 * a * mu); };
  const double mu = bisect(f, 1e-300, std::abs(al));
  return -mu * mu;
}

namespace {

TridiagPencil assemble_disc(const Robin& alpha, double a, int n) {
  const double radius = 2.0 * a;
  const double h = radius / n;
  const bool dir = alpha.is_dirichlet();
  const std::size_t m = dir ? n : n + 1;  // nodes r_0 .. r_{m-1}
  TridiagPencil out;
  out.conductance.resize(m);
  out.potential.assign(m, 0.0);
  out.mass.resize(m);
  out.conductance[0] = 0.0;  // r = 0 is a natural point, not a Dirichlet node
  out.mass[0] = h * h / 8.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double r = static_cast<double>(i) * h;
    out.conductance[i] = (r - 0.5 * h) / h;
    out.mass[i] = r * h;
  }
  if (dir) {
    out.potential[m - 1] += (radius - 0.5 * h) / h;
  } else {
    out.mass[m - 1] = 0.5 * h * (radius - 0.25 * h);
    out.potential[m - 1] += alpha.value() * radius;
  }
  return out;
}

}  // namespace

EigenResult disc_nu(const Robin& alpha, double a, const SolveOptions& opts) {
  if (!(a > 0.0)) throw ValidationError("half-width a must be positive");
  const auto s = refine_until_converged([&](int n) { return assemble_disc(alpha, a, n); }, 32, opts);
  EigenResult r;
  r.lambda = s.fine.pair.lambda;
  r.extrapolated_lambda = s.extrapolated;
  r.error_estimate = s.error_estimate;
  r.residual = s.fine.pair.residual;
  r.mesh_n = s.fine.n;
  r.psi = expand(s.fine.pair.vec, s.fine.n, false);
  r.t.resize(r.psi.size());
  for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] = 2.0 * a * static_cast<double>(i) / s.fine.n;
  return r;
}

}  // namespace cstrip
