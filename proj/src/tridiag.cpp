#include "curvedstrip/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "curvedstrip/errors.hpp"

namespace cstrip {

std::vector<double> TridiagPencil::diag() const {
  const std::size_t n = size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = conductance[i] + potential[i] + (i + 1 < n ? conductance[i + 1] : 0.0);
  }
  return d;
}

std::vector<double> TridiagPencil::off_diag() const {
  const std::size_t n = size();
  std::vector<double> e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = -conductance[i + 1];
  return e;
}

double TridiagPencil::energy(std::span<const double> x) const {
  double e = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = x[i] - prev;
    e += conductance[i] * d * d + potential[i] * x[i] * x[i];
    prev = x[i];
  }
  return e;
}

double TridiagPencil::mass_norm2(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += mass[i] * x[i] * x[i];
  return s;
}

double TridiagPencil::residual(std::span<const double> x, double lambda) const {
  const auto d = diag();
  const auto e = off_diag();
  const std::size_t n = size();
  double rr = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double kx = d[i] * x[i];
    if (i > 0) kx += e[i - 1] * x[i - 1];
    if (i + 1 < n) kx += e[i] * x[i + 1];
    const double mx = mass[i] * x[i];
    rr += (kx - lambda * mx) * (kx - lambda * mx);
    mm += mx * mx;
  }
  return std::sqrt(rr / mm);
}

namespace {

struct Assembled {
  std::vector<double> d;
  std::vector<double> e;
};

std::size_t sturm_count(const Assembled& a, std::span<const double> mass, double sigma) {
  constexpr double kTiny = std::numeric_limits<double>::min() * 16;
  std::size_t neg = 0;
  double piv = 1.0;
  for (std::size_t i = 0; i < a.d.size(); ++i) {
    piv = (a.d[i] - sigma * mass[i]) - (i > 0 ? a.e[i - 1] * a.e[i - 1] / piv : 0.0);
    if (piv == 0.0) piv = -kTiny;
    if (piv < 0.0) ++neg;
  }
  return neg;
}

// Solves (K - sigma M) y = rhs by Thomas elimination; stable because sigma
// lies below the spectrum so every pivot is positive.
void shifted_solve(const Assembled& a, std::span<const double> mass, double sigma, std::span<const double> rhs,
                   std::vector<double>& y) {
  const std::size_t n = a.d.size();
  std::vector<double> piv(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    piv[i] = (a.d[i] - sigma * mass[i]) - (i > 0 ? a.e[i - 1] * a.e[i - 1] / piv[i - 1] : 0.0);
    if (piv[i] == 0.0) piv[i] = std::numeric_limits<double>::min();
    z[i] = rhs[i] - (i > 0 ? a.e[i - 1] * z[i - 1] / piv[i - 1] : 0.0);
  }
  y.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    y[k] = (z[k] - (k + 1 < n ? a.e[k] * y[k + 1] : 0.0)) / piv[k];
  }
}

}  // namespace

std::size_t count_below(const TridiagPencil& pencil, double sigma) {
  return sturm_count(Assembled{pencil.diag(), pencil.off_diag()}, pencil.mass, sigma);
}

DiscreteEigenpair lowest_eigenpair(const TridiagPencil& pencil) {
  const std::size_t n = pencil.size();
  if (n == 0) throw SolverError("empty pencil");
  for (double m : pencil.mass) {
    if (!(m > 0.0)) throw SolverError("mass matrix must be positive");
  }
  const Assembled a{pencil.diag(), pencil.off_diag()};

  // Gershgorin bracket for the pencil.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(a.e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(a.e[i]) : 0.0);
    lo = std::min(lo, (a.d[i] - r) / pencil.mass[i]);
    hi = std::max(hi, (a.d[i] + r) / pencil.mass[i]);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * scale + 1e-300;
  hi += 1e-12 * scale + 1e-300;

  // Bisection only needs to land well inside the gap to lambda_2; the
  // Rayleigh quotient does the fine work.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(a, pencil.mass, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(lo)) + 8 * std::numeric_limits<double>::epsilon() * scale) break;
  }

  DiscreteEigenpair out;
  std::vector<double> x(n, 1.0), rhs(n), y;
  double lambda = hi;
  for (int it = 0; it < 8; ++it) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = pencil.mass[i] * x[i];
    shifted_solve(a, pencil.mass, lo, rhs, y);
    const double nrm = std::sqrt(pencil.mass_norm2(y));
    if (!std::isfinite(nrm) || nrm == 0.0) throw SolverError("inverse iteration broke down");
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    const double rq = pencil.energy(x);
    const bool settled = std::abs(rq - lambda) <= 1e-15 * std::max(1.0, std::abs(rq));
    lambda = rq;
    if (settled && it >= 1) break;
  }
  if (std::accumulate(x.begin(), x.end(), 0.0) < 0.0) {
    for (double& v : x) v = -v;
  }
  out.lambda = lambda;
  out.residual = pencil.residual(x, lambda);
  out.vec = std::move(x);
  return out;
}

}  // namespace cstrip
