#include "curvedstrip/annulus.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "curvedstrip/bessel.hpp"
#include "curvedstrip/errors.hpp"
#include "numfmt.hpp"

namespace cstrip {

const char* to_string(CrossBranch b) {
  switch (b) {
    case CrossBranch::bessel_jy: return "bessel_jy";
    case CrossBranch::modified_ik: return "modified_ik";
    case CrossBranch::series: return "series";
    case CrossBranch::automatic: return "automatic";
  }
  return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = 0.57721566490153286061;

struct Radii {
  double dir = 0.0;    // radius of the Dirichlet circle
  double robin = 0.0;  // radius of the Robin circle
  double sigma = 1.0;  // +1 when the Robin circle is the inner one
};

Radii radii(const TransverseParams& p) {
  const double r0 = 1.0 / std::abs(p.kappa);
  if (p.kappa > 0) return {r0 + p.a, r0 - p.a, 1.0};
  return {r0 - p.a, r0 + p.a, -1.0};
}

// Combines C00 (= J0 Y0 - Y0 J0) and C01 (= k (J0 Y1 - Y0 J1)) into the
// boundary condition at the Robin circle.
double combine(const TransverseParams& p, double sigma, double c00, double c01) {
  if (p.alpha.is_dirichlet()) return c00;
  return sigma * c01 + p.alpha.value() * c00;
}

double cross_jy(double lambda, const TransverseParams& p, const Radii& r) {
  using namespace bessel;
  const double k = std::sqrt(lambda);
  const double xd = k * r.dir, xr = k * r.robin;
  const double j0d = j0(xd), y0d = y0(xd);
  const double c00 = j0d * y0(xr) - y0d * j0(xr);
  const double c01 = k * (j0d * y1(xr) - y0d * j1(xr));
  return combine(p, r.sigma, c00, c01);
}

// With damped set, the result is multiplied by e^{-|x_d - x_r|} > 0, which
// keeps the sign and the roots but not the value.
double cross_ik(double lambda, const TransverseParams& p, const Radii& r, bool damped = false) {
  using namespace bessel;
  const double mu = std::sqrt(-lambda);
  const double xd = mu * r.dir, xr = mu * r.robin;
  // I(x_d) K(x_r) carries e^{x_d - x_r}, K(x_d) I(x_r) carries e^{x_r - x_d}.
  const double shift = damped ? std::abs(xd - xr) : 0.0;
  const double up = std::exp(xd - xr - shift), down = std::exp(xr - xd - shift);
  const double i0d = i0e(xd), k0d = k0e(xd), i0r = i0e(xr), k0r = k0e(xr);
  const double c00 = -2.0 / kPi * (i0d * k0r * up - k0d * i0r * down);
  const double c01 = -2.0 / kPi * mu * (i0d * k1e(xr) * up + k0d * i1e(xr) * down);
  return combine(p, r.sigma, c00, c01);
}

// Entire-function form: with Y_n split as (2/pi) log(k) J_n + regular part the
// log(k) pieces cancel from both cross-products.
struct SeriesAt {
  long double j0 = 0, kj1 = 0;  // J0(kr), k J1(kr)
  long double y0 = 0, ky1 = 0;  // regular parts of Y0(kr), k Y1(kr)
};

SeriesAt series_at(double lambda, double r) {
  using ld = long double;
  const ld u = ld(lambda) * r * r / 4;
  ld c0 = 1, c1 = 1, h = 0;
  ld s0 = 1, s1 = 1, h0 = 0, h1 = 1;
  for (int k = 1; k < 300; ++k) {
    c0 *= -u / (ld(k) * k);
    c1 *= -u / (ld(k) * (k + 1));
    const ld hk = h + ld(1) / k;
    s0 += c0;
    s1 += c1;
    h0 += hk * c0;
    h1 += (2 * hk + ld(1) / (k + 1)) * c1;
    h = hk;
    if (std::fabs(c0) * (hk + 1) < 1e-21L && std::fabs(c1) * (2 * hk + 2) < 1e-21L) break;
  }
  const ld pi = std::numbers::pi_v<ld>;
  const ld lg = std::log(ld(r) / 2) + ld(kEuler);
  const ld half = ld(lambda) * r / 2;
  SeriesAt out;
  out.j0 = s0;
  out.kj1 = half * s1;
  out.y0 = 2 / pi * (lg * s0 - h0);
  out.ky1 = -2 / (pi * r) + 2 / pi * lg * out.kj1 - half / pi * h1;
  return out;
}

double cross_series(double lambda, const TransverseParams& p, const Radii& r) {
  const SeriesAt d = series_at(lambda, r.dir);
  const SeriesAt q = series_at(lambda, r.robin);
  const long double c00 = d.j0 * q.y0 - d.y0 * q.j0;
  const long double c01 = d.j0 * q.ky1 - d.y0 * q.kj1;
  return combine(p, r.sigma, double(c00), double(c01));
}

// The radial solution vanishing on the Dirichlet circle; a ground state has
// no zero strictly between the circles.
bool has_interior_node(double lambda, const Radii& r) {
  using namespace bessel;
  const double k = std::sqrt(lambda);
  const double jd = j0(k * r.dir), yd = y0(k * r.dir);
  const double lo = std::min(r.dir, r.robin), hi = std::max(r.dir, r.robin);
  constexpr int kSamples = 4000;
  double prev = 0.0;
  for (int i = 1; i < kSamples; ++i) {
    const double x = k * (lo + (hi - lo) * i / kSamples);
    const double u = j0(x) * yd - y0(x) * jd;
    if (i > 1 && (u < 0) != (prev < 0)) return true;
    prev = u;
  }
  return false;
}

}  // namespace

double series_window(double a) { return 1e-4 / (4.0 * a * a); }

CrossValue bessel_cross(double lambda, const TransverseParams& p, CrossBranch branch) {
  p.validate();
  if (p.kappa == 0.0) throw ValidationError("annulus representation needs nonzero curvature");
  if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
  const Radii r = radii(p);
  if (branch == CrossBranch::automatic) {
    if (std::abs(lambda) < series_window(p.a)) {
      branch = CrossBranch::series;
    } else {
      branch = lambda > 0 ? CrossBranch::bessel_jy : CrossBranch::modified_ik;
    }
  }
  double v = 0.0;
  switch (branch) {
    case CrossBranch::bessel_jy:
      if (!(lambda > 0)) throw ValidationError("J/Y branch needs lambda > 0");
      v = cross_jy(lambda, p, r);
      break;
    case CrossBranch::modified_ik:
      if (!(lambda < 0)) throw ValidationError("I/K branch needs lambda < 0");
      v = cross_ik(lambda, p, r);
      break;
    case CrossBranch::series:
      v = cross_series(lambda, p, r);
      break;
    case CrossBranch::automatic:
      break;
  }
  if (!std::isfinite(v)) {
    throw RangeError("annulus cross-product overflowed at lambda = " + fmt_double(lambda) + " (" +
                     to_string(branch) + ")");
  }
  return {v, branch};
}

double lambda_bessel(const TransverseParams& p, double tol) {
  p.validate();
  if (p.kappa == 0.0) throw ValidationError("annulus representation needs nonzero curvature");
  const double ka = std::abs(p.kappa) * p.a;
  const double pi = std::numbers::pi;
  const double hi = pi * pi / (4 * p.a * p.a) * (1 + ka) / (1 - ka) * (1 + 1e-6) + 1e-9;
  const double lower = lambda_lower_bound(p);
  const double lo = std::min(lower, 0.0) - 1e-6 * (1.0 + std::abs(lower));

  const Radii r = radii(p);
  const double window = series_window(p.a);
  const auto f = [&](double x) {
    if (x <= -window) {
      const double v = cross_ik(x, p, r, true);
      if (!std::isfinite(v)) throw RangeError("annulus cross-product overflowed at lambda = " + fmt_double(x));
      return v;
    }
    return bessel_cross(x, p).value;
  };
  // Negative and positive parts get their own panels; the positive ones are
  // spaced quadratically because eigenvalues crowd near zero when the annulus
  // is thin on one side.
  for (int panels = 200; panels <= 6400; panels *= 2) {
    const auto node = [&](int i) {
      if (lo >= 0.0) return hi * double(i) * i / (double(panels) * panels);
      if (i <= panels) return lo - lo * i / panels;
      const double q = double(i - panels) / panels;
      return hi * q * q;
    };
    const int last = lo >= 0.0 ? panels : 2 * panels;
    double x0 = lo, f0 = f(lo);
    for (int i = 1; i <= last; ++i) {
      const double x1 = node(i);
      const double f1 = f(x1);
      if (f0 == 0.0) return x0;
      if ((f0 < 0) == (f1 < 0)) {
        x0 = x1;
        f0 = f1;
        continue;
      }
      double a = x0, b = x1, fa = f0, root = 0.5 * (x0 + x1);
      for (int it = 0; it < 300; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
        if (b - a <= tol * std::max(1.0, std::abs(m))) break;
      }
      root = 0.5 * (a + b);
      if (root <= 0.0 || !has_interior_node(root, r)) return root;
      break;  // skipped the ground state: rescan finer
    }
  }
  throw SolverError("no ground-state sign change of the annulus cross-product on [" + fmt_double(lo) + ", " +
                    fmt_double(hi) + "]");
}

std::optional<double> zero_eigen_kappa(double alpha, double a) {
  if (!(a > 0.0)) throw ValidationError("half-width a must be positive");
  if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");
  if (!(alpha < -1.0 / (2.0 * a))) return std::nullopt;
  const auto h = [&](double k) {
    return k - alpha * (1 - k * a) * std::log((1 - k * a) / (1 + k * a));
  };
  double lo = 1e-12 / a, hi = (1 - 1e-15) / a;
  for (int it = 0; it < 300; ++it) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if (h(m) < 0) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cstrip
