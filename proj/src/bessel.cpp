#include "curvedstrip/bessel.hpp"

#include <cmath>
#include <numbers>

#include "curvedstrip/errors.hpp"

namespace cstrip::bessel {

namespace {

using ld = long double;

constexpr ld kEuler = 0.577215664901532860606512090082402431L;
constexpr ld kPi = 3.141592653589793238462643383279502884L;
constexpr double kSeriesLimit = 20.0;

// Series pieces shared by J/Y (sign = -1) and I/K (sign = +1); u = x^2/4.
struct Ascending {
  ld order0 = 0;    // sum (s u)^k / (k!)^2
  ld order1 = 0;    // sum (s u)^k / (k! (k+1)!)
  ld harm0 = 0;     // sum_{k>=1} H_k (s u)^k / (k!)^2
  ld harm1 = 0;     // sum_{k>=0} (H_k + H_{k+1}) (s u)^k / (k! (k+1)!)
};

Ascending ascending(ld u, int sign) {
  Ascending out;
  ld c0 = 1, c1 = 1, h = 0;
  out.order0 = c0;
  out.order1 = c1;
  out.harm1 = 1;  // H_0 + H_1
  for (int k = 1; k < 400; ++k) {
    c0 *= sign * u / (ld(k) * k);
    c1 *= sign * u / (ld(k) * (k + 1));
    const ld hk = h + ld(1) / k;
    out.order0 += c0;
    out.order1 += c1;
    out.harm0 += hk * c0;
    out.harm1 += (hk + hk + ld(1) / (k + 1)) * c1;
    h = hk;
    if (std::fabs(c0) * (hk + 1) < 1e-21L * std::fabs(out.order0) &&
        std::fabs(c1) * (2 * hk + 2) < 1e-21L * std::fabs(out.order1) && k > 2) {
      break;
    }
  }
  return out;
}

// Hankel expansion: P, Q for J/Y, or the plain sum for I/K (alternating for I).
struct Hankel {
  ld p = 0, q = 0, plain = 0, alternating = 0;
};

Hankel hankel(int order, ld x) {
  const ld mu = 4.0L * order * order;
  Hankel h;
  ld t = 1;
  ld last = 2;
  h.p = 1;
  h.plain = 1;
  h.alternating = 1;
  for (int m = 1; m < 60; ++m) {
    const ld next = t * (mu - ld(2 * m - 1) * (2 * m - 1)) / (8.0L * m * x);
    if (std::fabs(next) > last || next == 0) break;
    last = std::fabs(next);
    t = next;
    // p = t0 - t2 + t4 ..., q = t1 - t3 + ...
    switch (m % 4) {
      case 1: h.q += t; break;
      case 2: h.p -= t; break;
      case 3: h.q -= t; break;
      case 0: h.p += t; break;
    }
    h.plain += t;
    h.alternating += (m % 2 ? -t : t);
    if (last < 1e-20L) break;
  }
  return h;
}

void require(bool ok, const char* what) {
  if (!ok) throw RangeError(what);
}

}  // namespace

double j0(double x) {
  x = std::abs(x);
  if (x <= kSeriesLimit) return double(ascending(ld(x) * x / 4, -1).order0);
  const Hankel h = hankel(0, x);
  const ld chi = ld(x) - kPi / 4;
  return double(std::sqrt(2 / (kPi * x)) * (h.p * std::cos(chi) - h.q * std::sin(chi)));
}

double j1(double x) {
  const double sgn = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x <= kSeriesLimit) return sgn * double(ld(x) / 2 * ascending(ld(x) * x / 4, -1).order1);
  const Hankel h = hankel(1, x);
  const ld chi = ld(x) - 3 * kPi / 4;
  return sgn * double(std::sqrt(2 / (kPi * x)) * (h.p * std::cos(chi) - h.q * std::sin(chi)));
}

double y0(double x) {
  require(x > 0, "Y0 needs a positive argument");
  if (x <= kSeriesLimit) {
    const Ascending s = ascending(ld(x) * x / 4, -1);
    return double(2 / kPi * ((std::log(ld(x) / 2) + kEuler) * s.order0 - s.harm0));
  }
  const Hankel h = hankel(0, x);
  const ld chi = ld(x) - kPi / 4;
  return double(std::sqrt(2 / (kPi * x)) * (h.p * std::sin(chi) + h.q * std::cos(chi)));
}

double y1(double x) {
  require(x > 0, "Y1 needs a positive argument");
  if (x <= kSeriesLimit) {
    const Ascending s = ascending(ld(x) * x / 4, -1);
    const ld half = ld(x) / 2;
    const ld j1v = half * s.order1;
    return double(-2 / (kPi * x) + 2 / kPi * (std::log(half) + kEuler) * j1v - half / kPi * s.harm1);
  }
  const Hankel h = hankel(1, x);
  const ld chi = ld(x) - 3 * kPi / 4;
  return double(std::sqrt(2 / (kPi * x)) * (h.p * std::sin(chi) + h.q * std::cos(chi)));
}

double i0e(double x) {
  x = std::abs(x);
  if (x <= kSeriesLimit) return double(ascending(ld(x) * x / 4, 1).order0 * std::exp(-ld(x)));
  return double(hankel(0, x).alternating / std::sqrt(2 * kPi * x));
}

double i1e(double x) {
  const double sgn = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x <= kSeriesLimit) return sgn * double(ld(x) / 2 * ascending(ld(x) * x / 4, 1).order1 * std::exp(-ld(x)));
  return sgn * double(hankel(1, x).alternating / std::sqrt(2 * kPi * x));
}

namespace {

// e^x K_n(x) = int_0^inf exp(-x (cosh t - 1)) cosh(n t) dt; the trapezoid rule
// converges geometrically for this analytic, doubly-exponentially decaying
// integrand.
ld k_integral(int order, ld x) {
  const ld h = 0.05L;
  ld sum = 0.5L;
  for (int k = 1; k < 4000; ++k) {
    const ld t = k * h;
    const ld e = x * (std::cosh(t) - 1);
    if (e > 60) break;
    sum += std::exp(-e) * std::cosh(order * t);
  }
  return sum * h;
}

}  // namespace

double k0e(double x) {
  require(x > 0, "K0 needs a positive argument");
  if (x <= 2.0) {
    const Ascending s = ascending(ld(x) * x / 4, 1);
    return double((-(std::log(ld(x) / 2) + kEuler) * s.order0 + s.harm0) * std::exp(ld(x)));
  }
  if (x <= kSeriesLimit) return double(k_integral(0, x));
  return double(hankel(0, x).plain * std::sqrt(kPi / (2 * ld(x))));
}

double k1e(double x) {
  require(x > 0, "K1 needs a positive argument");
  if (x <= 2.0) {
    const Ascending s = ascending(ld(x) * x / 4, 1);
    const ld half = ld(x) / 2;
    const ld i1v = half * s.order1;
    return double((1 / ld(x) + (std::log(half) + kEuler) * i1v - half / 2 * s.harm1) * std::exp(ld(x)));
  }
  if (x <= kSeriesLimit) return double(k_integral(1, x));
  return double(hankel(1, x).plain * std::sqrt(kPi / (2 * ld(x))));
}

}  // namespace cstrip::bessel
