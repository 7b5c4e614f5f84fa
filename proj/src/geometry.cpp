#include "curvedstrip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvedstrip/errors.hpp"
#include "numfmt.hpp"

namespace cstrip {

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (!(hi > lo) || n < 1) throw ValidationError("grid needs hi > lo and at least one cell");
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) g[i] = lo + (hi - lo) * i / n;
  g.back() = hi;
  return g;
}

StripGeometry::State StripGeometry::advance(std::size_t i, double ds) const {
  const double s0 = s_[i];
  const double k0 = kappa_(s0), km = kappa_(s0 + ds / 2), k1 = kappa_(s0 + ds);
  // RK4 on (theta, x, y): theta' = kappa(s) does not depend on the state, so
  // the stages reduce to Simpson's rule; the midpoint angle comes from the
  // quadratic through the three curvature values.
  const double th0 = theta_[i];
  const double th1 = th0 + ds / 6 * (k0 + 4 * km + k1);
  const double thm = th0 + ds / 24 * (5 * k0 + 8 * km - k1);
  State out;
  out.theta = th1;
  out.x = gamma_[i][0] + ds / 6 * (std::cos(th0) + 4 * std::cos(thm) + std::cos(th1));
  out.y = gamma_[i][1] + ds / 6 * (std::sin(th0) + 4 * std::sin(thm) + std::sin(th1));
  return out;
}

StripGeometry build_curve(const Profile& kappa, std::vector<double> grid, double a, const CurveFrame& frame) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("half-width a must be positive and finite");
  if (grid.size() < 2) throw ValidationError("curve grid needs at least two samples");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ValidationError("curve grid must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("curve grid must be strictly increasing");
    if (!std::isfinite(kappa(grid[i]))) {
      throw ValidationError("curvature is not finite at s = " + fmt_double(grid[i]));
    }
  }
  StripGeometry g;
  g.a_ = a;
  g.kappa_ = kappa;
  g.s_ = std::move(grid);
  const std::size_t n = g.s_.size();
  g.theta_.resize(n);
  g.gamma_.resize(n);
  g.theta_[0] = frame.theta0;
  g.gamma_[0] = frame.origin;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto st = g.advance(i, g.s_[i + 1] - g.s_[i]);
    g.theta_[i + 1] = st.theta;
    g.gamma_[i + 1] = {st.x, st.y};
  }
  g.sup_norm_ = kappa.sup_norm(g.s_.front(), g.s_.back());
  return g;
}

namespace {

std::size_t locate(const std::vector<double>& s, double x) {
  if (!(x >= s.front() && x <= s.back())) {
    throw ValidationError("arc length " + fmt_double(x) + " outside the curve range");
  }
  auto it = std::upper_bound(s.begin(), s.end(), x);
  std::size_t i = static_cast<std::size_t>(it - s.begin());
  return i == 0 ? 0 : std::min(i - 1, s.size() - 2);
}

}  // namespace

Point StripGeometry::curve(double s) const {
  const std::size_t i = locate(s_, s);
  const auto st = advance(i, s - s_[i]);
  return {st.x, st.y};
}

Point StripGeometry::tangent(double s) const {
  const std::size_t i = locate(s_, s);
  const double th = advance(i, s - s_[i]).theta;
  return {std::cos(th), std::sin(th)};
}

Point StripGeometry::normal(double s) const {
  const Point t = tangent(s);
  return {-t[1], t[0]};
}

Point strip_map(const StripGeometry& g, double s, double t) {
  if (!(std::abs(t) <= g.a())) throw ValidationError("transverse coordinate outside [-a, a]");
  const Point c = g.curve(s);
  const Point n = g.normal(s);
  return {c[0] + n[0] * t, c[1] + n[1] * t};
}

double jacobian(const Profile& kappa, double s, double t) { return 1.0 - kappa(s) * t; }

const char* to_string(Injectivity v) {
  switch (v) {
    case Injectivity::ok: return "ok";
    case Injectivity::failed: return "failed";
    case Injectivity::unknown: return "unknown";
  }
  return "?";
}

HypothesisReport check_hypotheses(const StripGeometry& g, int t_levels) {
  HypothesisReport rep;
  const double a = g.a();
  rep.supnorm_ok = g.sup_norm() * a < 1.0;
  if (g.kappa().is_zero()) {
    rep.injectivity = Injectivity::ok;
    return rep;
  }
  t_levels = std::max(t_levels, 2);
  const auto& s = g.s();
  const auto& gam = g.gamma();
  const std::size_t n = s.size();
  std::vector<Point> tan(n), nor(n);
  for (std::size_t k = 0; k < n; ++k) {
    tan[k] = {std::cos(g.theta()[k]), std::sin(g.theta()[k])};
    nor[k] = {-tan[k][1], tan[k][0]};
  }
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < t_levels; ++j) {
      const double t = -a + 2.0 * a * j / (t_levels - 1);
      const Point p{gam[i][0] + nor[i][0] * t, gam[i][1] + nor[i][1] * t};
      for (std::size_t k = 0; k < n; ++k) {
        f[k] = (p[0] - gam[k][0]) * tan[k][0] + (p[1] - gam[k][1]) * tan[k][1];
      }
      for (std::size_t k = 0; k + 1 < n; ++k) {
        if (k + 1 == i || k == i) continue;  // the trivial foot point s_i
        if ((f[k] < 0) == (f[k + 1] < 0)) continue;
        const double w = f[k] / (f[k] - f[k + 1]);
        const double sp = s[k] + w * (s[k + 1] - s[k]);
        const Point c = g.curve(sp);
        const Point nn = g.normal(sp);
        const double tp = (p[0] - c[0]) * nn[0] + (p[1] - c[1]) * nn[1];
        if (std::abs(tp) < a) {
          rep.injectivity = Injectivity::failed;
          rep.overlap = {s[i], t, sp, tp};
          return rep;
        }
      }
    }
  }
  rep.injectivity = Injectivity::unknown;
  return rep;
}

}  // namespace cstrip
