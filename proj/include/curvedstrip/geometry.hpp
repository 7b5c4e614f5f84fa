#pragma once

#include <array>
#include <vector>

#include "curvedstrip/profile.hpp"

namespace cstrip {

using Point = std::array<double, 2>;

// Rigid-motion freedom of the reconstruction: initial tangent angle and the
// position of the curve at the first grid sample.
struct CurveFrame {
  double theta0 = 0.0;
  Point origin{0.0, 0.0};
};

/// Reference curve reconstructed from its curvature plus the half-width of
/// the strip around it. Immutable after build_curve.
class StripGeometry {
 public:
  double a() const { return a_; }
  const Profile& kappa() const { return kappa_; }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<Point>& gamma() const { return gamma_; }

  double s_min() const { return s_.front(); }
  double s_max() const { return s_.back(); }

  // Values at an arbitrary s in [s_min, s_max]: a single RK4 step from the
  // nearest grid sample below.
  Point curve(double s) const;
  Point tangent(double s) const;
  // (-T_y, T_x)
  Point normal(double s) const;

  // sup |kappa| over the grid range.
  double sup_norm() const { return sup_norm_; }

 private:
  friend StripGeometry build_curve(const Profile&, std::vector<double>, double, const CurveFrame&);
  struct State {
    double theta, x, y;
  };
  State advance(std::size_t i, double ds) const;

  double a_ = 1.0;
  Profile kappa_;
  std::vector<double> s_;
  std::vector<double> theta_;
  std::vector<Point> gamma_;
  double sup_norm_ = 0.0;
};

/// Integrates theta' = kappa, Gamma' = (cos theta, sin theta) with classical
/// RK4 on the given arc-length grid (strictly increasing, at least 2 points).
StripGeometry build_curve(const Profile& kappa, std::vector<double> grid, double a, const CurveFrame& frame = {});

/// Gamma(s) + N(s) t, for s in the grid range and |t| <= a.
Point strip_map(const StripGeometry& g, double s, double t);

/// 1 - kappa(s) t.
double jacobian(const Profile& kappa, double s, double t);

enum class Injectivity { ok, failed, unknown };
const char* to_string(Injectivity v);

struct HypothesisReport {
  bool supnorm_ok = false;
  Injectivity injectivity = Injectivity::unknown;
  // Witness of a self-overlap: two parameter pairs with the same image.
  std::array<double, 4> overlap{};  // s1, t1, s2, t2
};

/// sup|kappa| a < 1, and a sampled self-overlap search: for each mapped
/// sample P = L(s_i, t_j), any other foot point s' with (P - Gamma(s')) . T(s')
/// changing sign and |(P - Gamma(s')) . N(s')| < a is a second preimage. A
/// clean search yields "unknown" except for the straight strip, which is
/// injective outright.
HypothesisReport check_hypotheses(const StripGeometry& g, int t_levels = 9);

/// Uniform grid with n cells on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, int n);

}  // namespace cstrip
