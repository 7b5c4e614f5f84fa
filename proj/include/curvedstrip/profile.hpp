#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cstrip {

// Robin coefficient on the outer parallel curve. The Dirichlet limit is a
// separate case, never a large float.
class Robin {
 public:
  static Robin finite(double alpha);
  static Robin dirichlet() { return Robin{}; }

  bool is_dirichlet() const noexcept { return dirichlet_; }
  // Precondition: !is_dirichlet().
  double value() const;

  // "dirichlet" or the number in shortest round-trip form.
  std::string to_string() const;
  static Robin parse(const std::string& token);

  friend bool operator==(const Robin&, const Robin&) = default;

 private:
  Robin() = default;
  bool dirichlet_ = true;
  double alpha_ = 0.0;
};

// Raised-cosine bump: amplitude * cos^2(pi (s - center) / (2 halfwidth)) on
// |s - center| < halfwidth, zero elsewhere. C^1, integral amplitude*halfwidth.
struct Bump {
  double amplitude = 0.0;
  double center = 0.0;
  double halfwidth = 1.0;

  double operator()(double s) const;
  double integral() const { return amplitude * halfwidth; }
};

// Scalar function of arc length: constant base + bumps + optional
// piecewise-linear samples. Used for both curvature and Robin profiles.
class Profile {
 public:
  Profile() = default;
  static Profile constant(double value);
  static Profile bump(double base, Bump b);
  // Piecewise linear through (s[i], v[i]); s strictly increasing, values
  // finite. Outside the sample range the end values are held.
  static Profile samples(std::vector<double> s, std::vector<double> v);
  // Header row "s,<column>" required.
  static Profile from_csv(const std::string& path, const std::string& column = "kappa");

  Profile& add(Bump b);
  Profile scaled(double factor) const;
  Profile plus(const Profile& other) const;

  double operator()(double s) const;

  // max |f| over [lo, hi]: exact on knots and bump centers, dense sampling
  // elsewhere.
  double sup_norm(double lo, double hi) const;
  double inf(double lo, double hi) const;
  double sup(double lo, double hi) const;
  // Closure of {f != 0} intersected with [lo, hi], as [first, last]; empty
  // when f vanishes identically there.
  std::optional<std::pair<double, double>> support(double lo, double hi) const;
  bool is_zero() const;

  double base() const { return base_; }
  const std::vector<Bump>& bumps() const { return bumps_; }
  const std::vector<double>& knots() const { return knot_s_; }
  const std::vector<double>& knot_values() const { return knot_v_; }

 private:
  std::vector<double> critical_points(double lo, double hi) const;

  double base_ = 0.0;
  std::vector<Bump> bumps_;
  std::vector<double> knot_s_;
  std::vector<double> knot_v_;
};

}  // namespace cstrip
