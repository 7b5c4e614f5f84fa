#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvedstrip/strip2d.hpp"

namespace cstrip {

/// mu(s) = lambda(kappa(s), alpha(s)) - lambda(0, alpha0) on a uniform grid.
struct MuProfile {
  std::vector<double> s;
  std::vector<double> mu;
  double reference = 0.0;  // lambda(0, alpha0)
};

/// Throws ValidationError naming the failing hypothesis: kappa >= 0,
/// alpha0 <= alpha <= 0 on I, and not both kappa == 0 and alpha == alpha0.
void check_hardy_hypotheses(const StripProblem& p);

/// Requires kappa >= 0, alpha0 <= alpha <= 0 on I, and not both kappa == 0
/// and alpha == alpha0; the failing hypothesis is named in the
/// ValidationError.
MuProfile mu_profile(const StripProblem& p, int samples = 257);

/// mu at a single point (same solver settings as mu_profile).
double mu_at(const StripProblem& p, double s);

struct HardyCertificate {
  double J_lo = 0.0, J_hi = 0.0;
  double s0 = 0.0;
  double min_mu = 0.0;
  double c = 0.0;
  double supnorm_kappa = 0.0;
  double a = 1.0;
  double epsilon0 = 0.0;  // for the problem's interval; 0 when not computed

  double length() const { return J_hi - J_lo; }
  // c from the stored fields.
  double recompute_c() const;
  std::string to_json() const;
};

/// min{ (1 - k a) m / ((2 + 64/|J|^2)(1 + k a)), 1 / (16 (1 + k a)^2) }.
double hardy_c(double min_mu, double J_length, double supnorm_kappa, double a);

/// Searches unions of consecutive pieces of a 32-piece split of the hull of
/// {mu > 0}, keeps the J with the largest c; s0 is its midpoint. min_mu is
/// confirmed by dense sampling of J.
HardyCertificate hardy_constant(const StripProblem& p, const MuProfile& mu);

struct HardyAudit {
  int trials = 0;
  int violations = 0;
  double min_ratio = 0.0;  // (h[psi] - lambda0 |psi|^2) / |rho^{-1} psi|^2
  int worst_trial = -1;    // -1: the ground state
  double ground_ratio = 0.0;
  double tolerance = 0.0;  // per unit |psi|^2
  double mesh_error = 0.0;
  bool pass = false;
};

/// Randomized audit of h[psi] - lambda(0, alpha0)|psi|^2 >= c |rho^{-1} psi|^2
/// on the Neumann-truncated strip at (ns, nt), plus the discrete ground
/// state. Trial k draws from a generator seeded with (seed, k).
HardyAudit verify_hardy(const StripProblem& p, const HardyCertificate& cert, int trials, std::uint64_t seed, int ns,
                        int nt, int threads = 1);

struct LemmaCheck {
  double lhs = 0.0;  // int rho^{-2} |psi|^2
  double rhs = 0.0;  // 16 int |d_s psi|^2 + (2 + 64/|J|^2) int_J |psi|^2
  bool holds = false;
};

/// psi on the (s, t) node grid, s-major; plain ds dt measure, trapezoid in
/// both directions, forward differences in s.
LemmaCheck hardy_lemma_check(const std::vector<double>& s, const std::vector<double>& t,
                             const std::vector<double>& psi, double J_lo, double J_hi);

/// Largest epsilon for which the weight
///   (c/4)/(1 + (s - s0)^2) - lambda(0,0) eps a chi_I(s) / (1 - |kappa_+| a)
/// stays nonnegative, capped at (1 - |kappa_+| a)/(2a).
double stability_epsilon(const Profile& kappa_plus, double a, double I_lo, double I_hi, const HardyCertificate& cert);

/// Minimum of that weight over a dense sample of I.
double stability_weight_min(const Profile& kappa_plus, double a, double I_lo, double I_hi, const HardyCertificate& cert,
                            double eps);

}  // namespace cstrip
