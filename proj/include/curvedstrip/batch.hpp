#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvedstrip/config.hpp"
#include "curvedstrip/profile.hpp"

namespace cstrip {

/// lambda(kappa, alpha) from every available solver.
struct LambdaReport {
  double fd = 0.0;           // weighted form, extrapolated
  double fd_error = 0.0;     // its error estimate
  double transformed = 0.0;  // Schroedinger form, extrapolated
  std::optional<double> bessel;    // annulus oracle (kappa != 0)
  std::optional<double> straight;  // closed form (kappa == 0)
  double delta_transformed = 0.0;
  double delta_oracle = 0.0;  // against bessel or straight
};

LambdaReport compute_lambda(double kappa, const Robin& alpha, double a, double tol);

struct SweepRow {
  double kappa = 0.0;
  Robin alpha = Robin::dirichlet();
  double lambda = 0.0;
  double delta_oracle = 0.0;
  std::string status;  // empty on success
};

/// Alpha-major grid of n points over [kappa_min, kappa_max] per alpha.
/// Points run on `threads` workers; rows keep input order.
std::vector<SweepRow> sweep(const std::vector<Robin>& alphas, double kappa_min, double kappa_max, int n, double a,
                            double tol, int threads);

/// Header kappa,alpha,lambda,solver,delta_oracle; a trailing status column
/// appears only when some point failed.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct CriticalAlpha {
  double alpha = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int evaluations = 0;
};

/// min over kappa in (0, 1/a) of d lambda / d kappa, on a grid that
/// approaches 1/a geometrically (the minimum sits at that end for the
/// alphas of interest).
double min_dlambda_dkappa(double alpha, double a);

/// Bisection on alpha of the sign of min_dlambda_dkappa.
CriticalAlpha critical_alpha(double a, double tol);

/// Outcome of a config-driven run.
struct RunOutput {
  std::string report;   // JSON
  std::string summary;  // human-readable lines
  bool pass = true;     // every asserted inequality held
};

RunOutput run_bound2d(const RunConfig& c, double tol);
RunOutput run_dk(const RunConfig& c, double tol);
RunOutput run_hardy(const RunConfig& c, std::uint64_t seed, int threads);
RunOutput run_stability(const RunConfig& c, double tol);
RunOutput run_config(const RunConfig& c, double tol, std::uint64_t seed, int threads);

}  // namespace cstrip
