// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvedstrip/annulus.hpp"
#include "curvedstrip/batch.hpp"
#include "curvedstrip/config.hpp"
#include "curvedstrip/strip2d.hpp"
#include "curvedstrip/transverse.hpp"

using namespace cstrip;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  failed: " << what << "\n";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0) {
    std::ostringstream lim;
    lim << "runtime " << secs << " s within " << limit_s << " s";
    o.require(secs < limit_s, lim.str());
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs);
  std::fputs(o.detail.str().c_str(), stdout);
  std::fflush(stdout);
}

double lam(double kappa, const Robin& alpha, double a = 1.0, double tol = 1e-10) {
  return lambda_1d({kappa, alpha, a}, SolveOptions{tol}).extrapolated_lambda;
}

std::string str(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

StripProblem strip(Profile kappa, Profile alpha, double alpha0) {
  StripProblem p;
  p.a = 1.0;
  p.s_min = -6.0;
  p.s_max = 6.0;
  p.kappa = std::move(kappa);
  p.alpha = std::move(alpha);
  p.alpha0 = alpha0;
  return p;
}

RunConfig config(const std::string& name, Command c) { return load_config(std::string(CONFIG_DIR) + "/" + name, c); }

}  // namespace

int main() {
  const double j01 = 2.404825557695773;

  criterion(1, "straight-strip thresholds pi^2/4 and pi^2/16", 2.0, [](Outcome& o) {
    for (auto [alpha, exact] : {std::pair{Robin::dirichlet(), pi * pi / 4}, {Robin::finite(0.0), pi * pi / 16}}) {
      const auto t0 = std::chrono::steady_clock::now();
      const double v = lam(0.0, alpha);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      o.detail << "  alpha " << alpha.to_string() << ": " << str(v) << " vs " << str(exact) << "\n";
      o.require(std::abs(v - exact) <= 1e-4, "lambda within 1e-4 for alpha " + alpha.to_string());
      o.require(secs < 1.0, "single solve under 1 s");
    }
  });

  criterion(2, "disc limits nu(dirichlet) = j01^2/4, nu(0) = 0", 1.0, [&](Outcome& o) {
    const double d = disc_nu(Robin::dirichlet(), 1.0).extrapolated_lambda;
    const double n = disc_nu(Robin::finite(0.0), 1.0).extrapolated_lambda;
    o.detail << "  nu(dirichlet) " << str(d) << "  nu(0) " << str(n) << "\n";
    o.require(std::abs(d - j01 * j01 / 4) <= 1e-4, "nu(dirichlet) within 1e-4");
    o.require(std::abs(n) <= 1e-8, "nu(0) within 1e-8");
  });

  criterion(3, "oracle triangulation on 20 random (kappa, alpha)", 30.0, [](Outcome& o) {
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> K(-0.9, 0.9), A(-2.0, 2.0);
    double worst_t = 0.0, worst_b = 0.0;
    for (int i = 0; i < 20; ++i) {
      double k = K(rng);
      if (std::abs(k) < 1e-3) k = 0.5;
      const TransverseParams p{k, Robin::finite(A(rng)), 1.0};
      const double fd = lambda_1d(p, SolveOptions{1e-10}).extrapolated_lambda;
      const double tr = lambda_1d_transformed(p, SolveOptions{1e-10}).extrapolated_lambda;
      worst_t = std::max(worst_t, std::abs(fd - tr));
      worst_b = std::max(worst_b, std::abs(fd - lambda_bessel(p)));
    }
    o.detail << "  max |fd - transformed| " << str(worst_t) << "  max |fd - bessel| " << str(worst_b) << "\n";
    o.require(worst_t <= 1e-6, "transformed within 1e-6");
    o.require(worst_b <= 1e-4, "bessel within 1e-4");
  });

  criterion(4, "transverse property suite", 120.0, [&](Outcome& o) {
    const std::vector<double> alphas{-2.0, -1.0, 0.0, 1.0, 2.0};
    // Monotone in alpha.
    for (int i = 0; i < 9; ++i) {
      const double k = -0.8 + 0.2 * i;
      double prev = -1e300;
      for (double al : alphas) {
        const double v = lam(k, Robin::finite(al));
        o.require(v > prev + 1e-8, "increasing in alpha at kappa " + str(k));
        prev = v;
      }
      o.require(lam(k, Robin::dirichlet()) > prev + 1e-8, "dirichlet above alpha = 2 at kappa " + str(k));
    }
    // Monotone in kappa: on (-1/a, 0] for every alpha, on the whole range for alpha <= 0.
    std::vector<Robin> all;
    for (double al : alphas) all.push_back(Robin::finite(al));
    all.push_back(Robin::dirichlet());
    for (const Robin& al : all) {
      const bool whole = !al.is_dirichlet() && al.value() <= 0.0;
      double prev = -1e300;
      for (int i = 0; i <= (whole ? 38 : 19); ++i) {
        const double k = -0.95 + 0.05 * i;
        const double v = lam(k, al);
        o.require(v > prev, "increasing in kappa for alpha " + al.to_string() + " at " + str(k));
        prev = v;
      }
    }
    // Boundary limits at kappa = -+0.999, with the gap shrinking over
    // kappa = -+(1 - 10^-k), k = 2..4. nu(0) = 0, so that gap is taken
    // relative to nu(dirichlet).
    const double nu_d = disc_nu(Robin::dirichlet(), 1.0).extrapolated_lambda;
    for (const Robin& al : all) {
      const double nu = disc_nu(al, 1.0).extrapolated_lambda;
      const double scale = std::max(std::abs(nu), al.is_dirichlet() || al.value() != 0.0 ? 0.0 : nu_d);
      double prev_lo = 1e300, prev_hi = 1e300;
      for (int e = 2; e <= 4; ++e) {
        const double k = 1.0 - std::pow(10.0, -e);
        const double d_lo = std::abs(lam(-k, al, 1.0, 1e-8) - nu), d_hi = std::abs(lam(k, al, 1.0, 1e-8) - nu_d);
        o.require(d_lo < prev_lo, "gap to nu(alpha) shrinks at k = " + std::to_string(e) + " for alpha " + al.to_string());
        o.require(d_hi < prev_hi, "gap to nu(dirichlet) shrinks at k = " + std::to_string(e) + " for alpha " + al.to_string());
        prev_lo = d_lo;
        prev_hi = d_hi;
      }
      const double lo = lam(-0.999, al, 1.0, 1e-8), hi = lam(0.999, al, 1.0, 1e-8);
      const double g_lo = std::abs(lo - nu) / scale, g_hi = std::abs(hi - nu_d) / nu_d;
      o.detail << "  alpha " << al.to_string() << ": lambda(-0.999) " << str(lo) << " vs nu(alpha) " << str(nu)
               << " (gap " << str(100 * g_lo) << "%), lambda(0.999) " << str(hi) << " vs nu(dirichlet) "
               << str(nu_d) << " (gap " << str(100 * g_hi) << "%)\n";
      o.require(g_lo < 0.02, "kappa -> -1/a limit within 2% for alpha " + al.to_string());
      o.require(g_hi < 0.02, "kappa -> +1/a limit within 2% for alpha " + al.to_string());
    }
    // Dirichlet evenness.
    double odd = 0.0;
    for (int i = 1; i <= 9; ++i) {
      const double k = 0.1 * i;
      odd = std::max(odd, std::abs(lam(k, Robin::dirichlet()) - lam(-k, Robin::dirichlet())));
    }
    o.detail << "  dirichlet max |lambda(k) - lambda(-k)| " << str(odd) << "\n";
    o.require(odd <= 1e-5, "dirichlet evenness within 1e-5");
    // Scaling law.
    double scale = 0.0;
    for (double a : {0.5, 2.0}) {
      for (auto [k, al] : {std::pair{0.4, -0.7}, {-0.6, 1.3}, {0.8, 0.0}}) {
        const double lhs = lam(k / a, Robin::finite(al / a), a, 1e-12);
        const double rhs = lam(k, Robin::finite(al), 1.0, 1e-12) / (a * a);
        scale = std::max(scale, std::abs(lhs - rhs) / std::abs(rhs));
      }
    }
    o.detail << "  scaling max relative deviation " << str(scale) << "\n";
    o.require(scale <= 1e-6, "scaling law within 1e-6");
  });

  criterion(5, "derivative formula vs central differences", 0.0, [](Outcome& o) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> K(-0.8, 0.8), A(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double k = K(rng), al = A(rng), h = 1e-4;
      const double d = dlambda_dkappa({k, Robin::finite(al), 1.0}, SolveOptions{1e-11}).value;
      const double fd = (lam(k + h, Robin::finite(al), 1.0, 1e-12) - lam(k - h, Robin::finite(al), 1.0, 1e-12)) / (2 * h);
      worst = std::max(worst, std::abs(d - fd) / std::max(std::abs(fd), 1e-12));
    }
    o.detail << "  max relative error " << str(worst) << "\n";
    o.require(worst <= 1e-3, "relative error within 1e-3");
  });

  criterion(6, "zero-eigenvalue locus", 0.0, [](Outcome& o) {
    const auto k0 = zero_eigen_kappa(-1.0, 1.0);
    o.require(k0.has_value(), "root exists for alpha = -1");
    if (k0) {
      const double v = lambda_bessel({*k0, Robin::finite(-1.0), 1.0});
      o.detail << "  kappa0 " << str(*k0) << "  lambda_bessel " << str(v) << "\n";
      o.require(std::abs(v) <= 1e-5, "|lambda_bessel(kappa0)| within 1e-5");
    }
    o.require(straight_lambda(Robin::finite(-0.5), 1.0) == 0.0, "straight_lambda(-1/(2a)) is exactly 0");
  });

  criterion(7, "2D Neumann-truncated threshold above the transverse bound", 300.0, [](Outcome& o) {
    std::vector<std::pair<std::string, StripProblem>> problems;
    problems.emplace_back("negative bump, alpha 1",
                          strip(Profile::bump(0.0, {-0.4, 0.0, 2.0}), Profile::constant(1.0), 1.0));
    problems.emplace_back("negative bump, mixed-sign alpha",
                          strip(Profile::bump(0.0, {-0.3, 0.0, 1.5}), Profile::bump(0.4, {-0.9, 1.0, 1.5}), -0.5));
    problems.emplace_back("positive bump, alpha -0.5",
                          strip(Profile::bump(0.0, {0.4, 0.0, 1.0}), Profile::constant(-0.5), -0.5));
    Profile two = Profile::bump(0.0, {0.3, -2.0, 1.0});
    two.add({-0.3, 2.0, 1.0});
    problems.emplace_back("sign-changing kappa, alpha bump <= 0",
                          strip(two, Profile::bump(0.0, {-0.6, 0.0, 1.0}), -0.6));
    problems.emplace_back("constant kappa -0.2, mixed-sign alpha",
                          strip(Profile::constant(-0.2), Profile::bump(-0.3, {0.8, 0.0, 2.0}), -0.3));
    for (auto& [name, p] : problems) {
      const ThresholdReport r = verify_threshold_bound(p, 128, 128);
      o.detail << "  " << name << ": lambda_hat " << str(r.lambda_hat) << " >= intermediate " << str(r.intermediate)
               << " >= bound " << str(r.theorem_bound) << "  (tolerance " << str(r.tolerance) << ")\n";
      o.require(r.asserted, name + ": hypotheses hold");
      o.require(r.lambda_above_bound, name + ": lambda_hat >= bound - tolerance");
      o.require(r.chain_ok, name + ": chain");
    }
  });

  criterion(8, "Dirichlet truncation on [-20, 20] below pi^2/16", 0.0, [](Outcome& o) {
    const RunConfig c = config("dk_negative_bump.json", Command::dk);
    const DkReport fine = dk_upper_bound(c.problem, c.ns, c.nt);
    const DkReport coarse = dk_upper_bound(c.problem, c.ns / 2, c.nt / 2);
    const double mf = fine.sweep.back().margin, mc = coarse.sweep.back().margin;
    o.detail << "  kappa integral " << str(fine.kappa_integral) << "  margin " << str(mf) << " (coarse " << str(mc)
             << ")\n";
    o.require(fine.kappa_integral < 0.0, "negative curvature integral");
    o.require(c.problem.s_min == -20.0 && c.problem.s_max == 20.0, "interval [-20, 20]");
    o.require(mf > 1e-3, "margin above 1e-3");
    o.require(mc > 1e-3, "margin above 1e-3 on the coarser mesh");
  });

  criterion(9, "Hardy certificate: 1000-trial audit and 100 lemma checks", 0.0, [](Outcome& o) {
    const RunConfig c = config("hardy_positive_bump.json", Command::hardy);
    const auto j = nlohmann::json::parse(run_hardy(c, 7, 1).report);
    o.detail << "  c " << str(j["certificate"]["c"]) << "  violations " << j["audit"]["violations"] << " / "
             << j["audit"]["trials"] << "  min ratio " << str(j["audit"]["min_ratio"]) << "  lemma failures "
             << j["lemma"]["failures"] << " / " << j["lemma"]["checks"] << "\n";
    o.require(j["audit"]["trials"] == 1000, "1000 trials");
    o.require(j["audit"]["violations"] == 0, "no violations");
    o.require(j["lemma"]["checks"] == 100 && j["lemma"]["failures"] == 0, "lemma holds on 100 fields");
  });

  criterion(10, "stability under a small negative bump", 0.0, [](Outcome& o) {
    const RunConfig c = config("stability_dn.json", Command::stability);
    o.require(c.epsilon_fraction == 0.5, "epsilon = epsilon0 / 2");
    const auto j = nlohmann::json::parse(run_stability(c, 1e-9).report);
    o.detail << "  epsilon " << str(j["epsilon"]) << "  lambda_hat " << str(j["lambda_hat"]) << " vs "
             << str(j["reference"]) << " - " << str(j["tolerance"]) << "\n";
    o.require(j["epsilon"].get<double>() > 0.0, "nonzero perturbation");
    o.require(j["checks"]["lambda_hat_ge_reference"] == true, "lambda_hat >= lambda(0,0) - tolerance");
  });

  criterion(11, "critical alpha for a = 1", 300.0, [](Outcome& o) {
    const CriticalAlpha c = critical_alpha(1.0, 1e-6);
    o.detail << "  alpha " << str(c.alpha) << " after " << c.evaluations << " slope minimizations\n";
    o.require(c.alpha >= 0.73 && c.alpha <= 0.83, "alpha in [0.73, 0.83]");
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
