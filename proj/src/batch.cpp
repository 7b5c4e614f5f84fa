#include "curvedstrip/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "curvedstrip/annulus.hpp"
#include "curvedstrip/errors.hpp"
#include "curvedstrip/hardy.hpp"
#include "curvedstrip/transverse.hpp"
#include "numfmt.hpp"

namespace cstrip {

namespace {

using ojson = nlohmann::ordered_json;

// Runs f(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) f(i);
      });
    }
  }
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

ojson problem_json(const StripProblem& p, EndBC end_bc) {
  return ojson{{"a", p.a}, {"s_min", p.s_min}, {"s_max", p.s_max}, {"alpha0", p.alpha0}, {"end_bc", to_string(end_bc)}};
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

void write_field(const RunConfig& c, const Threshold2D& th) {
  if (c.field_out) write_field_csv(*c.field_out, th.pair, th.state.x);
}

}  // namespace

LambdaReport compute_lambda(double kappa, const Robin& alpha, double a, double tol) {
  const TransverseParams p{kappa, alpha, a};
  p.validate();
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const SolveOptions opts{tol};
  LambdaReport r;
  const EigenResult fd = lambda_1d(p, opts);
  r.fd = fd.extrapolated_lambda;
  r.fd_error = fd.error_estimate;
  r.transformed = lambda_1d_transformed(p, opts).extrapolated_lambda;
  r.delta_transformed = std::abs(r.transformed - r.fd);
  if (kappa != 0.0) {
    r.bessel = lambda_bessel(p);
    r.delta_oracle = std::abs(*r.bessel - r.fd);
  } else {
    r.straight = straight_lambda(alpha, a);
    r.delta_oracle = std::abs(*r.straight - r.fd);
  }
  return r;
}

std::vector<SweepRow> sweep(const std::vector<Robin>& alphas, double kappa_min, double kappa_max, int n, double a,
                            double tol, int threads) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("half-width a must be positive and finite");
  if (alphas.empty()) throw ValidationError("sweep needs at least one alpha");
  if (n < 2) throw ValidationError("sweep needs at least 2 points");
  if (!(kappa_min < kappa_max)) throw ValidationError("sweep needs kappa_min < kappa_max");
  if (!(std::abs(kappa_min) * a < 1.0) || !(std::abs(kappa_max) * a < 1.0)) {
    throw ValidationError("sweep range must lie inside (-1/a, 1/a)");
  }
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  for (const Robin& al : alphas) {
    if (!al.is_dirichlet() && !std::isfinite(al.value())) throw ValidationError("alpha must be finite or dirichlet");
  }

  std::vector<SweepRow> rows(alphas.size() * static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    for (int i = 0; i < n; ++i) {
      SweepRow& r = rows[k * n + i];
      r.alpha = alphas[k];
      r.kappa = i == n - 1 ? kappa_max : kappa_min + (kappa_max - kappa_min) * i / (n - 1);
    }
  }
  parallel_for(static_cast<int>(rows.size()), threads, [&](int i) {
    SweepRow& r = rows[i];
    try {
      const TransverseParams p{r.kappa, r.alpha, a};
      r.lambda = lambda_1d(p, SolveOptions{tol}).extrapolated_lambda;
      const double oracle = r.kappa == 0.0 ? straight_lambda(r.alpha, a) : lambda_bessel(p);
      r.delta_oracle = std::abs(r.lambda - oracle);
    } catch (const std::exception& e) {
      r.status = one_line(e.what());
      if (r.status.empty()) r.status = "failed";
    }
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  const bool any_failed = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.status.empty(); });
  std::ostringstream out;
  out << "kappa,alpha,lambda,solver,delta_oracle" << (any_failed ? ",status" : "") << "\n";
  for (const SweepRow& r : rows) {
    out << fmt_double(r.kappa) << ',' << r.alpha.to_string() << ',';
    if (r.status.empty()) {
      out << fmt_double(r.lambda) << ",fd," << fmt_double(r.delta_oracle);
      if (any_failed) out << ",ok";
    } else {
      out << ",fd,," << r.status;
    }
    out << "\n";
  }
  return out.str();
}

double min_dlambda_dkappa(double alpha, double a) {
  std::vector<double> ka;
  for (int i = 1; i <= 19; ++i) ka.push_back(0.05 * i);
  for (double x : {1.5, 2.0, 2.5, 3.0}) ka.push_back(1.0 - std::pow(10.0, -x));
  double m = std::numeric_limits<double>::infinity();
  for (double x : ka) {
    m = std::min(m, dlambda_dkappa({x / a, Robin::finite(alpha), a}, SolveOptions{1e-9}).value);
  }
  return m;
}

CriticalAlpha critical_alpha(double a, double tol) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("half-width a must be positive and finite");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  CriticalAlpha r;
  // Monotone at alpha = 0; decreasing near kappa = 1/a once alpha a is
  // large. Work in alpha a, then scale back.
  double lo = 0.0, hi = 2.0;
  const auto slope = [&](double x) {
    ++r.evaluations;
    return min_dlambda_dkappa(x / a, a);
  };
  if (!(slope(lo) > 0.0)) throw SolverError("d lambda / d kappa is not positive at alpha = 0");
  if (!(slope(hi) < 0.0)) throw SolverError("no loss of monotonicity found below alpha a = 2");
  const double tol_scaled = std::max(tol, 1e-9) * a;
  while (hi - lo > tol_scaled) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  r.bracket_lo = lo / a;
  r.bracket_hi = hi / a;
  r.alpha = 0.5 * (lo + hi) / a;
  return r;
}

RunOutput run_bound2d(const RunConfig& c, double tol) {
  const ThresholdReport r = verify_threshold_bound(c.problem, c.ns, c.nt, tol);
  RunOutput out;
  ojson j;
  j["command"] = "bound2d";
  j["problem"] = problem_json(c.problem, EndBC::neumann);
  j["mesh"] = {{"ns", c.ns}, {"nt", c.nt}};
  j["asserted"] = r.asserted;
  j["lambda_hat"] = r.lambda_hat;
  j["mesh_error"] = r.mesh_error;
  j["tolerance"] = r.tolerance;
  j["lambda_fine"] = r.lambda_fine;
  j["discrete_floor"] = r.discrete_floor;
  j["intermediate"] = {{"value", r.intermediate}, {"s", r.intermediate_at}};
  j["theorem_bound"] = r.theorem_bound;
  j["checks"] = {{"lambda_hat_ge_theorem_bound", r.lambda_above_bound},
                 {"lambda_hat_ge_intermediate", r.lambda_above_intermediate},
                 {"intermediate_ge_theorem_bound",
                  r.intermediate >= r.theorem_bound - 1e-9 * std::max(1.0, std::abs(r.intermediate))},
                 {"discrete_above_floor", r.discrete_intermediate_ok},
                 {"chain", r.chain_ok}};
  out.pass = !r.asserted || (r.chain_ok && r.lambda_above_bound);
  j["status"] = !r.asserted ? "not_asserted" : (out.pass ? "pass" : "fail");
  if (!r.note.empty()) j["note"] = r.note;
  out.report = dump(j);

  std::ostringstream s;
  s << "lambda_hat    " << fmt_double(r.lambda_hat) << "  (mesh error " << fmt_double(r.mesh_error) << ")\n"
    << "intermediate  " << fmt_double(r.intermediate) << "  at s = " << fmt_double(r.intermediate_at) << "\n"
    << "theorem bound " << fmt_double(r.theorem_bound) << "\n"
    << "chain " << (r.asserted ? (r.chain_ok ? "holds" : "FAILS") : "not asserted") << "\n";
  if (!r.note.empty()) s << r.note << "\n";
  out.summary = s.str();
  write_field(c, r.solve);
  return out;
}

RunOutput run_dk(const RunConfig& c, double tol) {
  const DkReport r = dk_upper_bound(c.problem, c.ns, c.nt, tol);
  RunOutput out;
  ojson j;
  j["command"] = "dk";
  j["problem"] = problem_json(c.problem, EndBC::dirichlet);
  j["mesh"] = {{"ns", c.ns}, {"nt", c.nt}};
  j["reference"] = r.reference;
  j["kappa_integral"] = r.kappa_integral;
  ojson rows = ojson::array();
  for (const DkRow& row : r.sweep) {
    rows.push_back({{"s_min", row.s_min},
                    {"s_max", row.s_max},
                    {"lambda", row.lambda},
                    {"mesh_error", row.mesh_error},
                    {"margin", row.margin}});
  }
  j["sweep"] = rows;
  j["margin"] = r.sweep.back().margin;
  j["positive"] = r.positive;
  // A nonpositive margin on a short interval is inconclusive, not a
  // violation: the inequality is only claimed for long enough truncations.
  j["status"] = r.positive ? "positive" : "inconclusive";
  if (!r.note.empty()) j["note"] = r.note;
  out.report = dump(j);

  std::ostringstream s;
  s << "reference lambda(0, alpha0) " << fmt_double(r.reference) << "\n";
  for (const DkRow& row : r.sweep) {
    s << "I = [" << fmt_double(row.s_min) << ", " << fmt_double(row.s_max) << "]  lambda_D " << fmt_double(row.lambda)
      << "  margin " << fmt_double(row.margin) << "  (mesh error " << fmt_double(row.mesh_error) << ")\n";
  }
  s << (r.positive ? "margin positive" : "margin not resolved: inconclusive") << "\n";
  if (!r.note.empty()) s << r.note << "\n";
  out.summary = s.str();
  write_field(c, r.longest);
  return out;
}

RunOutput run_hardy(const RunConfig& c, std::uint64_t seed, int threads) {
  const StripProblem& p = c.problem;
  const MuProfile mu = mu_profile(p);
  HardyCertificate cert = hardy_constant(p, mu);
  cert.epsilon0 = stability_epsilon(p.kappa, p.a, p.s_min, p.s_max, cert);
  const HardyAudit audit = verify_hardy(p, cert, c.trials, seed, c.ns, c.nt, threads);

  // Random checks of the one-dimensional Hardy lemma on smooth fields.
  const int lemma_n = 100, gs = 96, gt = 8;
  std::vector<double> sg(gs + 1), tg(gt + 1);
  for (int i = 0; i <= gs; ++i) sg[i] = p.s_min + (p.s_max - p.s_min) * i / gs;
  for (int j = 0; j <= gt; ++j) tg[j] = -p.a + 2.0 * p.a * j / gt;
  int lemma_fail = 0;
  double lemma_min_gap = std::numeric_limits<double>::infinity();
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x4c454d4du};
  std::mt19937_64 rng(sq);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < lemma_n; ++k) {
    const double c0 = U(rng), c1 = U(rng), c2 = U(rng);
    const double center = 0.5 * (p.s_min + p.s_max) + 0.5 * (p.s_max - p.s_min) * U(rng);
    const double width = 0.5 + 2.0 * (U(rng) + 1.0);
    std::vector<double> psi(sg.size() * tg.size());
    for (std::size_t i = 0; i < sg.size(); ++i) {
      const double x = (sg[i] - center) / width;
      const double f = std::exp(-x * x) * (c0 + c1 * x + c2 * std::sin(3.0 * x));
      for (std::size_t jj = 0; jj < tg.size(); ++jj) {
        psi[i * tg.size() + jj] = f * std::sin(0.25 * std::numbers::pi * (tg[jj] + p.a) / p.a);
      }
    }
    const LemmaCheck lc = hardy_lemma_check(sg, tg, psi, cert.J_lo, cert.J_hi);
    if (!lc.holds) ++lemma_fail;
    if (lc.rhs > 0.0) lemma_min_gap = std::min(lemma_min_gap, (lc.rhs - lc.lhs) / lc.rhs);
  }

  RunOutput out;
  out.pass = audit.pass && lemma_fail == 0;
  ojson j;
  j["command"] = "hardy";
  j["problem"] = problem_json(p, EndBC::neumann);
  j["mesh"] = {{"ns", c.ns}, {"nt", c.nt}};
  j["certificate"] = ojson::parse(cert.to_json());
  j["mu_reference"] = mu.reference;
  j["audit"] = {{"seed", seed},
                {"trials", audit.trials},
                {"violations", audit.violations},
                {"min_ratio", audit.min_ratio},
                {"worst_trial", audit.worst_trial},
                {"ground_ratio", audit.ground_ratio},
                {"tolerance", audit.tolerance},
                {"mesh_error", audit.mesh_error},
                {"pass", audit.pass}};
  j["lemma"] = {{"checks", lemma_n}, {"failures", lemma_fail}, {"min_relative_gap", lemma_min_gap}};
  j["status"] = out.pass ? "pass" : "fail";
  out.report = dump(j);

  std::ostringstream s;
  s << "J = [" << fmt_double(cert.J_lo) << ", " << fmt_double(cert.J_hi) << "]  s0 = " << fmt_double(cert.s0)
    << "  min mu = " << fmt_double(cert.min_mu) << "\n"
    << "c = " << fmt_double(cert.c) << "  epsilon0 = " << fmt_double(cert.epsilon0) << "\n"
    << "audit: " << audit.violations << " violations in " << audit.trials << " trials, min ratio "
    << fmt_double(audit.min_ratio) << " vs c\n"
    << "lemma: " << lemma_fail << " failures in " << lemma_n << " checks\n"
    << (out.pass ? "pass" : "FAIL") << "\n";
  out.summary = s.str();
  return out;
}

RunOutput run_stability(const RunConfig& c, double tol) {
  const StripProblem& p = c.problem;
  const MuProfile mu = mu_profile(p);
  HardyCertificate cert = hardy_constant(p, mu);
  cert.epsilon0 = stability_epsilon(p.kappa, p.a, c.I_lo, c.I_hi, cert);
  const double eps = c.epsilon_fraction * cert.epsilon0;
  const double wmin = stability_weight_min(p.kappa, p.a, c.I_lo, c.I_hi, cert, eps);

  StripProblem q = p;
  q.end_bc = EndBC::neumann;
  q.kappa.add(Bump{-eps, c.neg_center, c.neg_halfwidth});
  const Threshold2D th = threshold_2d(q, c.ns / 2, c.nt / 2, tol);
  const double ref = straight_lambda(Robin::finite(0.0), p.a);
  const double tolerance = 10.0 * th.mesh_error + 1e-9;
  const bool above = th.lambda >= ref - tolerance;

  RunOutput out;
  out.pass = above && wmin >= 0.0;
  ojson j;
  j["command"] = "stability";
  j["problem"] = problem_json(p, EndBC::neumann);
  j["mesh"] = {{"ns", c.ns}, {"nt", c.nt}};
  j["interval"] = {c.I_lo, c.I_hi};
  j["certificate"] = ojson::parse(cert.to_json());
  j["epsilon"] = eps;
  j["negative_bump"] = {{"amplitude", -eps}, {"center", c.neg_center}, {"halfwidth", c.neg_halfwidth}};
  j["weight_min"] = wmin;
  j["lambda_hat"] = th.lambda;
  j["mesh_error"] = th.mesh_error;
  j["tolerance"] = tolerance;
  j["reference"] = ref;
  j["checks"] = {{"weight_nonnegative", wmin >= 0.0}, {"lambda_hat_ge_reference", above}};
  j["status"] = out.pass ? "pass" : "fail";
  out.report = dump(j);

  std::ostringstream s;
  s << "epsilon0 = " << fmt_double(cert.epsilon0) << "  epsilon = " << fmt_double(eps) << "  weight min "
    << fmt_double(wmin) << "\n"
    << "lambda_hat " << fmt_double(th.lambda) << " vs lambda(0,0) " << fmt_double(ref) << "  (tolerance "
    << fmt_double(tolerance) << ")\n"
    << (out.pass ? "pass" : "FAIL") << "\n";
  out.summary = s.str();
  write_field(c, th);
  return out;
}

RunOutput run_config(const RunConfig& c, double tol, std::uint64_t seed, int threads) {
  switch (c.command) {
    case Command::bound2d: return run_bound2d(c, tol);
    case Command::dk: return run_dk(c, tol);
    case Command::hardy: return run_hardy(c, seed, threads);
    case Command::stability: return run_stability(c, tol);
  }
  throw ValidationError("unknown command");
}

}  // namespace cstrip
