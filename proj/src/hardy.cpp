#include "curvedstrip/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <json.hpp>

#include "curvedstrip/errors.hpp"
#include "curvedstrip/transverse.hpp"
#include "numfmt.hpp"

namespace cstrip {

namespace {

double local_lambda(const StripProblem& p, double s) {
  return lambda_1d({p.kappa(s), Robin::finite(p.alpha(s)), p.a}, {1e-11}).extrapolated_lambda;
}

}  // namespace

void check_hardy_hypotheses(const StripProblem& p) {
  p.validate();
  const double lo = p.s_min, hi = p.s_max;
  if (p.kappa.inf(lo, hi) < 0.0) throw ValidationError("hypothesis kappa >= 0 violated");
  if (p.alpha.sup(lo, hi) > 0.0) throw ValidationError("hypothesis alpha <= 0 violated");
  if (p.alpha.inf(lo, hi) < p.alpha0) throw ValidationError("hypothesis alpha >= alpha0 violated");
  const double dk = p.kappa.sup_norm(lo, hi);
  const double da = p.alpha.plus(Profile::constant(-p.alpha0)).sup_norm(lo, hi);
  if (dk == 0.0 && da == 0.0) {
    throw ValidationError("hypothesis violated: kappa and alpha - alpha0 both vanish identically");
  }
}

double mu_at(const StripProblem& p, double s) {
  return local_lambda(p, s) - straight_lambda(Robin::finite(p.alpha0), p.a);
}

MuProfile mu_profile(const StripProblem& p, int samples) {
  check_hardy_hypotheses(p);
  samples = std::max(samples, 3);
  MuProfile out;
  out.reference = straight_lambda(Robin::finite(p.alpha0), p.a);
  out.s.resize(samples);
  out.mu.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double s = p.s_min + (p.s_max - p.s_min) * i / (samples - 1);
    out.s[i] = s;
    out.mu[i] = local_lambda(p, s) - out.reference;
  }
  return out;
}

double hardy_c(double min_mu, double J_length, double supnorm_kappa, double a) {
  const double ka = supnorm_kappa * a;
  const double first = (1.0 - ka) * min_mu / ((2.0 + 64.0 / (J_length * J_length)) * (1.0 + ka));
  const double second = 1.0 / (16.0 * (1.0 + ka) * (1.0 + ka));
  return std::min(first, second);
}

double HardyCertificate::recompute_c() const { return hardy_c(min_mu, length(), supnorm_kappa, a); }

std::string HardyCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["J"] = {J_lo, J_hi};
  j["s0"] = s0;
  j["min_mu"] = min_mu;
  j["c"] = c;
  j["supnorm_kappa"] = supnorm_kappa;
  j["a"] = a;
  j["epsilon0"] = epsilon0;
  return j.dump();
}

HardyCertificate hardy_constant(const StripProblem& p, const MuProfile& mu) {
  check_hardy_hypotheses(p);
  const double thresh = 1e-9 * std::max(1.0, std::abs(mu.reference));
  double first = std::numeric_limits<double>::infinity(), last = -first;
  for (std::size_t i = 0; i < mu.s.size(); ++i) {
    if (mu.mu[i] > thresh) {
      first = std::min(first, mu.s[i]);
      last = std::max(last, mu.s[i]);
    }
  }
  if (!(last > first)) throw ValidationError("hypotheses give no positive interval at this resolution");

  constexpr int kPieces = 32, kPerPiece = 8;
  const double w = (last - first) / kPieces;
  std::vector<double> fine(kPieces * kPerPiece + 1);
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = mu_at(p, first + (last - first) * i / (fine.size() - 1));
  std::vector<double> piece_min(kPieces);
  for (int k = 0; k < kPieces; ++k) {
    piece_min[k] = *std::min_element(fine.begin() + k * kPerPiece, fine.begin() + (k + 1) * kPerPiece + 1);
  }

  const double supk = p.kappa.sup_norm(p.s_min, p.s_max);
  HardyCertificate best;
  best.a = p.a;
  best.supnorm_kappa = supk;
  best.c = -1.0;
  for (int i = 0; i < kPieces; ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = i; j < kPieces; ++j) {
      m = std::min(m, piece_min[j]);
      if (!(m > thresh)) break;
      const double len = (j + 1 - i) * w;
      const double c = hardy_c(m, len, supk, p.a);
      if (c > best.c) {
        best.c = c;
        best.min_mu = m;
        best.J_lo = first + i * w;
        best.J_hi = j + 1 == kPieces ? last : first + (j + 1) * w;
      }
    }
  }
  if (!(best.c > 0.0)) throw ValidationError("hypotheses give no positive interval at this resolution");

  constexpr int kDense = 513;
  for (int i = 0; i < kDense; ++i) {
    best.min_mu = std::min(best.min_mu, mu_at(p, best.J_lo + best.length() * i / (kDense - 1)));
  }
  best.s0 = 0.5 * (best.J_lo + best.J_hi);
  best.c = best.recompute_c();
  if (!(best.c > 0.0)) throw ValidationError("hypotheses give no positive interval at this resolution");
  return best;
}

namespace {

struct TrialResult {
  double ratio = 0.0;
  bool violated = false;
};

}  // namespace

HardyAudit verify_hardy(const StripProblem& p_in, const HardyCertificate& cert, int trials, std::uint64_t seed, int ns,
                        int nt, int threads) {
  if (trials < 0) throw ValidationError("trial count must be nonnegative");
  if (ns < 4 || nt < 4 || ns % 2 || nt % 2) throw ValidationError("audit mesh needs even ns, nt >= 4");
  StripProblem p = p_in;
  p.end_bc = EndBC::neumann;
  check_hardy_hypotheses(p);

  const Threshold2D th = threshold_2d(p, ns / 2, nt / 2);
  const SparsePair& pair = th.pair;
  const double lam0 = straight_lambda(Robin::finite(p.alpha0), p.a);
  const DiscreteEigenpair straight = lowest_eigenpair(assemble_1d({0.0, Robin::finite(p.alpha0), p.a}, nt));

  HardyAudit out;
  out.trials = trials;
  out.mesh_error = std::max(th.mesh_error, std::abs(straight.lambda - lam0));
  out.tolerance = 10.0 * out.mesh_error;

  const int n = pair.dofs();
  Eigen::VectorXd mrho(n);
  for (int d = 0; d < n; ++d) {
    const double ds = pair.s_node(pair.dof_s[d]) - cert.s0;
    mrho[d] = pair.M[d] / (1.0 + ds * ds);
  }
  const auto judge = [&](const Eigen::VectorXd& x) {
    const double e = pair.energy(x);
    const double m = pair.mass_norm2(x);
    const double r = x.dot(mrho.cwiseProduct(x));
    const double lhs = e - lam0 * m;
    return TrialResult{lhs / r, lhs < cert.c * r - out.tolerance * m};
  };

  // Transverse factor: the discrete straight ground state (nodes j = 1..nt).
  const std::vector<double>& phi = straight.vec;
  const double len = p.s_max - p.s_min;
  const auto make_trial = [&](int k) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(k)};
    std::mt19937_64 gen(sq);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    std::vector<double> env(pair.ns + 1, 0.0);
    std::vector<double> tprof(phi);
    switch (k % 4) {
      case 0: {  // a few Gaussian bumps
        const int count = 1 + static_cast<int>(unif(gen) * 4);
        for (int q = 0; q < count; ++q) {
          const double c = p.s_min + len * unif(gen);
          const double w = 0.2 * std::pow(len / 0.4, unif(gen));
          const double amp = gauss(gen);
          for (int i = 0; i <= pair.ns; ++i) {
            const double z = (pair.s_node(i) - c) / w;
            env[i] += amp * std::exp(-z * z);
          }
        }
        break;
      }
      case 1: {  // low longitudinal modes, including the constant one
        for (int m = 0; m <= 8; ++m) {
          const double amp = gauss(gen) / (1.0 + m);
          for (int i = 0; i <= pair.ns; ++i) {
            env[i] += amp * std::cos(m * std::numbers::pi * (pair.s_node(i) - p.s_min) / len);
          }
        }
        break;
      }
      case 2:  // rough envelope
        for (double& v : env) v = gauss(gen);
        break;
      default: {  // smooth envelope, perturbed transverse profile
        const double c = p.s_min + len * unif(gen);
        const double w = 0.5 + len * unif(gen);
        for (int i = 0; i <= pair.ns; ++i) {
          const double z = (pair.s_node(i) - c) / w;
          env[i] = std::exp(-z * z);
        }
        for (int q = 1; q <= 3; ++q) {
          const double b = 0.3 * gauss(gen);
          for (int j = 1; j <= pair.nt; ++j) {
            tprof[j - 1] += b * std::sin((2 * q + 1) * std::numbers::pi * (pair.t_node(j) + p.a) / (4.0 * p.a));
          }
        }
        break;
      }
    }
    Eigen::VectorXd x(n);
    for (int d = 0; d < n; ++d) x[d] = env[pair.dof_s[d]] * tprof[pair.dof_t[d] - 1];
    return x;
  };

  std::vector<TrialResult> results(trials);
  threads = std::clamp(threads, 1, std::max(1, trials));
  const auto work = [&](int first, int stride) {
    for (int k = first; k < trials; k += stride) {
      const Eigen::VectorXd x = make_trial(k);
      results[k] = x.squaredNorm() > 0.0 ? judge(x) : TrialResult{std::numeric_limits<double>::infinity(), false};
    }
  };
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }

  const TrialResult ground = judge(th.state.x);
  out.ground_ratio = ground.ratio;
  out.min_ratio = ground.ratio;
  out.worst_trial = -1;
  out.violations = ground.violated ? 1 : 0;
  for (int k = 0; k < trials; ++k) {
    if (results[k].violated) ++out.violations;
    if (results[k].ratio < out.min_ratio) {
      out.min_ratio = results[k].ratio;
      out.worst_trial = k;
    }
  }
  out.pass = out.violations == 0;
  return out;
}

LemmaCheck hardy_lemma_check(const std::vector<double>& s, const std::vector<double>& t, const std::vector<double>& psi,
                             double J_lo, double J_hi) {
  const std::size_t ns = s.size(), nt = t.size();
  if (ns < 2 || nt < 1 || psi.size() != ns * nt) throw ValidationError("field size does not match the grid");
  if (!(J_hi > J_lo)) throw ValidationError("J must have positive length");
  const double s0 = 0.5 * (J_lo + J_hi);
  const double jl = J_hi - J_lo;
  std::vector<double> wt(nt, 1.0);
  if (nt > 1) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double left = j > 0 ? t[j] - t[j - 1] : 0.0;
      const double right = j + 1 < nt ? t[j + 1] - t[j] : 0.0;
      wt[j] = 0.5 * (left + right);
    }
  }
  LemmaCheck out;
  double grad = 0.0, onj = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    const double lo = i > 0 ? 0.5 * (s[i - 1] + s[i]) : s[0];
    const double hi = i + 1 < ns ? 0.5 * (s[i] + s[i + 1]) : s[ns - 1];
    const double ws = hi - lo;
    const double wj = std::max(0.0, std::min(hi, J_hi) - std::max(lo, J_lo));
    const double rho2 = 1.0 + (s[i] - s0) * (s[i] - s0);
    for (std::size_t j = 0; j < nt; ++j) {
      const double v = psi[i * nt + j];
      out.lhs += ws * wt[j] * v * v / rho2;
      onj += wj * wt[j] * v * v;
      if (i + 1 < ns) {
        const double dv = psi[(i + 1) * nt + j] - v;
        grad += wt[j] * dv * dv / (s[i + 1] - s[i]);
      }
    }
  }
  out.rhs = 16.0 * grad + (2.0 + 64.0 / (jl * jl)) * onj;
  out.holds = out.lhs <= out.rhs;
  return out;
}

namespace {

double plus_norm(const Profile& kappa_plus, double I_lo, double I_hi, const HardyCertificate& cert) {
  if (kappa_plus.inf(I_lo, I_hi) < 0.0) throw ValidationError("kappa_plus must be nonnegative");
  if (kappa_plus.is_zero()) throw ValidationError("kappa_plus must not vanish identically");
  return std::max(cert.supnorm_kappa, kappa_plus.sup_norm(I_lo, I_hi));
}

}  // namespace

double stability_epsilon(const Profile& kappa_plus, double a, double I_lo, double I_hi, const HardyCertificate& cert) {
  if (!(a > 0.0) || !(I_hi >= I_lo)) throw ValidationError("stability threshold needs a > 0 and a nonempty interval");
  const double ka = plus_norm(kappa_plus, I_lo, I_hi, cert) * a;
  if (!(ka < 1.0)) throw ValidationError("hypothesis sup|kappa_plus| a < 1 violated");
  const double far = std::max(std::abs(I_lo - cert.s0), std::abs(I_hi - cert.s0));
  const double lam00 = straight_lambda(Robin::finite(0.0), a);
  const double eps = (cert.c / 4.0) / (1.0 + far * far) * (1.0 - ka) / (lam00 * a);
  return std::min(eps, (1.0 - ka) / (2.0 * a));
}

double stability_weight_min(const Profile& kappa_plus, double a, double I_lo, double I_hi, const HardyCertificate& cert,
                            double eps) {
  const double ka = plus_norm(kappa_plus, I_lo, I_hi, cert) * a;
  const double lam00 = straight_lambda(Robin::finite(0.0), a);
  const double drop = lam00 * eps * a / (1.0 - ka);
  double w = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 4097;
  for (int i = 0; i < kSamples; ++i) {
    const double s = I_lo + (I_hi - I_lo) * i / (kSamples - 1);
    w = std::min(w, (cert.c / 4.0) / (1.0 + (s - cert.s0) * (s - cert.s0)) - drop);
  }
  return w;
}

}  // namespace cstrip
