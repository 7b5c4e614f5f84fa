#include "curvedstrip/strip2d.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "curvedstrip/errors.hpp"
#include "curvedstrip/transverse.hpp"
#include "numfmt.hpp"

namespace cstrip {

const char* to_string(EndBC e) { return e == EndBC::neumann ? "neumann" : "dirichlet"; }

void StripProblem::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("half-width a must be positive and finite");
  if (!std::isfinite(s_min) || !std::isfinite(s_max) || !(s_max > s_min)) {
    throw ValidationError("interval needs finite s_min < s_max");
  }
  if (!std::isfinite(alpha0)) throw ValidationError("alpha0 must be finite");
  const double k = kappa.sup_norm(s_min, s_max);
  if (!std::isfinite(k)) throw ValidationError("curvature profile is not finite");
  if (!(k * a < 1.0)) {
    throw ValidationError("hypothesis sup|kappa| a < 1 violated (sup|kappa| a = " + fmt_double(k * a) + ")");
  }
  if (!std::isfinite(alpha.sup_norm(s_min, s_max))) throw ValidationError("Robin profile is not finite");
}

namespace {

struct CellKey {
  double kappa, alpha;
  bool operator<(const CellKey& o) const { return kappa != o.kappa ? kappa < o.kappa : alpha < o.alpha; }
};

}  // namespace

SparsePair assemble_2d(const StripProblem& p, int ns, int nt) {
  p.validate();
  if (ns < 2 || nt < 2) throw ValidationError("2D mesh needs at least 2 cells per direction");
  SparsePair out;
  out.ns = ns;
  out.nt = nt;
  out.a = p.a;
  out.s_min = p.s_min;
  out.s_max = p.s_max;
  out.hs = (p.s_max - p.s_min) / ns;
  out.ht = 2.0 * p.a / nt;
  const double hs = out.hs, ht = out.ht;

  const bool dir_ends = p.end_bc == EndBC::dirichlet;
  out.node_to_dof.assign(static_cast<std::size_t>(ns + 1) * (nt + 1), -1);
  for (int i = 0; i <= ns; ++i) {
    if (dir_ends && (i == 0 || i == ns)) continue;
    for (int j = 1; j <= nt; ++j) {
      out.node_to_dof[static_cast<std::size_t>(i) * (nt + 1) + j] = static_cast<int>(out.dof_s.size());
      out.dof_s.push_back(i);
      out.dof_t.push_back(j);
    }
  }
  const int n = static_cast<int>(out.dof_s.size());
  if (n == 0) throw ValidationError("mesh has no free unknowns");
  out.M = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(ns) * nt * 12);
  const auto couple = [&](int i1, int j1, int i2, int j2, double w) {
    const int d1 = out.index(i1, j1), d2 = out.index(i2, j2);
    if (d1 >= 0) trip.emplace_back(d1, d1, w);
    if (d2 >= 0) trip.emplace_back(d2, d2, w);
    if (d1 >= 0 && d2 >= 0) {
      trip.emplace_back(d1, d2, -w);
      trip.emplace_back(d2, d1, -w);
    }
  };

  std::map<CellKey, double> floor_cache;
  double floor = std::numeric_limits<double>::infinity();
  for (int c = 0; c < ns; ++c) {
    const double sm = p.s_min + (c + 0.5) * hs;
    const double kc = p.kappa(sm);
    const double ac = p.alpha(sm);
    auto [it, fresh] = floor_cache.try_emplace(CellKey{kc, ac}, 0.0);
    if (fresh) it->second = lambda_1d_discrete({kc, Robin::finite(ac), p.a}, nt);
    floor = std::min(floor, it->second);

    for (int e = 0; e < nt; ++e) {
      const double t0 = out.t_node(e), t1 = out.t_node(e + 1);
      // d/ds part, lumped in t: g^{-1} at the two t-nodes.
      for (int j : {e, e + 1}) {
        const double tj = j == e ? t0 : t1;
        couple(c, j, c + 1, j, 0.5 * ht / ((1.0 - kc * tj) * hs));
      }
      // d/dt part, lumped in s: g at the cell's t-midpoint.
      const double gt = 1.0 - kc * 0.5 * (t0 + t1);
      for (int i : {c, c + 1}) couple(i, e, i, e + 1, 0.5 * hs * gt / ht);
      // Lumped mass: g at the corner times a quarter cell.
      for (int i : {c, c + 1}) {
        for (int j : {e, e + 1}) {
          const int d = out.index(i, j);
          if (d >= 0) out.M[d] += (1.0 - kc * (j == e ? t0 : t1)) * hs * ht / 4.0;
        }
      }
    }
    // Robin line t = a, lumped in s.
    const double rob = 0.5 * hs * ac * (1.0 - kc * p.a);
    for (int i : {c, c + 1}) {
      const int d = out.index(i, nt);
      if (d >= 0) trip.emplace_back(d, d, rob);
    }
  }
  out.discrete_floor = floor;
  out.K.resize(n, n);
  out.K.setFromTriplets(trip.begin(), trip.end());
  out.K.makeCompressed();
  return out;
}

double default_shift(const SparsePair& pair) {
  return pair.discrete_floor - 1e-3 * std::max(1.0, std::abs(pair.discrete_floor));
}

GroundState2D ground_state(const SparsePair& pair, double sigma, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const int n = pair.dofs();
  Eigen::SparseMatrix<double> A = pair.K;
  for (int k = 0; k < n; ++k) A.coeffRef(k, k) -= sigma * pair.M[k];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolverError("sparse factorization of K - sigma M failed");
  if (!(ldlt.vectorD().minCoeff() > 0.0)) {
    throw SolverError("shift " + fmt_double(sigma) + " is not below the spectrum (nonpositive pivot)");
  }

  const auto mdot = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) { return u.dot(pair.M.cwiseProduct(v)); };
  const auto residual_of = [&](const Eigen::VectorXd& x, double lam) {
    const Eigen::VectorXd mx = pair.M.cwiseProduct(x);
    return (pair.K * x - lam * mx).norm() / mx.norm();
  };

  const int m = std::min(80, n);
  Eigen::MatrixXd Q(n, m + 1);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  GroundState2D out;
  double res = std::numeric_limits<double>::infinity();
  double lam = 0.0;
  for (int cycle = 0; cycle < 60; ++cycle) {
    Q.col(0) = x / std::sqrt(mdot(x, x));
    std::vector<double> al, be;
    int used = 0;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = ldlt.solve(pair.M.cwiseProduct(Q.col(j)));
      ++out.steps;
      al.push_back(mdot(Q.col(j), w));
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) w -= mdot(Q.col(i), w) * Q.col(i);
      }
      const double b = std::sqrt(std::max(0.0, mdot(w, w)));
      used = j + 1;
      const bool exhausted = !(b > 1e-14 * std::abs(al.back()));
      bool check = exhausted || used == m || (used >= 10 && used % 10 == 0);
      if (check) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(al.data(), used);
        Eigen::VectorXd sub = be.empty() ? Eigen::VectorXd() : Eigen::Map<Eigen::VectorXd>(be.data(), used - 1);
        es.computeFromTridiagonal(d, sub);
        const Eigen::VectorXd y = es.eigenvectors().col(used - 1);
        x = Q.leftCols(used) * y;
        lam = x.dot(pair.K * x) / mdot(x, x);
        res = residual_of(x, lam);
        if (res <= tol) {
          const double nrm = std::sqrt(mdot(x, x));
          x /= nrm;
          if (x.sum() < 0) x = -x;
          out.lambda = x.dot(pair.K * x);
          out.residual = res;
          out.x = std::move(x);
          return out;
        }
      }
      if (exhausted || used == m) break;
      be.push_back(b);
      Q.col(j + 1) = w / b;
    }
  }
  throw SolverError("Lanczos iteration did not reach residual " + fmt_double(tol), res);
}

Threshold2D threshold_2d(const StripProblem& p, int ns, int nt, double tol) {
  Threshold2D out;
  out.ns = ns;
  out.nt = nt;
  const SparsePair coarse = assemble_2d(p, ns, nt);
  out.coarse = ground_state(coarse, default_shift(coarse), tol).lambda;
  out.pair = assemble_2d(p, 2 * ns, 2 * nt);
  out.state = ground_state(out.pair, default_shift(out.pair), tol);
  out.fine = out.state.lambda;
  out.lambda = (4.0 * out.fine - out.coarse) / 3.0;
  out.mesh_error = std::abs(out.lambda - out.fine);
  out.residual = out.state.residual;
  out.discrete_floor_fine = out.pair.discrete_floor;
  return out;
}

namespace {

double lambda_at(const StripProblem& p, double s, std::map<CellKey, double>& cache) {
  const CellKey key{p.kappa(s), p.alpha(s)};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double v = lambda_1d({key.kappa, Robin::finite(key.alpha), p.a}, {1e-11}).extrapolated_lambda;
  cache.emplace(key, v);
  return v;
}

}  // namespace

std::pair<double, double> intermediate_bound(const StripProblem& p, int samples) {
  p.validate();
  samples = std::max(samples, 3);
  std::vector<double> s;
  for (int i = 0; i < samples; ++i) s.push_back(p.s_min + (p.s_max - p.s_min) * i / (samples - 1));
  for (const Profile* prof : {&p.kappa, &p.alpha}) {
    for (const Bump& b : prof->bumps()) s.push_back(b.center);
    for (double k : prof->knots()) s.push_back(k);
  }
  std::erase_if(s, [&](double x) { return x < p.s_min || x > p.s_max; });
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());

  std::map<CellKey, double> cache;
  std::size_t best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = lambda_at(p, s[i], cache);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  // Golden-section polish between the neighbours of the best sample.
  double lo = s[best > 0 ? best - 1 : 0], hi = s[std::min(best + 1, s.size() - 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = lambda_at(p, x1, cache), f2 = lambda_at(p, x2, cache);
  for (int it = 0; it < 40 && hi - lo > 1e-9 * (1.0 + std::abs(lo)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = lambda_at(p, x1, cache);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = lambda_at(p, x2, cache);
    }
  }
  for (auto [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (f < best_v) {
      best_v = f;
      s[best] = x;
    }
  }
  return {best_v, s[best]};
}

ThresholdReport verify_threshold_bound(const StripProblem& p_in, int ns, int nt, double tol) {
  StripProblem p = p_in;
  p.end_bc = EndBC::neumann;
  p.validate();
  ThresholdReport rep;
  rep.asserted = p.kappa.sup(p.s_min, p.s_max) <= 0.0 || p.alpha.sup(p.s_min, p.s_max) <= 0.0;

  const Threshold2D th = threshold_2d(p, ns, nt, tol);
  rep.lambda_hat = th.lambda;
  rep.lambda_fine = th.fine;
  rep.mesh_error = th.mesh_error;
  rep.discrete_floor = th.discrete_floor_fine;
  rep.tolerance = 10.0 * th.mesh_error + 1e-9 * std::max(1.0, std::abs(th.lambda));

  const auto [inter, at] = intermediate_bound(p);
  rep.intermediate = inter;
  rep.intermediate_at = at;
  const double kinf = p.kappa.inf(p.s_min, p.s_max);
  const double ainf = p.alpha.inf(p.s_min, p.s_max);
  rep.theorem_bound = lambda_1d({kinf, Robin::finite(ainf), p.a}, {1e-11}).extrapolated_lambda;

  const double round = 1e-9 * std::max(1.0, std::abs(rep.intermediate));
  rep.lambda_above_bound = rep.lambda_hat >= rep.theorem_bound - rep.tolerance;
  rep.lambda_above_intermediate = rep.lambda_hat >= rep.intermediate - rep.tolerance;
  // The lumped scheme makes this one exact on the mesh, up to the solver residual.
  rep.discrete_intermediate_ok = th.fine >= th.discrete_floor_fine - 1e-9 * std::max(1.0, std::abs(th.fine));
  rep.chain_ok = rep.theorem_bound <= rep.intermediate + round && rep.lambda_above_intermediate;
  if (!rep.asserted) rep.note = "bound not asserted: kappa and alpha both take positive values";
  rep.solve = th;
  return rep;
}

DkReport dk_upper_bound(const StripProblem& p_in, int ns, int nt, double tol) {
  StripProblem p = p_in;
  p.end_bc = EndBC::dirichlet;
  p.validate();
  const bool const_alpha = p.alpha.bumps().empty() && p.alpha.knots().empty();
  if (!const_alpha || p.alpha.base() != p.alpha0) {
    throw ValidationError("the upper-bound run needs a constant Robin profile equal to alpha0");
  }
  DkReport rep;
  rep.reference = straight_lambda(Robin::finite(p.alpha0), p.a);
  {
    const int q = 8192;
    const double h = (p.s_max - p.s_min) / q;
    double sum = 0.0;
    for (int i = 0; i <= q; ++i) {
      const double w = (i == 0 || i == q) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * p.kappa(p.s_min + i * h);
    }
    rep.kappa_integral = sum * h / 3.0;
  }
  if (!(rep.kappa_integral < 0.0)) rep.note = "curvature integral is not negative; no binding is predicted";

  const double mid = 0.5 * (p.s_min + p.s_max);
  const double len = p.s_max - p.s_min;
  for (int k : {4, 2, 1}) {
    StripProblem q = p;
    q.s_min = mid - 0.5 * len / k;
    q.s_max = mid + 0.5 * len / k;
    const int nsk = std::max(4, ns / k);
    Threshold2D th = threshold_2d(q, nsk, nt, tol);
    rep.sweep.push_back({q.s_min, q.s_max, th.lambda, th.mesh_error, rep.reference - th.lambda});
    if (k == 1) rep.longest = std::move(th);
  }
  const DkRow& last = rep.sweep.back();
  rep.positive = last.margin > 10.0 * last.mesh_error;
  if (!rep.positive && rep.note.empty()) rep.note = "inconclusive: margin not resolved at this length, a longer interval is needed";
  return rep;
}

std::string field_csv(const SparsePair& pair, const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "s,t,psi\n";
  for (int i = 0; i <= pair.ns; ++i) {
    for (int j = 0; j <= pair.nt; ++j) {
      const int d = pair.index(i, j);
      os << fmt_double(pair.s_node(i)) << ',' << fmt_double(pair.t_node(j)) << ','
         << fmt_double(d >= 0 ? x[d] : 0.0) << '\n';
    }
  }
  return os.str();
}

void write_field_csv(const std::string& path, const SparsePair& pair, const Eigen::VectorXd& x) {
  const std::string body = field_csv(pair, x);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << body;
}

}  // namespace cstrip
