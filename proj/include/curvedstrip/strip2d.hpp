#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <string>
#include <vector>

#include "curvedstrip/profile.hpp"

namespace cstrip {

enum class EndBC { neumann, dirichlet };
const char* to_string(EndBC e);

/// Straightened strip I x (-a, a): Dirichlet on t = -a, Robin alpha(s) on
/// t = a, end condition on s = s_min, s_max.
struct StripProblem {
  double a = 1.0;
  double s_min = -1.0;
  double s_max = 1.0;
  Profile kappa;
  Profile alpha;
  double alpha0 = 0.0;
  EndBC end_bc = EndBC::neumann;

  // Throws ValidationError: a > 0, s_min < s_max, sup |kappa| a < 1,
  // finite profiles.
  void validate() const;
};

/// Q1 discretization on the uniform (ns x nt) cell grid. Mass matrices in s
/// are lumped everywhere (volume, d/dt stiffness, Robin line), and in t for the
/// d/ds stiffness, so the discrete form splits into one transverse pencil per
/// s-node plus a nonnegative longitudinal part.
struct SparsePair {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd M;  // lumped diagonal mass
  int ns = 0, nt = 0;
  double a = 1.0, s_min = 0.0, s_max = 0.0;
  double hs = 0.0, ht = 0.0;
  std::vector<int> dof_s, dof_t;  // node indices of each unknown
  std::vector<int> node_to_dof;   // (ns+1)(nt+1), -1 where eliminated
  // min over cells of the discrete transverse eigenvalue on nt cells with
  // the cell's curvature and Robin coefficient: an exact lower bound for the
  // discrete 2D spectrum.
  double discrete_floor = 0.0;

  int dofs() const { return static_cast<int>(M.size()); }
  int index(int i, int j) const { return node_to_dof[static_cast<std::size_t>(i) * (nt + 1) + j]; }
  double s_node(int i) const { return i == ns ? s_max : s_min + i * hs; }
  double t_node(int j) const { return j == nt ? a : -a + j * ht; }

  double energy(const Eigen::VectorXd& x) const { return x.dot(K * x); }
  double mass_norm2(const Eigen::VectorXd& x) const { return x.dot(M.cwiseProduct(x)); }
};

SparsePair assemble_2d(const StripProblem& p, int ns, int nt);

struct GroundState2D {
  double lambda = 0.0;
  double residual = 0.0;  // ||K x - lambda M x|| / ||M x||
  int steps = 0;          // operator applications
  Eigen::VectorXd x;      // M-normalized, positive sum
};

/// Lowest generalized eigenpair by restarted shift-invert Lanczos in the M
/// inner product (full reorthogonalization). K - sigma M must be positive
/// definite; a factorization with a nonpositive pivot is reported as a bad
/// shift.
GroundState2D ground_state(const SparsePair& pair, double sigma, double tol = 1e-9);

/// Default shift: just below pair.discrete_floor.
double default_shift(const SparsePair& pair);

struct Threshold2D {
  double lambda = 0.0;      // Richardson value over (ns, nt) and (2ns, 2nt)
  double coarse = 0.0;      // discrete value on (ns, nt)
  double fine = 0.0;        // discrete value on (2ns, 2nt)
  double mesh_error = 0.0;  // |lambda - fine|
  double residual = 0.0;    // fine-mesh residual
  double discrete_floor_fine = 0.0;
  int ns = 0, nt = 0;
  GroundState2D state;  // fine mesh
  SparsePair pair;      // fine mesh
};

Threshold2D threshold_2d(const StripProblem& p, int ns, int nt, double tol = 1e-9);

struct ThresholdReport {
  bool asserted = false;  // kappa <= 0 everywhere or alpha <= 0 everywhere
  double lambda_hat = 0.0;
  double mesh_error = 0.0;
  double tolerance = 0.0;  // 10 x mesh error (plus a rounding floor)
  double intermediate = 0.0;
  double intermediate_at = 0.0;  // minimizing s
  double theorem_bound = 0.0;    // lambda(inf kappa, inf alpha)
  double discrete_floor = 0.0;   // fine mesh
  double lambda_fine = 0.0;
  bool lambda_above_bound = false;
  bool lambda_above_intermediate = false;
  bool discrete_intermediate_ok = false;
  bool chain_ok = false;
  std::string note;
  Threshold2D solve;
};

/// inf_s lambda(kappa(s), alpha(s)) by sampling plus golden-section polish.
std::pair<double, double> intermediate_bound(const StripProblem& p, int samples = 257);

/// The three-value chain on a Neumann-truncated strip (end_bc is overridden).
ThresholdReport verify_threshold_bound(const StripProblem& p, int ns, int nt, double tol = 1e-9);

struct DkRow {
  double s_min = 0.0, s_max = 0.0;
  double lambda = 0.0;  // extrapolated Dirichlet-truncated threshold
  double mesh_error = 0.0;
  double margin = 0.0;  // lambda(0, alpha0) - lambda
};

struct DkReport {
  double reference = 0.0;  // lambda(0, alpha0)
  double kappa_integral = 0.0;
  std::vector<DkRow> sweep;  // increasing truncation length, the last is I itself
  bool positive = false;     // last margin > 10 x its mesh error
  std::string note;
  Threshold2D longest;  // solve on I itself
};

/// Dirichlet-truncated thresholds for alpha == alpha0 on nested intervals
/// centred in I, lengths |I|/4, |I|/2, |I| at the mesh step of (ns, nt) on I.
DkReport dk_upper_bound(const StripProblem& p, int ns, int nt, double tol = 1e-9);

/// CSV "s,t,psi" over all nodes, eliminated ones as 0, s-major order.
void write_field_csv(const std::string& path, const SparsePair& pair, const Eigen::VectorXd& x);
std::string field_csv(const SparsePair& pair, const Eigen::VectorXd& x);

}  // namespace cstrip
