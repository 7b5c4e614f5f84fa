#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvedstrip/errors.hpp"
#include "curvedstrip/transverse.hpp"
#include "oracles.hpp"

using namespace cstrip;

namespace {

constexpr double pi = std::numbers::pi;

double lam(double kappa, double alpha, double a = 1.0) {
  return lambda_1d({kappa, Robin::finite(alpha), a}).extrapolated_lambda;
}
double lam_d(double kappa, double a = 1.0) { return lambda_1d({kappa, Robin::dirichlet(), a}).extrapolated_lambda; }

}  // namespace

TEST_CASE("assemble_1d: straight Dirichlet-Neumann is the plain second difference") {
  const int n = 8;
  const TridiagPencil p = assemble_1d({0.0, Robin::finite(0.0), 1.0}, n);
  const double h = 2.0 / n;
  REQUIRE(p.size() == static_cast<std::size_t>(n));
  const auto d = p.diag(), o = p.off_diag();
  for (int i = 0; i < n - 1; ++i) CHECK(d[i] == doctest::Approx(2.0 / h));
  CHECK(d[n - 1] == doctest::Approx(1.0 / h));  // no boundary term at alpha = 0
  for (double x : o) CHECK(x == doctest::Approx(-1.0 / h));
  for (double x : p.potential) CHECK(x == 0.0);
}

TEST_CASE("assemble_1d: Dirichlet flag drops the last row and column of the Robin pencil") {
  const int n = 12;
  const TridiagPencil r = assemble_1d({0.4, Robin::finite(0.7), 1.0}, n);
  const TridiagPencil d = assemble_1d({0.4, Robin::dirichlet(), 1.0}, n);
  REQUIRE(d.size() == r.size() - 1);
  const auto rd = r.diag(), dd = d.diag(), ro = r.off_diag(), doff = d.off_diag();
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(dd[i] == doctest::Approx(rd[i]).epsilon(1e-15));
    CHECK(d.mass[i] == r.mass[i]);
  }
  for (std::size_t i = 0; i + 1 < d.size(); ++i) CHECK(doff[i] == ro[i]);
}

TEST_CASE("assemble_1d: weighted mass (1 - kappa t_i) dt at interior nodes") {
  const int n = 16;
  const TridiagPencil p = assemble_1d({0.5, Robin::finite(0.0), 1.0}, n);
  const double h = 2.0 / n;
  for (int i = 1; i < n; ++i) {
    const double t = -1.0 + i * h;
    CHECK(p.mass[i - 1] == doctest::Approx((1.0 - 0.5 * t) * h).epsilon(1e-15));
  }
}

TEST_CASE("lambda_1d examples") {
  CHECK(lam_d(0.0) == doctest::Approx(pi * pi / 4).epsilon(1e-10));
  CHECK(lam(0.0, 0.0) == doctest::Approx(pi * pi / 16).epsilon(1e-10));
  // Frozen from oracle::annulus (std::cyl_* cross product).
  const double frozen = 0.263333619313;
  CHECK(oracle::annulus(0.3, -0.5, 1.0) == doctest::Approx(frozen).epsilon(1e-11));
  CHECK(std::abs(lam(0.3, -0.5) - frozen) < 1e-5);
}

TEST_CASE("eigenfunction: Dirichlet end, positivity, weighted unit norm") {
  for (double k : {-0.7, 0.0, 0.4}) {
    for (double al : {-1.0, 0.0, 2.0}) {
      const EigenResult r = lambda_1d({k, Robin::finite(al), 1.0});
      REQUIRE(r.psi.size() == r.t.size());
      CHECK(r.psi.front() == 0.0);
      double norm = 0.0;
      const double h = 2.0 / r.mesh_n;
      for (std::size_t i = 1; i < r.psi.size(); ++i) {
        CHECK(r.psi[i] > 0.0);
        const double w = i + 1 == r.psi.size() ? h / 2 : h;
        norm += r.psi[i] * r.psi[i] * (1.0 - k * r.t[i]) * w;
      }
      CHECK(std::abs(norm - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("transformed form: identity at kappa = 0, same lambda otherwise") {
  for (double al : {-1.0, 0.0, 0.5}) {
    const TransverseParams p{0.0, Robin::finite(al), 1.0};
    const auto a = assemble_1d(p, 20), b = assemble_1d_transformed(p, 20);
    CHECK(a.diag() == b.diag());
    CHECK(a.off_diag() == b.off_diag());
    CHECK(lambda_1d(p).extrapolated_lambda == lambda_1d_transformed(p).extrapolated_lambda);
  }
  const TransverseParams p{0.5, Robin::finite(0.0), 1.0};
  CHECK(std::abs(lambda_1d(p).extrapolated_lambda - lambda_1d_transformed(p).extrapolated_lambda) < 1e-6);
}

TEST_CASE("transformed eigenfunction divided by sqrt(1 - kappa t) matches psi") {
  const TransverseParams p{0.5, Robin::finite(-0.3), 1.0};
  const EigenResult w = lambda_1d_fixed(p, 256);
  const auto pencil = assemble_1d_transformed(p, 512);
  const DiscreteEigenpair tp = lowest_eigenpair(pencil);
  // tp.vec is normalized in the flat measure, psi in the weighted one; the
  // map between the spaces is unitary, so no rescaling is needed.
  double worst = 0.0;
  for (std::size_t i = 1; i < w.psi.size(); ++i) {
    const double phi = tp.vec[i - 1] / std::sqrt(1.0 - p.kappa * w.t[i]);
    worst = std::max(worst, std::abs(phi - w.psi[i]));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("lambda_lower_bound examples and crude bound") {
  CHECK(lambda_lower_bound({0.3, Robin::finite(0.0), 1.0}) == 0.0);
  CHECK(lambda_lower_bound({0.0, Robin::finite(-1.0), 1.0}) == doctest::Approx(-1.0));
  CHECK(lambda_lower_bound({0.5, Robin::finite(-1.0), 1.0}) == doctest::Approx(-9.0));
  for (double k : {-0.8, -0.2, 0.3, 0.8}) {
    for (double al : {-2.0, -0.5, 1.0}) {
      const TransverseParams p{k, Robin::finite(al), 1.0};
      CHECK(lambda_1d(p).extrapolated_lambda >= lambda_lower_bound(p));
    }
  }
}

TEST_CASE("dlambda_dkappa: signs and central differences") {
  CHECK(dlambda_dkappa({-0.5, Robin::finite(1.0), 1.0}).value > 0.0);
  CHECK(dlambda_dkappa({0.5, Robin::finite(-1.0), 1.0}).value > 0.0);
  const double h = 1e-4;
  for (auto [k, al] : {std::pair{0.2, 0.5}, {-0.6, -1.0}, {0.7, 1.5}, {-0.3, 0.0}}) {
    const double d = dlambda_dkappa({k, Robin::finite(al), 1.0}).value;
    const double fd = (lam(k + h, al) - lam(k - h, al)) / (2 * h);
    CHECK(std::abs(d - fd) <= 1e-3 * std::abs(fd));
  }
}

TEST_CASE("straight_lambda: closed forms and cross-solver") {
  CHECK(straight_lambda(Robin::finite(0.0), 1.0) == doctest::Approx(pi * pi / 16).epsilon(1e-14));
  CHECK(straight_lambda(Robin::finite(-0.5), 1.0) == 0.0);
  CHECK(straight_lambda(Robin::finite(-0.25), 2.0) == 0.0);
  const double v = straight_lambda(Robin::finite(-1.0), 1.0);
  CHECK(v < 0.0);
  CHECK(std::abs(v - lam(0.0, -1.0)) < 1e-6);
  for (double al : {-3.0, -0.7, -0.1, 0.4, 10.0}) {
    CHECK(straight_lambda(Robin::finite(al), 1.3) == doctest::Approx(oracle::straight(al, 1.3)).epsilon(1e-12));
  }
}

TEST_CASE("disc_nu: limits and Bessel root oracle") {
  const double j = oracle::j01();
  CHECK(disc_nu(Robin::dirichlet(), 1.0).extrapolated_lambda == doctest::Approx(j * j / 4).epsilon(1e-9));
  CHECK(std::abs(disc_nu(Robin::finite(0.0), 1.0).extrapolated_lambda) < 1e-8);
  const double nm = disc_nu(Robin::finite(-1.0), 1.0).extrapolated_lambda;
  CHECK(nm < 0.0);
  CHECK(nm == doctest::Approx(oracle::disc(-1.0, 1.0)).epsilon(1e-8));
  CHECK(disc_nu(Robin::finite(1.0), 1.0).extrapolated_lambda == doctest::Approx(oracle::disc(1.0, 1.0)).epsilon(1e-8));
}

TEST_CASE("monotone in alpha at fixed kappa") {
  for (int i = 0; i < 9; ++i) {
    const double k = -0.8 + 0.2 * i;
    double prev = -1e300;
    for (double al : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const double v = lam(k, al);
      CHECK(v > prev + 1e-8);
      prev = v;
    }
    CHECK(prev < lam_d(k));
  }
}

TEST_CASE("monotone in kappa: on (-1/a, 0] for every alpha, everywhere for alpha <= 0") {
  for (double al : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    double prev = -1e300;
    for (double k = -0.95; k <= 0.0 + 1e-12; k += 0.05) {
      const double v = lam(k, al);
      CHECK(v > prev);
      prev = v;
    }
  }
  for (double al : {-2.0, -0.5, 0.0}) {
    double prev = -1e300;
    for (double k = -0.95; k < 0.96; k += 0.05) {
      const double v = lam(k, al);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("continuity in kappa is linear in the step") {
  for (auto [k, al] : {std::pair{0.3, 1.0}, {-0.4, -1.0}}) {
    const double d1 = std::abs(lam(k + 1e-3, al) - lam(k, al));
    const double d2 = std::abs(lam(k + 1e-4, al) - lam(k, al));
    CHECK(d1 / d2 == doctest::Approx(10.0).epsilon(0.02));
  }
}

TEST_CASE("Dirichlet case is even in kappa") {
  for (double k : {0.1, 0.45, 0.8, 0.95}) CHECK(std::abs(lam_d(k) - lam_d(-k)) < 1e-5);
}

TEST_CASE("scaling law lambda(kappa, alpha; a) = lambda(kappa a, alpha a; 1) / a^2") {
  for (double a : {0.5, 2.0}) {
    for (auto [k, al] : {std::pair{0.3, -0.7}, {-0.5, 1.2}, {0.1, 0.0}}) {
      const double lhs = lam(k / a, al / a, a);
      const double rhs = lam(k, al, 1.0) / (a * a);
      CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(1e-3, std::abs(rhs)));
    }
  }
}

TEST_CASE("eigenfunction increasing for alpha <= 0") {
  for (double k : {-0.6, 0.0, 0.6}) {
    for (double al : {-1.5, -0.2, 0.0}) {
      const EigenResult r = lambda_1d({k, Robin::finite(al), 1.0});
      for (std::size_t i = 1; i < r.psi.size(); ++i) CHECK(r.psi[i] > r.psi[i - 1]);
    }
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(lambda_1d({1.0, Robin::finite(0.0), 1.0}), ValidationError);
  CHECK_THROWS_AS(lambda_1d({0.0, Robin::finite(0.0), -1.0}), ValidationError);
  CHECK_THROWS_AS(lambda_1d({0.0, Robin::finite(0.0), 1.0}, SolveOptions{0.0}), ValidationError);
  CHECK_THROWS_AS(Robin::finite(std::nan("")), ValidationError);
  CHECK(Robin::parse("dirichlet").is_dirichlet());
  CHECK(Robin::parse("-0.5").value() == -0.5);
  CHECK_THROWS_AS(Robin::parse("abc"), ValidationError);
}
