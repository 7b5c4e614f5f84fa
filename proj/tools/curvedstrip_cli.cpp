// curvedstrip: command-line frontend over the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "curvedstrip/curvedstrip.h"

namespace {

enum Exit { exit_ok = 0, exit_validation = 1, exit_solver = 2, exit_audit = 3 };

struct Globals {
  double tol = 1e-10;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
};

std::string num(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

int exit_for(cs_status s) {
  switch (s) {
    case CS_OK: return exit_ok;
    case CS_ERR_VALIDATION: return exit_validation;
    case CS_ERR_AUDIT: return exit_audit;
    default: return exit_solver;
  }
}

int fail(cs_status s) {
  std::cerr << "error: " << cs_last_error() << "\n";
  return exit_for(s);
}

struct CString {
  char* p = nullptr;
  ~CString() { cs_free_string(p); }
  std::string str() const { return p ? p : ""; }
};

// Writes to --out when given, else to stdout.
bool emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream f(g.out, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "error: cannot write '" << g.out << "'\n";
    return false;
  }
  return true;
}

int cmd_lambda(const Globals& g, double kappa, const std::string& alpha, double a) {
  CString rep;
  if (cs_status s = cs_lambda_report(kappa, alpha.c_str(), a, g.tol, &rep.p); s != CS_OK) return fail(s);
  const auto j = nlohmann::json::parse(rep.str());
  std::ostringstream txt;
  txt << "lambda       " << num(j["fd"]) << "\n"
      << "transformed  " << num(j["transformed"]) << "  delta " << num(j["delta_transformed"]) << "\n";
  if (j.contains("bessel")) txt << "bessel       " << num(j["bessel"]) << "  delta " << num(j["delta_oracle"]) << "\n";
  if (j.contains("closed_form")) {
    txt << "closed form  " << num(j["closed_form"]) << "  delta " << num(j["delta_oracle"]) << "\n";
  }
  std::cout << txt.str();
  if (!g.out.empty() && !emit(g, rep.str())) return exit_solver;
  return exit_ok;
}

int cmd_disc(const Globals& g, const std::string& alpha, double a) {
  cs_eigen* e = nullptr;
  if (cs_status s = cs_disc_nu(alpha.c_str(), a, g.tol, &e); s != CS_OK) return fail(s);
  std::unique_ptr<cs_eigen, decltype(&cs_eigen_free)> hold(e, cs_eigen_free);
  std::cout << "nu  " << num(cs_eigen_lambda(e)) << "  (error estimate " << num(cs_eigen_error_estimate(e)) << ")\n";
  if (!g.out.empty()) {
    nlohmann::ordered_json j{{"alpha", alpha}, {"a", a}, {"nu", cs_eigen_lambda(e)},
                             {"error_estimate", cs_eigen_error_estimate(e)}};
    if (!emit(g, j.dump(2) + "\n")) return exit_solver;
  }
  return exit_ok;
}

int cmd_sweep(const Globals& g, const std::string& alphas, double kmin, double kmax, int n, double a) {
  CString csv;
  if (cs_status s = cs_sweep_csv(alphas.c_str(), kmin, kmax, n, a, g.tol, g.threads, &csv.p); s != CS_OK) {
    return fail(s);
  }
  return emit(g, csv.str()) ? exit_ok : exit_solver;
}

int cmd_critical(const Globals& g, double a) {
  double alpha = 0.0;
  // --tol defaults to an eigenvalue tolerance; alpha is bisected no finer than 1e-6.
  const double tol = std::max(g.tol, 1e-6);
  if (cs_status s = cs_critical_alpha(a, tol, &alpha); s != CS_OK) return fail(s);
  std::cout << "critical alpha  " << num(alpha) << "\n";
  if (!g.out.empty()) {
    nlohmann::ordered_json j{{"a", a}, {"tol", tol}, {"critical_alpha", alpha}};
    if (!emit(g, j.dump(2) + "\n")) return exit_solver;
  }
  return exit_ok;
}

int cmd_run(const Globals& g, const std::string& command, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config '" << config_path << "'\n";
    return exit_validation;
  }
  std::ostringstream text;
  text << in.rdbuf();
  CString report, summary;
  // The 2D eigensolver residual does not go below ~1e-9.
  const double tol = std::max(g.tol, 1e-9);
  const cs_status s = cs_run(command.c_str(), text.str().c_str(), tol, g.seed, g.threads, &report.p, &summary.p);
  if (s != CS_OK && s != CS_ERR_AUDIT) return fail(s);
  if (g.out.empty()) {
    std::cerr << summary.str();
    std::cout << report.str();
  } else {
    std::cout << summary.str();
    if (!emit(g, report.str())) return exit_solver;
  }
  return exit_for(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral thresholds of curved strips with Dirichlet-Robin boundary conditions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (JSON report or CSV)");
  app.add_option("--seed", g.seed, "Seed for randomized audits");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 1024));

  double kappa = 0.0, a = 1.0, kmin = -0.9, kmax = 0.9;
  int n = 37;
  std::string alpha = "0", alphas = "-1,0,1,dirichlet", config;

  auto* lam = app.add_subcommand("lambda", "Transverse ground state lambda(kappa, alpha)");
  lam->add_option("--kappa", kappa, "Curvature")->required();
  lam->add_option("--alpha", alpha, "Robin coefficient or 'dirichlet'")->required();
  lam->add_option("--a", a, "Half-width");

  auto* sw = app.add_subcommand("sweep", "CSV of lambda(kappa, alpha) curves");
  sw->add_option("--alphas", alphas, "Comma-separated Robin coefficients");
  sw->add_option("--kappa-min", kmin, "Lower end of the kappa range");
  sw->add_option("--kappa-max", kmax, "Upper end of the kappa range");
  sw->add_option("--n", n, "Points per curve");
  sw->add_option("--a", a, "Half-width");

  auto* crit = app.add_subcommand("critical-alpha", "Alpha above which kappa -> lambda stops being monotone");
  crit->add_option("--a", a, "Half-width");

  auto* disc = app.add_subcommand("disc", "Lowest eigenvalue nu(alpha) of the disc of radius 2a");
  disc->add_option("--alpha", alpha, "Robin coefficient or 'dirichlet'")->required();
  disc->add_option("--a", a, "Half-width");

  std::vector<CLI::App*> runs;
  for (const char* name : {"bound2d", "dk", "hardy", "stability"}) {
    auto* c = app.add_subcommand(name, std::string("Run the ") + name + " check from a JSON config");
    c->add_option("config", config, "Config file")->required();
    runs.push_back(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }

  if (lam->parsed()) return cmd_lambda(g, kappa, alpha, a);
  if (sw->parsed()) return cmd_sweep(g, alphas, kmin, kmax, n, a);
  if (crit->parsed()) return cmd_critical(g, a);
  if (disc->parsed()) return cmd_disc(g, alpha, a);
  for (auto* c : runs) {
    if (c->parsed()) return cmd_run(g, c->get_name(), config);
  }
  return exit_validation;
}
