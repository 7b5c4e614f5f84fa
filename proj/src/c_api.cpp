#include "curvedstrip/curvedstrip.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "curvedstrip/annulus.hpp"
#include "curvedstrip/batch.hpp"
#include "curvedstrip/config.hpp"
#include "curvedstrip/errors.hpp"
#include "curvedstrip/geometry.hpp"
#include "curvedstrip/transverse.hpp"

struct cs_eigen {
  cstrip::EigenResult r;
};

struct cs_geometry {
  cstrip::StripGeometry g;
};

namespace {

thread_local std::string last_error;

template <class F>
cs_status guard(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const cstrip::ValidationError& e) {
    last_error = e.what();
    return CS_ERR_VALIDATION;
  } catch (const cstrip::SolverError& e) {
    last_error = e.what();
    return CS_ERR_SOLVER;
  } catch (const cstrip::RangeError& e) {
    last_error = e.what();
    return CS_ERR_RANGE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CS_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw cstrip::ValidationError(std::string(what) + " must not be NULL");
}

cstrip::Robin robin(const char* alpha) {
  need(alpha, "alpha");
  return cstrip::Robin::parse(alpha);
}

cs_status eigen_out(cstrip::EigenResult r, cs_eigen** out) {
  *out = new cs_eigen{std::move(r)};
  return CS_OK;
}

size_t copy_out(const std::vector<double>& v, double* buf, size_t n) {
  if (!buf) return 0;
  const size_t k = std::min(n, v.size());
  std::copy_n(v.begin(), k, buf);
  return k;
}

}  // namespace

extern "C" {

const char* cs_version(void) { return "0.1.0"; }
const char* cs_last_error(void) { return last_error.c_str(); }
void cs_free_string(char* s) { std::free(s); }

cs_status cs_lambda(double kappa, const char* alpha, double a, double tol, cs_eigen** out) {
  return guard([&] {
    need(out, "out");
    return eigen_out(cstrip::lambda_1d({kappa, robin(alpha), a}, cstrip::SolveOptions{tol}), out);
  });
}

cs_status cs_lambda_transformed(double kappa, const char* alpha, double a, double tol, cs_eigen** out) {
  return guard([&] {
    need(out, "out");
    return eigen_out(cstrip::lambda_1d_transformed({kappa, robin(alpha), a}, cstrip::SolveOptions{tol}), out);
  });
}

cs_status cs_disc_nu(const char* alpha, double a, double tol, cs_eigen** out) {
  return guard([&] {
    need(out, "out");
    return eigen_out(cstrip::disc_nu(robin(alpha), a, cstrip::SolveOptions{tol}), out);
  });
}

double cs_eigen_lambda(const cs_eigen* e) { return e ? e->r.extrapolated_lambda : 0.0; }
double cs_eigen_lambda_fine(const cs_eigen* e) { return e ? e->r.lambda : 0.0; }
double cs_eigen_error_estimate(const cs_eigen* e) { return e ? e->r.error_estimate : 0.0; }
double cs_eigen_residual(const cs_eigen* e) { return e ? e->r.residual : 0.0; }
size_t cs_eigen_size(const cs_eigen* e) { return e ? e->r.t.size() : 0; }
size_t cs_eigen_nodes(const cs_eigen* e, double* buf, size_t n) { return e ? copy_out(e->r.t, buf, n) : 0; }
size_t cs_eigen_values(const cs_eigen* e, double* buf, size_t n) { return e ? copy_out(e->r.psi, buf, n) : 0; }
void cs_eigen_free(cs_eigen* e) { delete e; }

cs_status cs_lambda_bessel(double kappa, const char* alpha, double a, double* out) {
  return guard([&] {
    need(out, "out");
    *out = cstrip::lambda_bessel({kappa, robin(alpha), a});
    return CS_OK;
  });
}

cs_status cs_straight_lambda(const char* alpha, double a, double* out) {
  return guard([&] {
    need(out, "out");
    *out = cstrip::straight_lambda(robin(alpha), a);
    return CS_OK;
  });
}

cs_status cs_dlambda_dkappa(double kappa, const char* alpha, double a, double tol, double* value, double* error) {
  return guard([&] {
    need(value, "value");
    const cstrip::Derivative d = cstrip::dlambda_dkappa({kappa, robin(alpha), a}, cstrip::SolveOptions{tol});
    *value = d.value;
    if (error) *error = d.error_estimate;
    return CS_OK;
  });
}

cs_status cs_zero_eigen_kappa(double alpha, double a, int* found, double* kappa) {
  return guard([&] {
    need(found, "found");
    const auto k = cstrip::zero_eigen_kappa(alpha, a);
    *found = k.has_value();
    if (kappa) *kappa = k.value_or(0.0);
    return CS_OK;
  });
}

cs_status cs_lambda_report(double kappa, const char* alpha, double a, double tol, char** json) {
  return guard([&] {
    need(json, "json");
    const cstrip::Robin al = robin(alpha);
    const cstrip::LambdaReport r = cstrip::compute_lambda(kappa, al, a, tol);
    nlohmann::ordered_json j;
    j["kappa"] = kappa;
    j["alpha"] = al.to_string();
    j["a"] = a;
    j["fd"] = r.fd;
    j["fd_error"] = r.fd_error;
    j["transformed"] = r.transformed;
    j["delta_transformed"] = r.delta_transformed;
    if (r.bessel) j["bessel"] = *r.bessel;
    if (r.straight) j["closed_form"] = *r.straight;
    j["delta_oracle"] = r.delta_oracle;
    *json = dup(j.dump(2) + "\n");
    return CS_OK;
  });
}

cs_status cs_sweep_csv(const char* alphas, double kappa_min, double kappa_max, int n, double a, double tol,
                       int threads, char** csv) {
  return guard([&] {
    need(alphas, "alphas");
    need(csv, "csv");
    std::vector<cstrip::Robin> list;
    std::stringstream ss(alphas);
    for (std::string tok; std::getline(ss, tok, ',');) {
      tok.erase(0, tok.find_first_not_of(" \t"));
      tok.erase(tok.find_last_not_of(" \t") + 1);
      list.push_back(cstrip::Robin::parse(tok));
    }
    *csv = dup(cstrip::sweep_csv(cstrip::sweep(list, kappa_min, kappa_max, n, a, tol, threads)));
    return CS_OK;
  });
}

cs_status cs_critical_alpha(double a, double tol, double* alpha) {
  return guard([&] {
    need(alpha, "alpha");
    *alpha = cstrip::critical_alpha(a, tol).alpha;
    return CS_OK;
  });
}

cs_status cs_run(const char* command, const char* config_json, double tol, uint64_t seed, int threads, char** report,
                 char** summary) {
  return guard([&] {
    need(command, "command");
    need(config_json, "config");
    const std::string cmd = command;
    cstrip::Command c;
    if (cmd == "bound2d") c = cstrip::Command::bound2d;
    else if (cmd == "dk") c = cstrip::Command::dk;
    else if (cmd == "hardy") c = cstrip::Command::hardy;
    else if (cmd == "stability") c = cstrip::Command::stability;
    else throw cstrip::ValidationError("unknown command '" + cmd + "'");
    if (!(tol > 0.0)) throw cstrip::ValidationError("tolerance must be positive");
    if (threads < 1) throw cstrip::ValidationError("threads must be at least 1");
    const cstrip::RunConfig cfg = cstrip::parse_config(config_json, c);
    const cstrip::RunOutput r = cstrip::run_config(cfg, tol, seed, threads);
    if (report) *report = dup(r.report);
    if (summary) *summary = dup(r.summary);
    if (!r.pass) {
      last_error = "an asserted inequality failed";
      return CS_ERR_AUDIT;
    }
    return CS_OK;
  });
}

cs_status cs_geometry_build(const char* kappa_json, const double* grid, size_t n, double a, double theta0,
                            cs_geometry** out) {
  return guard([&] {
    need(kappa_json, "kappa_json");
    need(grid, "grid");
    need(out, "out");
    const cstrip::Profile k = cstrip::parse_profile(kappa_json, "kappa");
    *out = new cs_geometry{cstrip::build_curve(k, std::vector<double>(grid, grid + n), a, {theta0, {0.0, 0.0}})};
    return CS_OK;
  });
}

cs_status cs_geometry_curve(const cs_geometry* g, double s, double xy[2]) {
  return guard([&] {
    need(g, "geometry");
    need(xy, "xy");
    const cstrip::Point p = g->g.curve(s);
    xy[0] = p[0];
    xy[1] = p[1];
    return CS_OK;
  });
}

cs_status cs_geometry_strip_map(const cs_geometry* g, double s, double t, double xy[2]) {
  return guard([&] {
    need(g, "geometry");
    need(xy, "xy");
    const cstrip::Point p = cstrip::strip_map(g->g, s, t);
    xy[0] = p[0];
    xy[1] = p[1];
    return CS_OK;
  });
}

cs_status cs_geometry_check(const cs_geometry* g, int* supnorm_ok, int* injectivity, double overlap[4]) {
  return guard([&] {
    need(g, "geometry");
    const cstrip::HypothesisReport r = cstrip::check_hypotheses(g->g);
    if (supnorm_ok) *supnorm_ok = r.supnorm_ok;
    if (injectivity) *injectivity = static_cast<int>(r.injectivity);
    if (overlap) std::copy(r.overlap.begin(), r.overlap.end(), overlap);
    return CS_OK;
  });
}

void cs_geometry_free(cs_geometry* g) { delete g; }

}  // extern "C"
