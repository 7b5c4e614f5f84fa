#include "curvedstrip/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "curvedstrip/errors.hpp"
#include "curvedstrip/hardy.hpp"

namespace cstrip {

const char* to_string(Command c) {
  switch (c) {
    case Command::bound2d: return "bound2d";
    case Command::dk: return "dk";
    case Command::hardy: return "hardy";
    case Command::stability: return "stability";
  }
  return "?";
}

namespace {

using json = nlohmann::json;

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ValidationError("unknown key '" + it.key() + "' in " + where);
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError("missing '" + key + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_number()) throw ValidationError("'" + key + "' in " + where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError("'" + key + "' in " + where + " must be finite");
  return d;
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

int integer(const json& j, const std::string& key, int fallback, int min, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError("'" + key + "' in " + where + " must be an integer");
  const long long i = v.get<long long>();
  if (i < min || i > (1 << 20)) {
    throw ValidationError("'" + key + "' in " + where + " must lie in [" + std::to_string(min) + ", 1048576]");
  }
  return static_cast<int>(i);
}

Bump bump_from(const json& j, const std::string& where) {
  only_keys(j, {"amplitude", "center", "halfwidth"}, where);
  Bump b{number(j, "amplitude", where), number(j, "center", where), number(j, "halfwidth", where)};
  if (!(b.halfwidth > 0.0)) throw ValidationError("'halfwidth' in " + where + " must be positive");
  return b;
}

Profile profile_from(const json& j, const std::string& name) {
  if (!j.is_object()) throw ValidationError("'" + name + "' must be an object");
  if (!j.contains("type") || !j.at("type").is_string()) throw ValidationError("'" + name + "' needs a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "const") {
    only_keys(j, {"type", "value"}, name);
    return Profile::constant(number(j, "value", name));
  }
  if (type == "bump") {
    Profile p = Profile::constant(number_or(j, "base", 0.0, name));
    if (j.contains("bumps")) {
      only_keys(j, {"type", "base", "bumps"}, name);
      if (!j.at("bumps").is_array()) throw ValidationError("'bumps' in " + name + " must be an array");
      for (const json& b : j.at("bumps")) p.add(bump_from(b, name + ".bumps"));
    } else {
      only_keys(j, {"type", "base", "amplitude", "center", "halfwidth"}, name);
      json b = {{"amplitude", j.value("amplitude", json())}, {"center", j.value("center", json())},
                {"halfwidth", j.value("halfwidth", json())}};
      for (auto& [k, v] : b.items()) {
        if (v.is_null()) throw ValidationError("missing '" + k + "' in " + name);
      }
      p.add(bump_from(b, name));
    }
    return p;
  }
  if (type == "csv") {
    only_keys(j, {"type", "path"}, name);
    if (!j.contains("path") || !j.at("path").is_string()) throw ValidationError("'" + name + "' csv needs a 'path'");
    return Profile::from_csv(j.at("path").get<std::string>(), name);
  }
  throw ValidationError("'" + name + "' type must be const, bump or csv (got '" + type + "')");
}

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

}  // namespace

Profile parse_profile(const std::string& json_text, const std::string& name) {
  return profile_from(parse_text(json_text, name), name);
}

RunConfig parse_config(const std::string& text, Command command) {
  const json j = parse_text(text, "config");
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  std::set<std::string> allowed{"a", "s_min", "s_max", "kappa", "alpha", "alpha0", "end_bc", "ns", "nt", "field_out"};
  if (command == Command::hardy) allowed.insert("trials");
  if (command == Command::stability) allowed.insert({"interval", "negative_bump", "epsilon_fraction"});
  only_keys(j, allowed, "config");

  RunConfig c;
  c.command = command;
  StripProblem& p = c.problem;
  p.a = number(j, "a", "config");
  p.s_min = number(j, "s_min", "config");
  p.s_max = number(j, "s_max", "config");
  p.alpha0 = number_or(j, "alpha0", 0.0, "config");
  if (!j.contains("kappa")) throw ValidationError("missing 'kappa' in config");
  p.kappa = profile_from(j.at("kappa"), "kappa");
  p.alpha = j.contains("alpha") ? profile_from(j.at("alpha"), "alpha") : Profile::constant(p.alpha0);
  if (j.contains("end_bc")) {
    const json& e = j.at("end_bc");
    if (!e.is_string() || (e != "neumann" && e != "dirichlet")) {
      throw ValidationError("'end_bc' must be \"neumann\" or \"dirichlet\"");
    }
    p.end_bc = e == "neumann" ? EndBC::neumann : EndBC::dirichlet;
  }
  c.ns = integer(j, "ns", 64, 8, "config");
  c.nt = integer(j, "nt", 32, 8, "config");
  if (j.contains("field_out")) {
    if (!j.at("field_out").is_string()) throw ValidationError("'field_out' must be a path string");
    c.field_out = j.at("field_out").get<std::string>();
  }
  p.validate();

  switch (command) {
    case Command::bound2d:
      break;
    case Command::dk:
      if (!(p.alpha.bumps().empty() && p.alpha.knots().empty() && p.alpha.base() == p.alpha0)) {
        throw ValidationError("dk needs alpha constant and equal to alpha0");
      }
      break;
    case Command::hardy:
      c.trials = integer(j, "trials", 1000, 0, "config");
      check_hardy_hypotheses(p);
      if (c.ns % 2 || c.nt % 2) throw ValidationError("hardy needs even ns and nt");
      break;
    case Command::stability: {
      if (!(p.alpha.bumps().empty() && p.alpha.knots().empty() && p.alpha.base() == 0.0 && p.alpha0 == 0.0)) {
        throw ValidationError("stability concerns the Dirichlet-Neumann strip: alpha and alpha0 must be 0");
      }
      check_hardy_hypotheses(p);  // kappa here is kappa_plus
      c.I_lo = p.s_min;
      c.I_hi = p.s_max;
      if (j.contains("interval")) {
        const json& iv = j.at("interval");
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
          throw ValidationError("'interval' must be [lo, hi]");
        }
        c.I_lo = iv[0].get<double>();
        c.I_hi = iv[1].get<double>();
        if (!(c.I_lo < c.I_hi) || c.I_lo < p.s_min || c.I_hi > p.s_max) {
          throw ValidationError("'interval' must be a nonempty subinterval of [s_min, s_max]");
        }
      }
      if (!j.contains("negative_bump")) throw ValidationError("missing 'negative_bump' in config");
      const json& nb = j.at("negative_bump");
      if (!nb.is_object()) throw ValidationError("'negative_bump' must be an object");
      only_keys(nb, {"center", "halfwidth"}, "negative_bump");
      c.neg_center = number(nb, "center", "negative_bump");
      c.neg_halfwidth = number(nb, "halfwidth", "negative_bump");
      if (!(c.neg_halfwidth > 0.0) || c.neg_center - c.neg_halfwidth < c.I_lo ||
          c.neg_center + c.neg_halfwidth > c.I_hi) {
        throw ValidationError("'negative_bump' must have positive halfwidth and lie inside the interval");
      }
      c.epsilon_fraction = number_or(j, "epsilon_fraction", 0.5, "config");
      if (!(c.epsilon_fraction > 0.0 && c.epsilon_fraction <= 1.0)) {
        throw ValidationError("'epsilon_fraction' must lie in (0, 1]");
      }
      if (c.ns % 2 || c.nt % 2) throw ValidationError("stability needs even ns and nt");
      break;
    }
  }
  return c;
}

RunConfig load_config(const std::string& path, Command command) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

}  // namespace cstrip
