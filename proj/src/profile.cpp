#include "curvedstrip/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "curvedstrip/errors.hpp"

namespace cstrip {

Robin Robin::finite(double alpha) {
  if (!std::isfinite(alpha)) throw ValidationError("Robin coefficient must be finite (use dirichlet)");
  Robin r;
  r.dirichlet_ = false;
  r.alpha_ = alpha;
  return r;
}

double Robin::value() const {
  if (dirichlet_) throw ValidationError("Dirichlet coefficient has no finite value");
  return alpha_;
}

std::string Robin::to_string() const {
  if (dirichlet_) return "dirichlet";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, alpha_);
  return std::string(buf, ptr);
}

Robin Robin::parse(const std::string& token) {
  std::string lower = token;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "dirichlet" || lower == "inf" || lower == "+inf") return dirichlet();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse Robin coefficient '" + token + "'");
  }
  if (used != token.size()) throw ValidationError("cannot parse Robin coefficient '" + token + "'");
  return finite(v);
}

double Bump::operator()(double s) const {
  const double x = (s - center) / halfwidth;
  if (std::abs(x) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * x);
  return amplitude * c * c;
}

Profile Profile::constant(double value) {
  if (!std::isfinite(value)) throw ValidationError("non-finite profile value");
  Profile p;
  p.base_ = value;
  return p;
}

Profile Profile::bump(double base, Bump b) {
  Profile p = constant(base);
  p.add(b);
  return p;
}

Profile Profile::samples(std::vector<double> s, std::vector<double> v) {
  if (s.size() != v.size()) throw ValidationError("sample arrays differ in length");
  if (s.size() < 2) throw ValidationError("need at least two samples");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(v[i])) throw ValidationError("non-finite sample in profile");
    if (i > 0 && !(s[i] > s[i - 1])) throw ValidationError("sample abscissae must be strictly increasing");
  }
  Profile p;
  p.knot_s_ = std::move(s);
  p.knot_v_ = std::move(v);
  return p;
}

Profile Profile::from_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty profile CSV '" + path + "'");
  {
    std::string h = line;
    h.erase(std::remove_if(h.begin(), h.end(), [](unsigned char c) { return std::isspace(c); }), h.end());
    std::transform(h.begin(), h.end(), h.begin(), [](unsigned char c) { return std::tolower(c); });
    if (h != "s," + column) throw ValidationError("profile CSV header must be 's," + column + "'");
  }
  std::vector<double> s, v;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw ValidationError("malformed row " + std::to_string(lineno) + " in '" + path + "'");
    }
    try {
      s.push_back(std::stod(a));
      v.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ValidationError("non-numeric row " + std::to_string(lineno) + " in '" + path + "'");
    }
  }
  return samples(std::move(s), std::move(v));
}

Profile& Profile::add(Bump b) {
  if (!std::isfinite(b.amplitude) || !std::isfinite(b.center) || !(b.halfwidth > 0.0) ||
      !std::isfinite(b.halfwidth)) {
    throw ValidationError("bump needs finite amplitude/center and positive halfwidth");
  }
  bumps_.push_back(b);
  return *this;
}

Profile Profile::scaled(double factor) const {
  Profile p = *this;
  p.base_ *= factor;
  for (auto& b : p.bumps_) b.amplitude *= factor;
  for (auto& v : p.knot_v_) v *= factor;
  return p;
}

Profile Profile::plus(const Profile& other) const {
  if (!knot_s_.empty() && !other.knot_s_.empty()) {
    // Merge both sample sets onto the union of knots.
    std::vector<double> s = knot_s_;
    s.insert(s.end(), other.knot_s_.begin(), other.knot_s_.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    Profile lhs = *this, rhs = other;
    lhs.base_ = rhs.base_ = 0.0;
    lhs.bumps_.clear();
    rhs.bumps_.clear();
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = lhs(s[i]) + rhs(s[i]);
    Profile p = samples(std::move(s), std::move(v));
    p.base_ = base_ + other.base_;
    p.bumps_ = bumps_;
    p.bumps_.insert(p.bumps_.end(), other.bumps_.begin(), other.bumps_.end());
    return p;
  }
  // At most one side carries samples; keep those.
  Profile p = knot_s_.empty() ? other : *this;
  p.base_ = base_ + other.base_;
  p.bumps_ = bumps_;
  p.bumps_.insert(p.bumps_.end(), other.bumps_.begin(), other.bumps_.end());
  return p;
}

double Profile::operator()(double s) const {
  double v = base_;
  for (const auto& b : bumps_) v += b(s);
  if (!knot_s_.empty()) {
    if (s <= knot_s_.front()) {
      v += knot_v_.front();
    } else if (s >= knot_s_.back()) {
      v += knot_v_.back();
    } else {
      const auto it = std::upper_bound(knot_s_.begin(), knot_s_.end(), s);
      const std::size_t i = static_cast<std::size_t>(it - knot_s_.begin()) - 1;
      const double w = (s - knot_s_[i]) / (knot_s_[i + 1] - knot_s_[i]);
      v += (1.0 - w) * knot_v_[i] + w * knot_v_[i + 1];
    }
  }
  return v;
}

std::vector<double> Profile::critical_points(double lo, double hi) const {
  std::vector<double> pts{lo, hi};
  for (const auto& b : bumps_) {
    for (double x : {b.center, b.center - b.halfwidth, b.center + b.halfwidth}) {
      if (x > lo && x < hi) pts.push_back(x);
    }
  }
  for (double x : knot_s_) {
    if (x > lo && x < hi) pts.push_back(x);
  }
  constexpr int kDense = 4096;
  for (int i = 1; i < kDense; ++i) pts.push_back(lo + (hi - lo) * i / kDense);
  return pts;
}

double Profile::sup_norm(double lo, double hi) const {
  double m = 0.0;
  for (double x : critical_points(lo, hi)) m = std::max(m, std::abs((*this)(x)));
  return m;
}

double Profile::inf(double lo, double hi) const {
  double m = (*this)(lo);
  for (double x : critical_points(lo, hi)) m = std::min(m, (*this)(x));
  return m;
}

double Profile::sup(double lo, double hi) const {
  double m = (*this)(lo);
  for (double x : critical_points(lo, hi)) m = std::max(m, (*this)(x));
  return m;
}

std::optional<std::pair<double, double>> Profile::support(double lo, double hi) const {
  if (is_zero()) return std::nullopt;
  if (base_ != 0.0) return std::pair{lo, hi};
  double first = hi, last = lo;
  bool any = false;
  auto extend = [&](double a, double b) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (a > b) return;
    first = std::min(first, a);
    last = std::max(last, b);
    any = true;
  };
  for (const auto& b : bumps_) {
    if (b.amplitude != 0.0) extend(b.center - b.halfwidth, b.center + b.halfwidth);
  }
  if (!knot_s_.empty()) {
    const std::size_t n = knot_s_.size();
    if (knot_v_.front() != 0.0) extend(lo, knot_s_.front());
    if (knot_v_.back() != 0.0) extend(knot_s_.back(), hi);
    for (std::size_t i = 0; i < n; ++i) {
      if (knot_v_[i] == 0.0) continue;
      extend(i > 0 ? knot_s_[i - 1] : knot_s_[i], i + 1 < n ? knot_s_[i + 1] : knot_s_[i]);
    }
  }
  if (!any) return std::nullopt;
  return std::pair{first, last};
}

bool Profile::is_zero() const {
  if (base_ != 0.0) return false;
  for (const auto& b : bumps_) {
    if (b.amplitude != 0.0) return false;
  }
  for (double v : knot_v_) {
    if (v != 0.0) return false;
  }
  return true;
}

}  // namespace cstrip
