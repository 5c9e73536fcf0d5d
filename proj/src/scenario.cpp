#include "arrival/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr double pi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has non-numeric value '" + text + "'");
  }
  if (used != text.size())
    throw ConfigError("config: key '" + key + "' has trailing characters in '" + text + "'");
  return v;
}

}  // namespace

double Scenario::gamma() const {
  if (eps <= 0.0) throw DomainError("gamma: defined only for a finite-width detector");
  return a / (2.0 * eps * std::sqrt(2.0 * pi));
}

void Scenario::validate() const {
  auto bad = [](const std::string& msg) { throw ConfigError("scenario: " + msg); };
  if (!(m > 0.0) || !std::isfinite(m)) bad("m must be positive");
  if (!(a >= 0.0) || !std::isfinite(a)) bad("a must be nonnegative");
  if (!(eps >= 0.0) || !std::isfinite(eps)) bad("eps must be nonnegative");
  if (!std::isfinite(p0)) bad("p0 must be finite");
  if (!std::isfinite(x0)) bad("x0 must be finite");
  if (beam()) {
    if (!std::isinf(navg)) bad("beam mode requires navg = inf");
    if (!(r0 > 0.0) || !std::isfinite(r0)) bad("beam mode requires r0 > 0");
    if (eps != 0.0) bad("beam mode is available for the delta detector only (eps = 0)");
    if (!(p0 > 0.0)) bad("beam mode requires p0 > 0");
  } else {
    if (!(navg > 0.0) || std::isinf(navg)) bad("finite mode requires 0 < navg < inf");
    if (!(dp > 0.0) || !std::isfinite(dp)) bad("dp must be positive");
  }
}

double beam_family_width(double r0, double navg) { return std::sqrt(pi / 2.0) * r0 / navg; }

Scenario beam_family_member(const Scenario& beam, double navg) {
  Scenario s = beam;
  s.mode = SourceMode::finite;
  s.navg = navg;
  s.dp = beam_family_width(beam.r0, navg);
  return s;
}

Scenario parse_scenario(std::istream& in) {
  Scenario s;
  bool have_dp = false, have_r0 = false, have_navg = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "mode") {
      if (value == "finite") s.mode = SourceMode::finite;
      else if (value == "beam") s.mode = SourceMode::beam;
      else throw ConfigError("config: mode must be finite or beam, got '" + value + "'");
    } else if (key == "m") s.m = parse_number(key, value);
    else if (key == "a") s.a = parse_number(key, value);
    else if (key == "eps") s.eps = parse_number(key, value);
    else if (key == "p0") s.p0 = parse_number(key, value);
    else if (key == "x0") s.x0 = parse_number(key, value);
    else if (key == "dp") { s.dp = parse_number(key, value); have_dp = true; }
    else if (key == "navg") { s.navg = parse_number(key, value); have_navg = true; }
    else if (key == "r0") { s.r0 = parse_number(key, value); have_r0 = true; }
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  if (s.beam()) {
    if (have_navg && !std::isinf(s.navg)) throw ConfigError("config: beam mode requires navg = inf");
    s.navg = std::numeric_limits<double>::infinity();
  } else if (!have_dp && have_r0) {
    s.dp = beam_family_width(s.r0, s.navg);
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_scenario(in);
}

void write_scenario(std::ostream& out, const Scenario& s) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "mode = " << (s.beam() ? "beam" : "finite") << '\n'
     << "m = " << s.m << '\n'
     << "a = " << s.a << '\n'
     << "eps = " << s.eps << '\n'
     << "p0 = " << s.p0 << '\n'
     << "x0 = " << s.x0 << '\n'
     << "dp = " << s.dp << '\n'
     << "r0 = " << s.r0 << '\n';
  if (!s.beam()) os << "navg = " << s.navg << '\n';
  out << os.str();
}

// ---------------------------------------------------------------------------

StateFamily StateFamily::fock(long n_particles) {
  if (n_particles < 1) throw DomainError("Fock family needs N >= 1");
  return {FamilyKind::fock, n_particles, static_cast<double>(n_particles)};
}

StateFamily StateFamily::coherent(double navg) {
  if (!(navg > 0.0)) throw DomainError("coherent family needs navg > 0");
  return {FamilyKind::coherent, 0, navg};
}

StateFamily StateFamily::quasi_free(double navg) {
  if (!(navg > 0.0)) throw DomainError("quasi-free family needs navg > 0");
  return {FamilyKind::quasi_free, 0, navg};
}

double StateFamily::domain_end() const {
  return kind_ == FamilyKind::fock ? static_cast<double>(n_particles_)
                                   : std::numeric_limits<double>::infinity();
}

std::string StateFamily::name() const {
  switch (kind_) {
    case FamilyKind::fock: return "fock";
    case FamilyKind::coherent: return "coherent";
    case FamilyKind::quasi_free: return "quasi-free";
  }
  return "?";
}

double StateFamily::F(double omega) const { return Fn(0, omega); }

double StateFamily::log_Fn(int n, double omega) const {
  if (n < 0) throw DomainError("F_n: n must be nonnegative");
  if (!(omega >= 0.0)) throw DomainError("F_n: Omega must be nonnegative");
  const double ninf = -std::numeric_limits<double>::infinity();
  switch (kind_) {
    case FamilyKind::coherent:
      return -omega;
    case FamilyKind::quasi_free:
      return std::lgamma(n + 1.0) - (n + 1.0) * std::log1p(omega);
    case FamilyKind::fock: {
      const double N = static_cast<double>(n_particles_);
      if (n > n_particles_ || omega > N) return ninf;
      const double pre = std::lgamma(N + 1.0) - n * std::log(N) - std::lgamma(N - n + 1.0);
      if (n == n_particles_) return pre;
      if (omega == N) return ninf;
      return pre + (N - n) * std::log1p(-omega / N);
    }
  }
  return ninf;
}

double StateFamily::Fn(int n, double omega) const {
  if (kind_ == FamilyKind::coherent) {
    if (n < 0) throw DomainError("F_n: n must be nonnegative");
    if (!(omega >= 0.0)) throw DomainError("F_n: Omega must be nonnegative");
    return std::exp(-omega);
  }
  return std::exp(log_Fn(n, omega));
}

double StateFamily::Hn(int n, double omega) const {
  if (log_Fn(n, omega) == -std::numeric_limits<double>::infinity())
    throw DomainError("H_n: F_n vanishes (singular family point)");
  switch (kind_) {
    case FamilyKind::coherent: return 1.0;
    case FamilyKind::quasi_free: return (n + 1.0) / (1.0 + omega);
    case FamilyKind::fock: {
      const double N = static_cast<double>(n_particles_);
      if (n >= n_particles_) return 0.0;
      return (N - n) / (N - omega);
    }
  }
  return 0.0;
}

FamilyKind parse_family_kind(const std::string& name) {
  if (name == "fock") return FamilyKind::fock;
  if (name == "coherent") return FamilyKind::coherent;
  if (name == "quasi-free" || name == "quasifree" || name == "quasi_free") return FamilyKind::quasi_free;
  throw ConfigError("unknown family '" + name + "' (fock, coherent, quasi-free)");
}

}  // namespace arrival
