#pragma once

#include <iosfwd>
#include <limits>
#include <string>

namespace arrival {

/// Unit convention: hbar = 1, lengths in l, times in tau, momenta in hbar/l,
/// masses in (hbar/l) tau / l. Every stored quantity is a plain double in these units.
struct Units {
  static constexpr double hbar = 1.0;
};

enum class SourceMode { finite, beam };

/// Physical parameters of one detection scenario.
struct Scenario {
  double m = 1.0;        ///< particle mass
  double a = 0.1;        ///< detection strength (l/tau)
  double eps = 0.0;      ///< detector width; 0 selects the delta detector
  double p0 = 1.0;       ///< mean source momentum
  double x0 = -20.0;     ///< source position
  double dp = 0.70710678118654752;  ///< momentum width
  double navg = 100.0;   ///< mean particle number, infinite in beam mode
  double r0 = 56.42;     ///< beam spatial density
  SourceMode mode = SourceMode::finite;

  bool delta_detector() const { return eps == 0.0; }
  bool beam() const { return mode == SourceMode::beam; }
  /// Absorption rate of the Gaussian detector, a / (2 eps sqrt(2 pi)).
  double gamma() const;
  /// Throws ConfigError when a field violates its range or the mode invariants.
  void validate() const;
};

/// Momentum width of the Gaussian member with density r0 at the peak: sqrt(pi/2) r0 / navg.
double beam_family_width(double r0, double navg);

/// Finite-navg member of the beam limit family with the given peak density.
Scenario beam_family_member(const Scenario& beam, double navg);

/// Parse "key = value" lines (keys m, a, eps, p0, x0, dp, navg, r0, mode).
/// '#' starts a comment. Missing keys keep their defaults.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& scn);

enum class FamilyKind { fock, coherent, quasi_free };

/// Source-state family: supplies F(Omega), F_n = (-1)^n F^(n) and H_n = F_{n+1}/F_n.
class StateFamily {
 public:
  static StateFamily fock(long n_particles);
  static StateFamily coherent(double navg = std::numeric_limits<double>::infinity());
  static StateFamily quasi_free(double navg = std::numeric_limits<double>::infinity());

  FamilyKind kind() const { return kind_; }
  long particles() const { return n_particles_; }
  double mean() const { return navg_; }
  /// Upper end of the Omega domain on which F > 0 (N for Fock, infinity otherwise).
  double domain_end() const;
  std::string name() const;

  double F(double omega) const;
  double Fn(int n, double omega) const;
  /// log F_n; -infinity where F_n vanishes.
  double log_Fn(int n, double omega) const;
  /// Throws DomainError where F_n(omega) = 0.
  double Hn(int n, double omega) const;

 private:
  StateFamily(FamilyKind kind, long n, double navg) : kind_(kind), n_particles_(n), navg_(navg) {}
  FamilyKind kind_;
  long n_particles_;
  double navg_;
};

FamilyKind parse_family_kind(const std::string& name);

}  // namespace arrival
