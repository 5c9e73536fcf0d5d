#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "arrival/deltakernel.hpp"
#include "arrival/propagate.hpp"
#include "arrival/scenario.hpp"

namespace arrival {

enum class ProfileMode { finite_width, delta_finite, delta_beam, stationary };

/// How the delta-detector, finite-navg intensity is obtained.
enum class DeltaRoute {
  renewal,        ///< product-integration solve of the renewal equation (default)
  superposition,  ///< f = int f_p chi dp at every grid node (slow; cross-check)
};

struct ProfileOptions {
  double dt = 1e-3;               ///< finite modes: solver step
  double t_max = 60.0;            ///< finite modes: tabulation end
  double fd_step = 1e-4;          ///< finite modes: central-difference step in p0
  bool derivatives = true;        ///< finite modes: compute d/dp0 (two extra solves)
  bool fd_check = true;           ///< finite modes: compare with step fd_step/2 at build time
  DeltaRoute delta_route = DeltaRoute::renewal;
  double beam_t_end = 5e4;        ///< beam: tabulation end before the stationary tail
  std::size_t beam_max_panels = 20000;
};

/// Behaviour of the profile beyond the tabulated range.
struct TailModel {
  enum class Kind { none, stationary, power_law };
  Kind kind = Kind::none;
  double t0 = 0.0;          ///< start of the tail
  double Omega0 = 0.0;      ///< Omega, dOmega/dp0 and int (domega)^2/omega at t0
  double dOmega0 = 0.0;
  double dOmega2_0 = 0.0;
  double omega = 0.0;       ///< stationary: limiting rates; power law: rates at t0
  double domega = 0.0;
  double beta = 0.0;        ///< power law: omega ~ t^{-beta}
  double osc_sq = 0.0;      ///< stationary: t * mean square of the oscillating part of domega
};

/// Node table shared by the Fisher quadrature: per node, the time, the quadrature weight
/// and the running integrals Omega, dOmega/dp0, int (domega)^2/omega.
struct ProfileTable {
  std::vector<double> t, weight, omega, domega, Omega, dOmega, dOmega2;
  std::size_t size() const { return t.size(); }
};

/// Immutable intensity profile omega(t), Omega(t) and their p0-derivatives.
class IntensityProfile {
 public:
  /// Interpolation on a tabulation panel: Chebyshev-Lobatto (17 nodes), linear cell
  /// (2 nodes), or first cell with the c0 + c1 sqrt(t) cusp model (2 nodes).
  enum class PanelKind { chebyshev, linear, cusp };
  struct Panel {
    double t0, t1;
    std::size_t first;
    PanelKind kind;
    std::size_t count() const { return kind == PanelKind::chebyshev ? 17 : 2; }
  };

  ProfileMode mode() const { return mode_; }
  double omega(double t) const;
  double domega(double t) const;
  double Omega(double t) const;
  double dOmega(double t) const;
  /// int_0^t (domega)^2 / omega.
  double dOmega2(double t) const;
  double Omega_inf() const { return Omega_inf_; }
  double dOmega_inf() const { return dOmega_inf_; }
  /// Smallest t with Omega(t) = u. Throws RangeError if u >= Omega(inf).
  double invert_Omega(double u) const;
  const ProfileTable& table() const { return table_; }
  const TailModel& tail() const { return tail_; }
  double t_end() const { return tail_.t0; }
  /// Mean particle number bound for finite modes (infinity otherwise).
  double navg() const { return navg_; }
  bool has_derivatives() const { return has_derivatives_; }
  /// Profile with omega multiplied by factor (beam density rescaling).
  IntensityProfile scaled(double factor) const;
  const std::vector<Panel>& panels() const { return panels_; }

  friend IntensityProfile build_profile(const Scenario&, const ProfileOptions&);
  friend IntensityProfile build_beam_profile(double, double, const DeltaParams&, const ProfileOptions&);
  friend IntensityProfile make_stationary_profile(double, double);

 private:
  std::size_t find_panel(double t) const;
  double panel_value(const Panel& p, const std::vector<double>& f, double t) const;
  double panel_integral(const Panel& p, const std::vector<double>& f, const std::vector<double>& F, double t) const;

  ProfileMode mode_ = ProfileMode::stationary;
  std::vector<Panel> panels_;
  ProfileTable table_;
  TailModel tail_;
  double Omega_inf_ = 0.0;
  double dOmega_inf_ = 0.0;
  double navg_ = 0.0;
  bool has_derivatives_ = true;
  std::optional<DeltaParams> beam_params_;
  double beam_p0_ = 0.0;
  double beam_r0_ = 0.0;
};

/// Profile for any scenario mode.
IntensityProfile build_profile(const Scenario& scn, const ProfileOptions& opt = {});

/// Beam profile at density r0 (Chebyshev panels, stationary tail).
IntensityProfile build_beam_profile(double p0, double r0, const DeltaParams& dp,
                                    const ProfileOptions& opt = {});

/// Constant-rate synthetic profile omega = omega0, domega = domega0.
IntensityProfile make_stationary_profile(double omega0, double domega0);

/// Raw single-solve intensity on the solver grid (no derivatives, no tail).
std::vector<double> intensity_on_grid(const Scenario& scn, const TimeGrid& grid,
                                      DeltaRoute route = DeltaRoute::renewal);

}  // namespace arrival
