// Command-line front end: intensity traces, arrival densities, Fisher information,
// density sweeps, sampling and the verification suite.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "arrival/deltakernel.hpp"
#include "arrival/errors.hpp"
#include "arrival/fisher.hpp"
#include "arrival/intensity.hpp"
#include "arrival/process.hpp"
#include "arrival/scenario.hpp"
#include "arrival/verify.hpp"

using namespace arrival;

namespace {

constexpr int exit_config = 2;
constexpr int exit_tolerance = 3;
constexpr int exit_verify = 4;

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  double dt = 1e-3;
  double t_max = 60.0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "scenario file (key = value lines)");
  sub->add_option("--set", c.overrides, "scenario override key=value (repeatable)");
  sub->add_option("-o,--out", c.out, "output file (default stdout)");
  sub->add_option("--dt", c.dt, "solver step for finite sources");
  sub->add_option("--t-max", c.t_max, "tabulation end for finite sources");
}

Scenario load(const Common& c) {
  std::stringstream text;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw ConfigError("cannot open config file '" + c.config + "'");
    text << in.rdbuf() << '\n';
  }
  for (const auto& o : c.overrides) text << o << '\n';
  return parse_scenario(text);
}

ProfileOptions profile_options(const Common& c) {
  ProfileOptions po;
  po.dt = c.dt;
  po.t_max = c.t_max;
  return po;
}

/// Output stream: the named file or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// "1,2,5" or "1:10" or "1:10:3".
std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int lo = 0, hi = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream is(item);
    if (!(is >> lo)) throw ConfigError("bad integer list '" + s + "'");
    if (is >> c1) {
      if (c1 != ':' || !(is >> hi)) throw ConfigError("bad integer range '" + item + "'");
      if (is >> c2 && (c2 != ':' || !(is >> step) || step <= 0)) throw ConfigError("bad integer range '" + item + "'");
      for (int v = lo; v <= hi; v += step) out.push_back(v);
    } else {
      out.push_back(lo);
    }
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

StateFamily make_family(const std::string& name, const Scenario& scn, long fock_n) {
  switch (parse_family_kind(name)) {
    case FamilyKind::coherent: return StateFamily::coherent(scn.navg);
    case FamilyKind::quasi_free: return StateFamily::quasi_free(scn.navg);
    case FamilyKind::fock: {
      if (scn.beam()) throw ConfigError("the Fock family needs a finite source");
      const long N = fock_n > 0 ? fock_n : std::lround(scn.navg);
      if (std::fabs(static_cast<double>(N) - scn.navg) > 1e-9 && fock_n <= 0)
        throw ConfigError("Fock family: navg must be an integer (or pass --fock-n)");
      return StateFamily::fock(N);
    }
  }
  throw ConfigError("unknown family");
}

// ---------------------------------------------------------------- intensity

struct IntensityArgs {
  Common c;
  std::vector<double> eps;
  std::vector<double> navg;
  bool beam = false;
  double out_dt = 0.05;
};

int cmd_intensity(const IntensityArgs& a) {
  const Scenario base = load(a.c);
  const ProfileOptions po = profile_options(a.c);
  Output out(a.c.out);
  std::ostream& os = out.get();
  os << "trace,t,omega,Omega,domega_dp0\n";
  auto emit = [&](const std::string& name, const IntensityProfile& p, double t_end) {
    const long steps = std::lround(t_end / a.out_dt);
    for (long i = 0; i <= steps; ++i) {
      const double t = std::min(t_end, i * a.out_dt);
      os << name << ',' << num(t) << ',' << num(p.omega(t)) << ',' << num(p.Omega(t)) << ',' << num(p.domega(t))
         << '\n';
    }
  };
  std::vector<double> eps_list = a.eps, navg_list = a.navg;
  if (eps_list.empty() && navg_list.empty() && !a.beam) {
    if (base.beam()) {
      emit("beam r0=" + num(base.r0), build_profile(base, po), a.c.t_max);
      return 0;
    }
    (base.delta_detector() ? navg_list : eps_list).push_back(base.delta_detector() ? base.navg : base.eps);
  }
  for (double e : eps_list) {
    Scenario s = base;
    s.mode = SourceMode::finite;
    s.eps = e;
    emit("eps=" + num(e) + " navg=" + num(s.navg), build_profile(s, po), a.c.t_max);
  }
  for (double n : navg_list) {
    Scenario s = base;
    s.mode = SourceMode::finite;
    s.eps = 0.0;
    s.navg = n;
    emit("delta navg=" + num(n), build_profile(s, po), a.c.t_max);
  }
  if (a.beam) {
    const IntensityProfile p = build_beam_profile(base.p0, base.r0, DeltaParams(base.a, base.m));
    emit("beam r0=" + num(base.r0), p, a.c.t_max);
  }
  return 0;
}

// ---------------------------------------------------------------- density

struct DensityArgs {
  Common c;
  std::vector<std::string> families{"coherent", "quasi-free"};
  std::vector<double> r0;
  double out_dt = 0.05;
  std::string p2_out;
  double p2_dt = 0.25;
  double p2_t_max = 10.0;
};

int cmd_density(const DensityArgs& a) {
  const Scenario base = load(a.c);
  const DeltaParams dp(base.a, base.m);
  const std::vector<double> r0s = a.r0.empty() ? std::vector<double>{base.r0} : a.r0;
  Output out(a.c.out);
  std::ostream& os = out.get();
  os << "family,r0,t,p1\n";
  std::unique_ptr<Output> out2;
  if (!a.p2_out.empty()) {
    out2 = std::make_unique<Output>(a.p2_out);
    out2->get() << "family,r0,t1,t2,p2\n";
  }
  for (double r0 : r0s) {
    const IntensityProfile p = build_beam_profile(base.p0, r0, dp);
    for (const auto& name : a.families) {
      const StateFamily fam = make_family(name, Scenario{.navg = std::numeric_limits<double>::infinity()}, 0);
      const long steps = std::lround(a.c.t_max / a.out_dt);
      for (long i = 0; i <= steps; ++i) {
        const double t = i * a.out_dt;
        os << fam.name() << ',' << num(r0) << ',' << num(t) << ',' << num(p.omega(t) * fam.Fn(1, p.Omega(t))) << '\n';
      }
      if (out2) {
        const long m = std::lround(a.p2_t_max / a.p2_dt);
        for (long i = 0; i <= m; ++i)
          for (long j = i + 1; j <= m; ++j) {
            const double t1 = i * a.p2_dt, t2 = j * a.p2_dt;
            const double v = t1 > 0.0 ? joint_density({t1, t2}, fam, p)
                                      : p.omega(0.0) * p.omega(t2) * fam.Fn(2, p.Omega(t2));
            out2->get() << fam.name() << ',' << num(r0) << ',' << num(t1) << ',' << num(t2) << ',' << num(v) << '\n';
          }
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------- fisher

struct FisherArgs {
  Common c;
  std::string family = "coherent";
  std::string n = "1:10";
  std::vector<double> r0;
  long fock_n = 0;
};

int cmd_fisher(const FisherArgs& a) {
  const Scenario base = load(a.c);
  const std::vector<int> ns = parse_int_list(a.n);
  Output out(a.c.out);
  std::ostream& os = out.get();
  os << "n,r0,I_n,I_n_cond,p_n_tot,noevent_part\n";
  auto rows = [&](const IntensityProfile& p, const StateFamily& fam, double r0) {
    for (int n : ns) {
      const FisherReport r = fisher_info(n, fam, p);
      os << n << ',' << num(r0) << ',' << num(r.I_n) << ',' << num(r.I_n_conditional) << ',' << num(r.p_n_tot) << ','
         << num(r.noevent_part) << '\n';
    }
  };
  const StateFamily fam = make_family(a.family, base, a.fock_n);
  if (base.beam()) {
    const DeltaParams dp(base.a, base.m);
    const std::vector<double> r0s = a.r0.empty() ? std::vector<double>{base.r0} : a.r0;
    const IntensityProfile unit = build_beam_profile(base.p0, 1.0, dp);
    for (double r0 : r0s) rows(unit.scaled(r0), fam, r0);
  } else {
    if (!a.r0.empty()) throw ConfigError("--r0 applies to beam scenarios only");
    rows(build_profile(base, profile_options(a.c)), fam, base.r0);
  }
  return 0;
}

// ---------------------------------------------------------------- sweep-density

struct SweepArgs {
  Common c;
  std::vector<std::string> families{"coherent", "quasi-free"};
  std::string n = "1:10";
  std::vector<double> r0{0.0, 1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0};
};

int cmd_sweep(const SweepArgs& a) {
  const Scenario base = load(a.c);
  const DeltaParams dp(base.a, base.m);
  const std::vector<int> ns = parse_int_list(a.n);
  Output out(a.c.out);
  std::ostream& os = out.get();
  os << "family,n,r0,I_n\n";
  for (const auto& name : a.families) {
    const StateFamily fam = make_family(name, Scenario{.navg = std::numeric_limits<double>::infinity()}, 0);
    for (const SweepRow& r : density_sweep(ns, a.r0, fam, base.p0, dp))
      os << fam.name() << ',' << r.n << ',' << num(r.r0) << ',' << num(r.I_n) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  Common c;
  std::string family = "coherent";
  int n = 1;
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  long fock_n = 0;
};

int cmd_sample(const SampleArgs& a) {
  const Scenario base = load(a.c);
  const StateFamily fam = make_family(a.family, base, a.fock_n);
  const IntensityProfile p = build_profile(base, profile_options(a.c));
  const SampleBatch b = sample_batch(a.n, fam, p, a.count, a.seed);
  Output out(a.c.out);
  std::ostream& os = out.get();
  os << "# family=" << fam.name() << " n=" << a.n << " count=" << a.count << " seed=" << a.seed << '\n';
  os << "# k,t1..tk,terminated\n";
  char buf[40];
  for (const auto& r : b.records) {
    os << r.times.size();
    for (double t : r.times) {
      std::snprintf(buf, sizeof buf, "%.17g", t);
      os << ',' << buf;
    }
    os << ',' << (r.terminated ? 1 : 0) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string out;
  bool quick = false;
  bool skip_invariants = false;
  std::uint64_t seed = 20240611;
};

int cmd_verify(const VerifyArgs& a) {
  Output out(a.out);
  std::ostream& os = out.get();
  VerifyOptions opt;
  opt.seed = a.seed;
  if (a.quick) {
    opt.mc_samples = 20000;
    opt.mle_datasets = 2000;
  }
  int failed = 0;
  opt.on_result = [&](const CheckResult& r) {
    failed += r.pass ? 0 : 1;
    char head[96];
    std::snprintf(head, sizeof head, "%s  %-52s %8.2fs  ", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    os << head << r.detail << std::endl;
  };
  os << "# acceptance criteria\n";
  run_acceptance(opt);
  if (!a.skip_invariants) {
    os << "# invariants\n";
    run_invariants(opt);
  }
  os << "# " << failed << " failed\n";
  return failed == 0 ? 0 : exit_verify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arrival-time statistics of many-particle detection: intensities, densities, Fisher information"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (overrides ARRIVAL_THREADS)");
  app.fallthrough();

  IntensityArgs ia;
  auto* si = app.add_subcommand("intensity", "omega(t), Omega(t) and d omega / d p0 traces");
  add_common(si, ia.c);
  si->add_option("--eps", ia.eps, "finite-width detector widths")->delimiter(',');
  si->add_option("--navg", ia.navg, "mean particle numbers for delta-detector traces")->delimiter(',');
  si->add_flag("--beam", ia.beam, "add the beam trace at the scenario r0");
  si->add_option("--out-dt", ia.out_dt, "output spacing");

  DensityArgs da;
  auto* sd = app.add_subcommand("density", "beam first-arrival density p1 (and optionally p2)");
  add_common(sd, da.c);
  sd->add_option("--family", da.families, "coherent, quasi-free")->delimiter(',');
  sd->add_option("--r0", da.r0, "beam densities")->delimiter(',');
  sd->add_option("--out-dt", da.out_dt, "output spacing");
  sd->add_option("--p2-out", da.p2_out, "also write p2(t1,t2) to this file");
  sd->add_option("--p2-dt", da.p2_dt, "p2 grid spacing");
  sd->add_option("--p2-t-max", da.p2_t_max, "p2 grid end");

  FisherArgs fa;
  auto* sf = app.add_subcommand("fisher", "Fisher information I_n of p0");
  add_common(sf, fa.c);
  sf->add_option("--family", fa.family, "fock, coherent, quasi-free");
  sf->add_option("-n", fa.n, "detections: list 1,2,5 or range 1:40[:step]");
  sf->add_option("--r0", fa.r0, "beam densities (beam scenarios)")->delimiter(',');
  sf->add_option("--fock-n", fa.fock_n, "particle number of the Fock family (default navg)");

  SweepArgs wa;
  auto* sw = app.add_subcommand("sweep-density", "beam I_n over a grid of n and r0");
  add_common(sw, wa.c);
  sw->add_option("--family", wa.families, "coherent, quasi-free")->delimiter(',');
  sw->add_option("-n", wa.n, "detections: list or range");
  sw->add_option("--r0", wa.r0, "densities; 0 uses the sparse limit")->delimiter(',');

  SampleArgs pa;
  auto* sp = app.add_subcommand("sample", "draw arrival records");
  add_common(sp, pa.c);
  sp->add_option("--family", pa.family, "fock, coherent, quasi-free");
  sp->add_option("-n", pa.n, "detections per record")->check(CLI::PositiveNumber);
  sp->add_option("--count", pa.count, "records");
  sp->add_option("--seed", pa.seed, "random seed");
  sp->add_option("--fock-n", pa.fock_n, "particle number of the Fock family (default navg)");

  VerifyArgs va;
  auto* sv = app.add_subcommand("verify", "acceptance criteria and invariants");
  sv->add_option("-o,--out", va.out, "report file (default stdout)");
  sv->add_flag("--quick", va.quick, "smaller Monte Carlo samples");
  sv->add_flag("--skip-invariants", va.skip_invariants, "acceptance criteria only");
  sv->add_option("--seed", va.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }
  if (threads > 0) setenv("ARRIVAL_THREADS", std::to_string(threads).c_str(), 1);

  try {
    if (*si) return cmd_intensity(ia);
    if (*sd) return cmd_density(da);
    if (*sf) return cmd_fisher(fa);
    if (*sw) return cmd_sweep(wa);
    if (*sp) return cmd_sample(pa);
    if (*sv) return cmd_verify(va);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const ToleranceError& e) {
    std::cerr << "tolerance error: " << e.what() << " (estimate " << e.estimate() << ", error " << e.error() << ")\n";
    return exit_tolerance;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
