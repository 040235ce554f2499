#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vfp/grid.hpp"
#include "vfp/solver.hpp"

namespace vfp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InitialSpec {
  enum class Kind { maxwellian, bimodal, sin_perturbed, file };
  Kind kind = Kind::maxwellian;
  double rho = 1.0;
  double u = 0.0;  // bulk velocity along axis 0
  double T = 1.0;
  double T1 = 0.5;  // bimodal mixture temperatures
  double T2 = 2.0;
  double amp = 0.1;  // sin perturbation amplitude, |amp| < 1
  int mode = 1;      // sin perturbation wavenumber
  std::string path;  // file preset
};

struct AuditToggles {
  bool conservation = true;
  bool h_theorem = true;  // asserted for raw runs; informational otherwise
  bool lp_growth = true;
  bool bounds = true;
};

struct RunConfig {
  int dim = 1;
  int nx = 32;
  int nv = 64;
  double vmax = 8.0;
  double period = 1.0;
  std::optional<RegParams> reg;
  double dt = 0.0;  // 0 -> 0.5 dx / vmax
  double t_end = 1.0;
  int record_every = 1;
  int snapshot_every = 0;
  PicardParams picard;
  InitialSpec initial;
  std::uint64_t seed = 12345;
  int n_p = 100000;
  std::vector<double> eps_list;
  std::vector<double> delta_list;
  AuditToggles audits;
};

/// Parses and validates a JSON config; unknown keys are rejected, defaults
/// filled in.
RunConfig parse_config(const std::string& text);

/// Fully resolved config as JSON; parse_config(config_echo(c)) reproduces c.
std::string config_echo(const RunConfig& c);

SolverConfig to_solver_config(const RunConfig& c);

/// Builds the configured initial condition on the configured grid.
DistField make_initial(const RunConfig& c);

}  // namespace vfp
