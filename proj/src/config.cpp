#include "vfp/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "vfp/common.hpp"
#include "vfp/io.hpp"
#include "vfp/moments.hpp"

namespace vfp {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, val] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key \"" + (where.empty() ? key : where + "." + key) + "\"");
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw ConfigError(std::string("field \"") + key + "\" must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError(std::string("field \"") + key + "\" must be an integer");
  return obj[key].get<int>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, "",
                 {"grid", "reg", "dt", "t_end", "record_every",
                  "snapshot_every", "picard", "initial", "seed", "particles",
                  "sweep", "audits"});

  RunConfig c;
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"dim", "nx", "nv", "vmax", "period"});
    c.dim = get_int(g, "dim", c.dim);
    c.nx = get_int(g, "nx", c.nx);
    c.nv = get_int(g, "nv", c.nv);
    c.vmax = get_num(g, "vmax", c.vmax);
    c.period = get_num(g, "period", c.period);
  }
  if (j.contains("reg") && !j["reg"].is_null()) {
    const json& r = j["reg"];
    reject_unknown(r, "reg", {"eps", "delta"});
    RegParams p;
    p.eps = get_num(r, "eps", 0.1);
    p.delta = get_num(r, "delta", 0.1);
    if (!(p.eps > 0.0 && p.eps < 1.0))
      throw ConfigError("field \"reg.eps\" must lie in (0,1)");
    if (!(p.delta > 0.0 && p.delta < 1.0))
      throw ConfigError("field \"reg.delta\" must lie in (0,1)");
    c.reg = p;
  }
  c.dt = get_num(j, "dt", 0.0);
  c.t_end = get_num(j, "t_end", c.t_end);
  if (c.t_end < 0.0) throw ConfigError("field \"t_end\" must be >= 0");
  if (c.dt < 0.0) throw ConfigError("field \"dt\" must be > 0");
  c.record_every = get_int(j, "record_every", c.record_every);
  c.snapshot_every = get_int(j, "snapshot_every", c.snapshot_every);
  if (c.record_every < 1) throw ConfigError("field \"record_every\" must be >= 1");
  if (c.snapshot_every < 0)
    throw ConfigError("field \"snapshot_every\" must be >= 0");

  if (j.contains("picard")) {
    const json& p = j["picard"];
    reject_unknown(p, "picard", {"n_max", "tol", "q"});
    c.picard.n_max = get_int(p, "n_max", c.picard.n_max);
    c.picard.tol = get_num(p, "tol", c.picard.tol);
    c.picard.q = get_num(p, "q", c.picard.q);
    if (c.picard.n_max < 1) throw ConfigError("field \"picard.n_max\" must be >= 1");
    if (!(c.picard.tol > 0.0)) throw ConfigError("field \"picard.tol\" must be > 0");
  }
  if (c.picard.q <= c.dim + 4)
    c.picard.q = c.dim + 5.0;  // Cauchy-metric hypothesis q > N + 4

  if (j.contains("initial")) {
    const json& i = j["initial"];
    reject_unknown(i, "initial",
                   {"preset", "rho", "u", "T", "T1", "T2", "amp", "mode",
                    "path"});
    const std::string preset =
        i.contains("preset") ? i["preset"].get<std::string>() : "maxwellian";
    if (preset == "maxwellian")
      c.initial.kind = InitialSpec::Kind::maxwellian;
    else if (preset == "bimodal")
      c.initial.kind = InitialSpec::Kind::bimodal;
    else if (preset == "sin-perturbed-maxwellian")
      c.initial.kind = InitialSpec::Kind::sin_perturbed;
    else if (preset == "file")
      c.initial.kind = InitialSpec::Kind::file;
    else
      throw ConfigError("unknown initial preset \"" + preset + "\"");
    c.initial.rho = get_num(i, "rho", c.initial.rho);
    c.initial.u = get_num(i, "u", c.initial.u);
    c.initial.T = get_num(i, "T", c.initial.T);
    c.initial.T1 = get_num(i, "T1", c.initial.T1);
    c.initial.T2 = get_num(i, "T2", c.initial.T2);
    c.initial.amp = get_num(i, "amp", c.initial.amp);
    c.initial.mode = get_int(i, "mode", c.initial.mode);
    if (i.contains("path")) c.initial.path = i["path"].get<std::string>();
    if (c.initial.kind == InitialSpec::Kind::file && c.initial.path.empty())
      throw ConfigError("field \"initial.path\" required for the file preset");
    if (std::abs(c.initial.amp) >= 1.0)
      throw ConfigError("field \"initial.amp\" must satisfy |amp| < 1");
    if (!(c.initial.rho > 0.0)) throw ConfigError("field \"initial.rho\" must be > 0");
    for (double T : {c.initial.T, c.initial.T1, c.initial.T2})
      if (!(T > 0.0)) throw ConfigError("initial temperatures must be > 0");
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("particles")) {
    const json& p = j["particles"];
    reject_unknown(p, "particles", {"n_p"});
    c.n_p = get_int(p, "n_p", c.n_p);
    if (c.n_p < 1) throw ConfigError("field \"particles.n_p\" must be >= 1");
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, "sweep", {"eps_list", "delta_list"});
    if (s.contains("eps_list"))
      c.eps_list = s["eps_list"].get<std::vector<double>>();
    if (s.contains("delta_list"))
      c.delta_list = s["delta_list"].get<std::vector<double>>();
  }
  if (j.contains("audits")) {
    const json& a = j["audits"];
    reject_unknown(a, "audits",
                   {"conservation", "h_theorem", "lp_growth", "bounds"});
    auto get_bool = [&](const char* key, bool fb) {
      return a.contains(key) ? a[key].get<bool>() : fb;
    };
    c.audits.conservation = get_bool("conservation", true);
    c.audits.h_theorem = get_bool("h_theorem", true);
    c.audits.lp_growth = get_bool("lp_growth", true);
    c.audits.bounds = get_bool("bounds", true);
  }

  // Validate the grid now so errors surface before any allocation.
  build_grid(c.dim, c.nx, c.nv, c.vmax, c.period);
  return c;
}

std::string config_echo(const RunConfig& c) {
  json j;
  j["grid"] = {{"dim", c.dim},
               {"nx", c.nx},
               {"nv", c.nv},
               {"vmax", c.vmax},
               {"period", c.period}};
  if (c.reg)
    j["reg"] = {{"eps", c.reg->eps}, {"delta", c.reg->delta}};
  else
    j["reg"] = nullptr;
  j["dt"] = c.dt > 0.0 ? c.dt : 0.5 * (c.period / c.nx) / c.vmax;
  j["t_end"] = c.t_end;
  j["record_every"] = c.record_every;
  j["snapshot_every"] = c.snapshot_every;
  j["picard"] = {{"n_max", c.picard.n_max},
                 {"tol", c.picard.tol},
                 {"q", c.picard.q}};
  json init;
  switch (c.initial.kind) {
    case InitialSpec::Kind::maxwellian:
      init["preset"] = "maxwellian";
      break;
    case InitialSpec::Kind::bimodal:
      init["preset"] = "bimodal";
      break;
    case InitialSpec::Kind::sin_perturbed:
      init["preset"] = "sin-perturbed-maxwellian";
      break;
    case InitialSpec::Kind::file:
      init["preset"] = "file";
      init["path"] = c.initial.path;
      break;
  }
  init["rho"] = c.initial.rho;
  init["u"] = c.initial.u;
  init["T"] = c.initial.T;
  init["T1"] = c.initial.T1;
  init["T2"] = c.initial.T2;
  init["amp"] = c.initial.amp;
  init["mode"] = c.initial.mode;
  j["initial"] = init;
  j["seed"] = c.seed;
  j["particles"] = {{"n_p", c.n_p}};
  j["sweep"] = {{"eps_list", c.eps_list}, {"delta_list", c.delta_list}};
  j["audits"] = {{"conservation", c.audits.conservation},
                 {"h_theorem", c.audits.h_theorem},
                 {"lp_growth", c.audits.lp_growth},
                 {"bounds", c.audits.bounds}};
  return j.dump(2) + "\n";
}

SolverConfig to_solver_config(const RunConfig& c) {
  SolverConfig s;
  s.grid = build_grid(c.dim, c.nx, c.nv, c.vmax, c.period);
  s.reg = c.reg;
  s.dt = c.dt;
  s.t_end = c.t_end;
  s.record_every = c.record_every;
  s.snapshot_every = c.snapshot_every;
  s.picard = c.picard;
  return s;
}

namespace {

double maxwellian_nd(int dim, double rho, double u0, double T, Coord v) {
  double d2 = sq(v[0] - u0);
  if (dim == 2) d2 += sq(v[1]);
  return rho / std::pow(2.0 * M_PI * T, 0.5 * dim) * std::exp(-d2 / (2.0 * T));
}

}  // namespace

DistField make_initial(const RunConfig& c) {
  const PhaseGrid grid = build_grid(c.dim, c.nx, c.nv, c.vmax, c.period);
  const InitialSpec& s = c.initial;
  switch (s.kind) {
    case InitialSpec::Kind::maxwellian:
      return sample_function(grid, [&](Coord, Coord v) {
        return maxwellian_nd(c.dim, s.rho, s.u, s.T, v);
      });
    case InitialSpec::Kind::bimodal:
      return sample_function(grid, [&](Coord, Coord v) {
        return 0.5 * maxwellian_nd(c.dim, s.rho, s.u, s.T1, v) +
               0.5 * maxwellian_nd(c.dim, s.rho, s.u, s.T2, v);
      });
    case InitialSpec::Kind::sin_perturbed:
      return sample_function(grid, [&](Coord x, Coord v) {
        const double mod =
            1.0 + s.amp * std::sin(2.0 * M_PI * s.mode * x[0] / c.period);
        return mod * maxwellian_nd(c.dim, s.rho, s.u, s.T, v);
      });
    case InitialSpec::Kind::file: {
      auto [f, time] = read_snapshot(s.path);
      if (!f.grid.same_as(grid))
        throw ConfigError("initial file grid does not match config grid");
      return std::move(f);
    }
  }
  throw ConfigError("unreachable initial kind");
}

}  // namespace vfp
