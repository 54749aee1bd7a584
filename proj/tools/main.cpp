// Configuration-driven front end: design, contour, jsi, coefficients,
// efficiency, sweep.  Exit codes: 0 success, 1 computational failure,
// 2 usage / validation error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfs/efficiency.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pfs;

namespace {

constexpr const char* tool_version = "1.0.0";

// ---------------------------------------------------------------------------
// Strict unit-suffix parsing.  Every physical quantity in the config is a
// string "value unit"; a missing or unknown suffix is a validation error.
// Bandwidths follow the angular convention: "23.5 GHz" means 2.35e10 rad/s.
// Repetition rates are true cyclic frequencies in Hz.

enum class Dim { length, angular_bandwidth, time, power, frequency };

double parse_quantity(const std::string& text, Dim dim, const std::string& key) {
  std::istringstream in(text);
  double value = 0;
  std::string unit;
  if (!(in >> value >> unit) || !(in >> std::ws).eof())
    throw std::invalid_argument("config: '" + key + "' must be \"<number> <unit>\", got '" +
                                text + "'");
  auto fail = [&]() -> double {
    throw std::invalid_argument("config: '" + key + "' has unsupported unit '" + unit + "'");
  };
  switch (dim) {
    case Dim::length:
      if (unit == "nm") return value * 1e-9;
      if (unit == "um") return value * 1e-6;
      if (unit == "mm") return value * 1e-3;
      if (unit == "cm") return value * 1e-2;
      if (unit == "m") return value;
      return fail();
    case Dim::angular_bandwidth:  // rad/s via the paper-style GHz/THz labels
      if (unit == "MHz") return value * 1e6;
      if (unit == "GHz") return value * 1e9;
      if (unit == "THz") return value * 1e12;
      return fail();
    case Dim::time:
      if (unit == "fs") return value * 1e-15;
      if (unit == "ps") return value * 1e-12;
      if (unit == "ns") return value * 1e-9;
      return fail();
    case Dim::power:
      if (unit == "uW") return value * 1e-6;
      if (unit == "mW") return value * 1e-3;
      if (unit == "W") return value;
      return fail();
    case Dim::frequency:
      if (unit == "Hz") return value;
      if (unit == "kHz") return value * 1e3;
      if (unit == "MHz") return value * 1e6;
      if (unit == "GHz") return value * 1e9;
      return fail();
  }
  return fail();
}

// ---------------------------------------------------------------------------
// Run configuration: five sections (fiber / pump / process / numerics / output).

struct SweepSpec {
  SweepParameter parameter = SweepParameter::bandwidth;
  double min = 0, max = 0;
  int points = 0;
  bool log_scale = true;
};

struct RunConfig {
  // fiber
  std::optional<double> radius;         // m
  std::optional<double> design_target;  // m; degenerate TOSPDC wavelength
  double cladding_index = 1.0;
  // pump
  double pump_lambda = 0;    // m
  double sigma = 0;          // rad/s; 0 = monochromatic
  double average_power = 0;  // W
  double rep_rate = 0;       // Hz
  // process
  bool run_sfwm = false, run_tospdc = false;
  double length = 0;  // m
  std::optional<double> contour_pump_min, contour_pump_max;  // m
  std::optional<double> fixed_idler;                         // m, TOSPDC contour
  std::optional<SweepSpec> sweep_spec;
  // numerics
  int grid_points = 256;
  int profile_points = 1024;
  double resolution = 1.0;
  double tail_tol = 1e-3;
  int dispersion_samples = 400;
  int contour_pump_points = 200;
  double chi3 = chi3_silica_default;
  // output
  std::string directory = ".";
  std::vector<std::string> formats = {"csv"};

  uint64_t hash = 0;  // FNV-1a of the raw config bytes
};

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument("config: missing '" + key + "' in section '" + where + "'");
  return *it;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string raw = buf.str();

  json j;
  try {
    j = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  cfg.hash = fnv1a(raw);

  const json& fiber = require(j, "fiber", "top level");
  if (fiber.contains("radius"))
    cfg.radius = parse_quantity(fiber["radius"].get<std::string>(), Dim::length, "fiber.radius");
  if (fiber.contains("design_target_wavelength"))
    cfg.design_target = parse_quantity(fiber["design_target_wavelength"].get<std::string>(),
                                       Dim::length, "fiber.design_target_wavelength");
  if (cfg.radius.has_value() == cfg.design_target.has_value())
    throw std::invalid_argument(
        "config: exactly one of fiber.radius / fiber.design_target_wavelength is required");
  if (fiber.contains("cladding_index")) cfg.cladding_index = fiber["cladding_index"].get<double>();

  const json& pump = require(j, "pump", "top level");
  cfg.pump_lambda =
      parse_quantity(require(pump, "wavelength", "pump").get<std::string>(), Dim::length,
                     "pump.wavelength");
  const bool has_sigma = pump.contains("bandwidth");
  const bool has_tau = pump.contains("pulse_duration");
  if (has_sigma && has_tau)
    throw std::invalid_argument("config: pump.bandwidth and pump.pulse_duration are exclusive");
  if (has_sigma) {
    cfg.sigma = parse_quantity(pump["bandwidth"].get<std::string>(), Dim::angular_bandwidth,
                               "pump.bandwidth");
  } else if (has_tau) {
    // Transform-limited Gaussian: t_FWHM = 2 sqrt(2 ln 2) / sigma.
    const double t = parse_quantity(pump["pulse_duration"].get<std::string>(), Dim::time,
                                    "pump.pulse_duration");
    if (!(t > 0)) throw std::invalid_argument("config: pump.pulse_duration must be positive");
    cfg.sigma = 2.0 * std::sqrt(2.0 * std::log(2.0)) / t;
  }
  cfg.average_power = parse_quantity(require(pump, "average_power", "pump").get<std::string>(),
                                     Dim::power, "pump.average_power");
  if (pump.contains("repetition_rate"))
    cfg.rep_rate = parse_quantity(pump["repetition_rate"].get<std::string>(), Dim::frequency,
                                  "pump.repetition_rate");
  if (cfg.sigma > 0 && !(cfg.rep_rate > 0))
    throw std::invalid_argument("config: pulsed pump requires pump.repetition_rate");

  const json& proc = require(j, "process", "top level");
  const std::string type = require(proc, "type", "process").get<std::string>();
  if (type == "sfwm") {
    cfg.run_sfwm = true;
  } else if (type == "tospdc") {
    cfg.run_tospdc = true;
  } else if (type == "both") {
    cfg.run_sfwm = cfg.run_tospdc = true;
  } else {
    throw std::invalid_argument("config: process.type must be sfwm | tospdc | both");
  }
  cfg.length = parse_quantity(require(proc, "fiber_length", "process").get<std::string>(),
                              Dim::length, "process.fiber_length");
  if (proc.contains("contour_pump_min"))
    cfg.contour_pump_min = parse_quantity(proc["contour_pump_min"].get<std::string>(), Dim::length,
                                          "process.contour_pump_min");
  if (proc.contains("contour_pump_max"))
    cfg.contour_pump_max = parse_quantity(proc["contour_pump_max"].get<std::string>(), Dim::length,
                                          "process.contour_pump_max");
  if (proc.contains("fixed_idler_wavelength"))
    cfg.fixed_idler = parse_quantity(proc["fixed_idler_wavelength"].get<std::string>(), Dim::length,
                                     "process.fixed_idler_wavelength");
  if (proc.contains("sweep")) {
    const json& sw = proc["sweep"];
    SweepSpec spec;
    const std::string par = require(sw, "parameter", "process.sweep").get<std::string>();
    Dim dim;
    if (par == "bandwidth") {
      spec.parameter = SweepParameter::bandwidth;
      dim = Dim::angular_bandwidth;
    } else if (par == "power") {
      spec.parameter = SweepParameter::power;
      dim = Dim::power;
    } else if (par == "length") {
      spec.parameter = SweepParameter::length;
      dim = Dim::length;
    } else {
      throw std::invalid_argument("config: sweep.parameter must be bandwidth | power | length");
    }
    spec.min = parse_quantity(require(sw, "min", "process.sweep").get<std::string>(), dim,
                              "process.sweep.min");
    spec.max = parse_quantity(require(sw, "max", "process.sweep").get<std::string>(), dim,
                              "process.sweep.max");
    spec.points = require(sw, "points", "process.sweep").get<int>();
    if (sw.contains("scale")) {
      const std::string sc = sw["scale"].get<std::string>();
      if (sc == "log") {
        spec.log_scale = true;
      } else if (sc == "linear") {
        spec.log_scale = false;
      } else {
        throw std::invalid_argument("config: sweep.scale must be log | linear");
      }
    }
    if (!(spec.min > 0) || !(spec.max > spec.min) || spec.points < 2)
      throw std::invalid_argument("config: sweep needs 0 < min < max and points >= 2");
    cfg.sweep_spec = spec;
  }

  if (j.contains("numerics")) {
    const json& num = j["numerics"];
    if (num.contains("grid_points")) cfg.grid_points = num["grid_points"].get<int>();
    if (num.contains("profile_points")) cfg.profile_points = num["profile_points"].get<int>();
    if (num.contains("resolution")) cfg.resolution = num["resolution"].get<double>();
    if (num.contains("tail_tol")) cfg.tail_tol = num["tail_tol"].get<double>();
    if (num.contains("dispersion_samples"))
      cfg.dispersion_samples = num["dispersion_samples"].get<int>();
    if (num.contains("contour_pump_points"))
      cfg.contour_pump_points = num["contour_pump_points"].get<int>();
    if (num.contains("chi3")) cfg.chi3 = num["chi3"].get<double>();
    if (cfg.grid_points < 2 || cfg.profile_points < 2 || !(cfg.resolution > 0) ||
        !(cfg.tail_tol > 0) || cfg.dispersion_samples < 16 || cfg.contour_pump_points < 1 ||
        !(cfg.chi3 > 0))
      throw std::invalid_argument("config: numerics values out of range");
  }

  if (j.contains("output")) {
    const json& outp = j["output"];
    if (outp.contains("directory")) cfg.directory = outp["directory"].get<std::string>();
    if (outp.contains("formats")) cfg.formats = outp["formats"].get<std::vector<std::string>>();
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Output plumbing: every file carries the config hash and the dispersion /
// susceptibility data versions, so runs are traceable and byte-reproducible.

struct OutputContext {
  fs::path dir;
  bool want_csv = true, want_json = false;
  bool normalize = false;
  std::string config_hash;
  std::string sellmeier_name;
  double chi3 = 0;
};

json meta_json(const OutputContext& out) {
  return {{"generator", std::string("pfs ") + tool_version},
          {"config_hash", out.config_hash},
          {"sellmeier_model", out.sellmeier_name},
          {"chi3_m2_V2", out.chi3}};
}

std::string meta_comment(const OutputContext& out) {
  std::ostringstream s;
  s.precision(8);
  s << std::scientific;
  s << "# generator=pfs " << tool_version << "\n# config_hash=" << out.config_hash
    << "\n# sellmeier_model=" << out.sellmeier_name << "\n# chi3_m2_V2=" << out.chi3 << "\n";
  return s.str();
}

// Prepends the metadata comment block to a CSV produced by a library exporter.
template <typename Exporter>
void write_csv_with_meta(const OutputContext& out, const fs::path& path, Exporter&& exporter) {
  const fs::path tmp = path.string() + ".part";
  exporter(tmp.string());
  std::ifstream in(tmp);
  std::stringstream body;
  body << in.rdbuf();
  in.close();
  std::ofstream final(path, std::ios::trunc);
  if (!final) throw std::runtime_error("cannot open output file " + path.string());
  final << meta_comment(out) << body.str();
  final.close();
  fs::remove(tmp);
}

// Re-opens a JSON produced by a library exporter and injects the metadata.
template <typename Exporter>
void write_json_with_meta(const OutputContext& out, const fs::path& path, Exporter&& exporter) {
  const fs::path tmp = path.string() + ".part";
  exporter(tmp.string());
  std::ifstream in(tmp);
  json j = json::parse(in);
  in.close();
  j["meta"] = meta_json(out);
  std::ofstream final(path, std::ios::trunc);
  if (!final) throw std::runtime_error("cannot open output file " + path.string());
  final << j.dump(2) << '\n';
  final.close();
  fs::remove(tmp);
}

void write_report(const OutputContext& out, const fs::path& path, json j) {
  j["meta"] = meta_json(out);
  std::ofstream final(path, std::ios::trunc);
  if (!final) throw std::runtime_error("cannot open output file " + path.string());
  final << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Shared pipeline pieces.

double resolve_radius(const RunConfig& cfg, const SellmeierModel& silica) {
  if (cfg.radius) return *cfg.radius;
  return degenerate_tospdc_radius(silica, *cfg.design_target).radius;
}

ProcessContext build_sfwm_context(const RunConfig& cfg,
                                  std::shared_ptr<const FiberGeometry> geom,
                                  const NonlinearContext& nl) {
  // Photon table spanning both contour branches around the pump.
  const double lp_um = cfg.pump_lambda * 1e6;
  return make_sfwm_context(geom, 0.49 * lp_um, 6.0 * lp_um, cfg.dispersion_samples, lp_um, nl);
}

ProcessContext build_tospdc_context(const RunConfig& cfg,
                                    std::shared_ptr<const FiberGeometry> geom,
                                    const NonlinearContext& nl) {
  const double lp_um = cfg.pump_lambda * 1e6;
  const double l0_um = 3.0 * lp_um;  // degenerate triplet wavelength
  return make_tospdc_context(geom, 0.75 * l0_um, 1.38 * l0_um, cfg.dispersion_samples,
                             0.94 * lp_um, 1.07 * lp_um,
                             std::max(64, cfg.dispersion_samples / 2), lp_um, nl);
}

PumpConfig pump_from_config(const RunConfig& cfg) {
  PumpConfig p;
  p.omega0 = omega_from_lambda(cfg.pump_lambda);
  p.sigma = cfg.sigma;
  p.average_power = cfg.average_power;
  p.rep_rate = cfg.rep_rate;
  p.validate();
  return p;
}

// Phasematched SFWM anchor at the configured pump: the outer-branch
// signal/idler detuning (the paper's widely split pair).
void sfwm_anchor(const ProcessContext& ctx, const PumpConfig& pump, double& omega_s0,
                 double& omega_i0) {
  ContourOptions opt;
  opt.n_pump_points = 1;
  auto pts = sfwm_contour(ctx, pump.omega0, pump.omega0, pump.peak_power(), opt);
  if (pts.empty())
    throw std::runtime_error("no phasematched signal/idler pair at the configured pump");
  omega_s0 = pump.omega0 + pts.front().detuning;  // outer branch is listed first
  omega_i0 = pump.omega0 - pts.front().detuning;
}

EfficiencyRequest efficiency_request(const RunConfig& cfg, const ProcessContext& ctx,
                                     const ProcessCoefficients& co, const PumpConfig& pump,
                                     double omega_s0, double omega_i0) {
  EfficiencyRequest req;
  req.ctx = &ctx;
  req.coefficients = co;
  req.pump1 = pump;
  req.pump2 = pump;
  req.length = cfg.length;
  req.regime = pump.sigma > 0 ? Regime::pulsed : Regime::cw;
  req.omega_s0 = omega_s0;
  req.omega_i0 = omega_i0;
  req.quad.resolution = cfg.resolution;
  req.quad.tail_tol = cfg.tail_tol;
  return req;
}

json efficiency_record(const EfficiencyResult& r, const RunConfig& cfg, const std::string& process,
                       const std::string& regime) {
  return {{"process", process},
          {"regime", regime},
          {"eta", r.eta},
          {"prefactor", r.prefactor},
          {"integral", r.integral},
          {"rel_error_estimate", r.rel_error_estimate},
          {"gamma_per_W_m", r.gamma},
          {"peak_power_W", r.peak_power},
          {"fiber_length_m", cfg.length},
          {"average_power_W", cfg.average_power},
          {"sigma_rad_s", cfg.sigma},
          {"repetition_rate_Hz", cfg.rep_rate}};
}

void maybe_normalize(JointSpectrumGrid& grid, bool normalize) {
  if (!normalize) return;
  grid.values = grid.normalized;
  grid.peak_value = 1.0;
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_design(const RunConfig& cfg, const OutputContext& out, const SellmeierModel& silica) {
  if (!cfg.design_target)
    throw std::invalid_argument("design: fiber.design_target_wavelength is required");
  const auto res = degenerate_tospdc_radius(silica, *cfg.design_target);
  std::cout.precision(8);
  std::cout << std::scientific;
  std::cout << "core radius = " << res.radius * 1e6 << " um (phasemismatch residual "
            << res.residual << " rad/m)\n";
  write_report(out, out.dir / "design.json",
               {{"target_wavelength_m", *cfg.design_target},
                {"radius_m", res.radius},
                {"radius_um", res.radius * 1e6},
                {"residual_rad_m", res.residual}});
  return 0;
}

int cmd_contour(const RunConfig& cfg, const OutputContext& out, const SellmeierModel& silica,
                const NonlinearContext& nl) {
  auto geom = std::make_shared<FiberGeometry>(resolve_radius(cfg, silica), silica,
                                              cfg.cladding_index);
  const PumpConfig pump = pump_from_config(cfg);
  ContourOptions opt;
  opt.n_pump_points = cfg.contour_pump_points;

  if (cfg.run_sfwm) {
    auto ctx = build_sfwm_context(cfg, geom, nl);
    const double lo = cfg.contour_pump_min.value_or(0.75 * cfg.pump_lambda);
    const double hi = cfg.contour_pump_max.value_or(2.5 * cfg.pump_lambda);
    auto pts = sfwm_contour(ctx, omega_from_lambda(hi), omega_from_lambda(lo), pump.peak_power(),
                            opt);
    std::vector<ContourPoint> outer, inner;
    for (const auto& p : pts) (p.branch == ContourBranch::outer ? outer : inner).push_back(p);
    for (const auto& [branch, sel] :
         {std::pair{"outer", &outer}, std::pair{"inner", &inner}}) {
      const fs::path path = out.dir / ("sfwm_contour_" + std::string(branch) + ".csv");
      write_csv_with_meta(out, path, [&](const std::string& p) {
        export_contour_csv(*sel, ProcessKind::sfwm, 0.0, p);
      });
      std::cout << path.string() << ": " << sel->size() << " points\n";
    }
  }
  if (cfg.run_tospdc) {
    auto ctx = build_tospdc_context(cfg, geom, nl);
    const double idler = cfg.fixed_idler.value_or(3.0 * cfg.pump_lambda);
    const double lo = cfg.contour_pump_min.value_or(0.94 * cfg.pump_lambda);
    const double hi = cfg.contour_pump_max.value_or(1.07 * cfg.pump_lambda);
    auto pts = tospdc_contour(ctx, omega_from_lambda(idler), omega_from_lambda(hi),
                              omega_from_lambda(lo), pump.peak_power(), opt);
    const fs::path path = out.dir / "tospdc_contour_single.csv";
    write_csv_with_meta(out, path, [&](const std::string& p) {
      export_contour_csv(pts, ProcessKind::tospdc, omega_from_lambda(idler), p);
    });
    std::cout << path.string() << ": " << pts.size() << " points\n";
  }
  return 0;
}

int cmd_coefficients(const RunConfig& cfg, const OutputContext& out, const SellmeierModel& silica,
                     const NonlinearContext& nl) {
  auto geom = std::make_shared<FiberGeometry>(resolve_radius(cfg, silica), silica,
                                              cfg.cladding_index);
  const PumpConfig pump = pump_from_config(cfg);
  json report;
  report["radius_m"] = geom->core_radius;
  std::cout.precision(8);
  std::cout << std::scientific;

  auto record = [](const ProcessCoefficients& co) {
    return json{{"gamma_per_W_m", co.gamma},
                {"gamma_per_W_km", co.gamma * 1e3},
                {"a_eff_four_m2", co.a_eff_four},
                {"n1", co.n1},
                {"n2", co.n2},
                {"omega1_rad_s", co.omega1},
                {"omega2_rad_s", co.omega2}};
  };
  if (cfg.run_sfwm) {
    auto ctx = build_sfwm_context(cfg, geom, nl);
    double ws0 = 0, wi0 = 0;
    sfwm_anchor(ctx, pump, ws0, wi0);
    auto co = sfwm_coefficients(*geom, nl, pump.omega0, ws0, wi0);
    auto rec = record(co);
    rec["anchor_lambda_s_um"] = lambda_from_omega(ws0) * 1e6;
    rec["anchor_lambda_i_um"] = lambda_from_omega(wi0) * 1e6;
    report["sfwm"] = rec;
    std::cout << "gamma_fwm = " << co.gamma * 1e3 << " /(W km)\n";
  }
  if (cfg.run_tospdc) {
    auto co = tospdc_coefficients(*geom, nl, pump.omega0);
    report["tospdc"] = record(co);
    std::cout << "gamma_pdc = " << co.gamma * 1e3 << " /(W km)\n";
  }
  write_report(out, out.dir / "coefficients.json", report);
  return 0;
}

int cmd_jsi(const RunConfig& cfg, const OutputContext& out, const SellmeierModel& silica,
            const NonlinearContext& nl) {
  auto geom = std::make_shared<FiberGeometry>(resolve_radius(cfg, silica), silica,
                                              cfg.cladding_index);
  const PumpConfig pump = pump_from_config(cfg);
  if (!(pump.sigma > 0))
    throw std::invalid_argument("jsi: a spectral grid needs a pulsed pump (bandwidth > 0)");

  auto emit = [&](JointSpectrumGrid grid, const std::string& stem) {
    maybe_normalize(grid, out.normalize);
    if (out.want_csv)
      write_csv_with_meta(out, out.dir / (stem + ".csv"),
                          [&](const std::string& p) { export_grid_csv(grid, p); });
    if (out.want_json)
      write_json_with_meta(out, out.dir / (stem + ".json"),
                           [&](const std::string& p) { export_grid_json(grid, p); });
    std::cout << stem << ": peak " << grid.peak_value << '\n';
  };

  std::cout.precision(8);
  std::cout << std::scientific;
  if (cfg.run_sfwm) {
    auto ctx = build_sfwm_context(cfg, geom, nl);
    double ws0 = 0, wi0 = 0;
    sfwm_anchor(ctx, pump, ws0, wi0);
    emit(jsi_grid_sfwm(ctx, pump, pump, cfg.length, ws0, wi0, cfg.grid_points), "sfwm_jsi");
  }
  if (cfg.run_tospdc) {
    auto ctx = build_tospdc_context(cfg, geom, nl);
    auto slices = jsi_slices_tospdc(ctx, pump, cfg.length, cfg.grid_points, cfg.profile_points);
    emit(std::move(slices.plane), "tospdc_jsi_plane");
    emit(std::move(slices.profile), "tospdc_jsi_profile");
  }
  return 0;
}

int cmd_efficiency(const RunConfig& cfg, const OutputContext& out, const SellmeierModel& silica,
                   const NonlinearContext& nl) {
  auto geom = std::make_shared<FiberGeometry>(resolve_radius(cfg, silica), silica,
                                              cfg.cladding_index);
  const PumpConfig pump = pump_from_config(cfg);
  const std::string regime = pump.sigma > 0 ? "pulsed" : "cw";
  std::cout.precision(8);
  std::cout << std::scientific;

  if (cfg.run_sfwm) {
    auto ctx = build_sfwm_context(cfg, geom, nl);
    double ws0 = 0, wi0 = 0;
    sfwm_anchor(ctx, pump, ws0, wi0);
    auto co = sfwm_coefficients(*geom, nl, pump.omega0, ws0, wi0);
    auto req = efficiency_request(cfg, ctx, co, pump, ws0, wi0);
    auto res = run_efficiency(req);
    write_report(out, out.dir / "efficiency_sfwm.json",
                 efficiency_record(res, cfg, "sfwm", regime));
    std::cout << "eta_sfwm (" << regime << ") = " << res.eta << '\n';
  }
  if (cfg.run_tospdc) {
    auto ctx = build_tospdc_context(cfg, geom, nl);
    auto co = tospdc_coefficients(*geom, nl, pump.omega0);
    auto req = efficiency_request(cfg, ctx, co, pump, 0.0, 0.0);
    auto res = run_efficiency(req);
    write_report(out, out.dir / "efficiency_tospdc.json",
                 efficiency_record(res, cfg, "tospdc", regime));
    std::cout << "eta_tospdc (" << regime << ") = " << res.eta << '\n';
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const OutputContext& out, const SellmeierModel& silica,
              const NonlinearContext& nl) {
  if (!cfg.sweep_spec) throw std::invalid_argument("sweep: config needs a process.sweep section");
  const SweepSpec& spec = *cfg.sweep_spec;
  std::vector<double> values(spec.points);
  for (int k = 0; k < spec.points; ++k) {
    const double t = static_cast<double>(k) / (spec.points - 1);
    values[k] = spec.log_scale ? spec.min * std::pow(spec.max / spec.min, t)
                               : spec.min + (spec.max - spec.min) * t;
  }
  const char* par_name = spec.parameter == SweepParameter::bandwidth ? "bandwidth"
                         : spec.parameter == SweepParameter::power   ? "power"
                                                                     : "length";

  auto geom = std::make_shared<FiberGeometry>(resolve_radius(cfg, silica), silica,
                                              cfg.cladding_index);
  const PumpConfig pump = pump_from_config(cfg);

  auto run_one = [&](const ProcessContext& ctx, const ProcessCoefficients& co, double ws0,
                     double wi0, const std::string& process) {
    auto req = efficiency_request(cfg, ctx, co, pump, ws0, wi0);
    auto pts = sweep(req, spec.parameter, values);
    const fs::path path = out.dir / ("sweep_" + process + "_" + par_name + ".csv");
    write_csv_with_meta(out, path, [&](const std::string& p) {
      export_sweep_csv(pts, spec.parameter, p);
    });
    std::cout << path.string() << ": " << pts.size() << " points\n";
  };

  if (cfg.run_sfwm) {
    auto ctx = build_sfwm_context(cfg, geom, nl);
    double ws0 = 0, wi0 = 0;
    sfwm_anchor(ctx, pump, ws0, wi0);
    run_one(ctx, sfwm_coefficients(*geom, nl, pump.omega0, ws0, wi0), ws0, wi0, "sfwm");
  }
  if (cfg.run_tospdc) {
    auto ctx = build_tospdc_context(cfg, geom, nl);
    run_one(ctx, tospdc_coefficients(*geom, nl, pump.omega0), 0.0, 0.0, "tospdc");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiber-based photon-pair (SFWM) and photon-triplet (TOSPDC) source designer"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, format = "csv";
  bool normalize = false;
  app.add_option("--config", config_path, "Run configuration file (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory (default: from config)");
  app.add_option("--format", format, "Output format: csv | json | both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_flag("--normalize", normalize, "Write peak-normalized spectra");

  for (const char* name : {"design", "contour", "jsi", "coefficients", "efficiency", "sweep"})
    app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = load_config(config_path);

    OutputContext out;
    out.dir = out_dir.empty() ? fs::path(cfg.directory) : fs::path(out_dir);
    fs::create_directories(out.dir);
    bool csv = false, js = false;
    for (const auto& f : cfg.formats) {
      if (f == "csv") csv = true;
      else if (f == "json") js = true;
      else throw std::invalid_argument("config: output.formats entries must be csv | json");
    }
    if (app.count("--format")) {
      csv = format == "csv" || format == "both";
      js = format == "json" || format == "both";
    }
    out.want_csv = csv || !js;
    out.want_json = js;
    out.normalize = normalize;
    out.config_hash = hash_hex(cfg.hash);
    out.chi3 = cfg.chi3;

    const SellmeierModel silica = SellmeierModel::fused_silica();
    out.sellmeier_name = silica.name();
    NonlinearContext nl;
    nl.chi3 = cfg.chi3;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "design") return cmd_design(cfg, out, silica);
    if (cmd == "contour") return cmd_contour(cfg, out, silica, nl);
    if (cmd == "jsi") return cmd_jsi(cfg, out, silica, nl);
    if (cmd == "coefficients") return cmd_coefficients(cfg, out, silica, nl);
    if (cmd == "efficiency") return cmd_efficiency(cfg, out, silica, nl);
    if (cmd == "sweep") return cmd_sweep(cfg, out, silica, nl);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
