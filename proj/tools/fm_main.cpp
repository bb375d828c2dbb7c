// fm: command-line front end for the freemoments library.
//
// Subcommands: analyze, evolve, classify, verify, ensemble. All numeric
// output is deterministic for a fixed configuration and seed: doubles are
// printed in shortest round-trip form and JSON keys are emitted in sorted
// order. Exit codes: 0 success, 1 usage or invalid input, 2 numeric or
// convergence failure, 3 verification failure.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freemoments/ensemble.hpp"
#include "freemoments/families.hpp"
#include "freemoments/geometry.hpp"
#include "freemoments/inequalities.hpp"
#include "freemoments/io.hpp"
#include "freemoments/moments.hpp"
#include "freemoments/wavefunction.hpp"
#include "freemoments/wigner.hpp"

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double length_scale = 1.0;
  std::size_t grid_points = 4096;
  double grid_extent = 30.0;
  double time_start = -3.0;
  double time_stop = 3.0;
  int time_steps = 21;
  std::string format;  // empty = per-command default
  std::string out_path;
  std::uint64_t seed = 1;
  int order = 0;  // 0 = per-command default
};

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double number_field(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw fm::invalid_input("config: '" + key + "' must be a number");
  return j.at(key).get<double>();
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw fm::invalid_input("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw fm::invalid_input("config file '" + path + "' is not a JSON object");

  for (const auto& [key, value] : j.items()) {
    if (key == "hbar" || key == "mass" || key == "length_scale" || key == "grid" ||
        key == "time" || key == "output")
      continue;
    throw fm::invalid_input("config: unknown key '" + key + "'");
  }

  cfg.hbar = number_field(j, "hbar", cfg.hbar);
  cfg.mass = number_field(j, "mass", cfg.mass);
  cfg.length_scale = number_field(j, "length_scale", cfg.length_scale);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_object()) throw fm::invalid_input("config: 'grid' must be an object");
    const double pts = number_field(g, "points", static_cast<double>(cfg.grid_points));
    if (pts < 1 || pts != std::floor(pts))
      throw fm::invalid_input("config: grid.points must be a positive integer");
    cfg.grid_points = static_cast<std::size_t>(pts);
    cfg.grid_extent = number_field(g, "extent", cfg.grid_extent);
  }
  if (j.contains("time")) {
    const json& t = j.at("time");
    if (!t.is_object()) throw fm::invalid_input("config: 'time' must be an object");
    cfg.time_start = number_field(t, "start", cfg.time_start);
    cfg.time_stop = number_field(t, "stop", cfg.time_stop);
    const double steps = number_field(t, "steps", cfg.time_steps);
    if (steps != std::floor(steps))
      throw fm::invalid_input("config: time.steps must be an integer");
    cfg.time_steps = static_cast<int>(steps);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) throw fm::invalid_input("config: 'output' must be an object");
    if (o.contains("format")) cfg.format = o.at("format").get<std::string>();
    if (o.contains("path")) cfg.out_path = o.at("path").get<std::string>();
  }
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.hbar > 0) || !(cfg.mass > 0) || !(cfg.length_scale > 0))
    throw fm::invalid_input("hbar, mass and length_scale must be positive");
  if (cfg.grid_points < 256 || !power_of_two(cfg.grid_points))
    throw fm::invalid_input("grid.points must be a power of two >= 256");
  if (!(cfg.grid_extent > 0)) throw fm::invalid_input("grid.extent must be positive");
  if (cfg.time_steps < 2) throw fm::invalid_input("time.steps must be at least 2");
  if (!std::isfinite(cfg.time_start) || !std::isfinite(cfg.time_stop))
    throw fm::invalid_input("time bounds must be finite");
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json")
    throw fm::invalid_input("output format must be 'csv' or 'json'");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw fm::invalid_input("cannot open output file '" + cfg.out_path + "'");
  out << text;
  if (!out) throw fm::invalid_input("failed writing '" + cfg.out_path + "'");
}

// ---------------------------------------------------------------------------
// key=value parameter grammar

using Params = std::map<std::string, std::string>;

Params parse_params(const std::vector<std::string>& args, std::size_t begin) {
  Params out;
  for (std::size_t i = begin; i < args.size(); ++i) {
    const auto eq = args[i].find('=');
    if (eq == std::string::npos || eq == 0)
      throw fm::invalid_input("expected key=value parameter, got '" + args[i] + "'");
    const std::string key = args[i].substr(0, eq);
    if (!out.emplace(key, args[i].substr(eq + 1)).second)
      throw fm::invalid_input("duplicate parameter '" + key + "'");
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v))
    throw fm::invalid_input(what + " must be a finite number, got '" + text + "'");
  return v;
}

double take_number(Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  const double v = parse_number(it->second, "parameter " + key);
  p.erase(it);
  return v;
}

double require_number(Params& p, const std::string& key, const std::string& family) {
  if (!p.count(key))
    throw fm::invalid_input(family + " requires the parameter " + key + "=<value>");
  return take_number(p, key, 0.0);
}

std::optional<std::string> take_string(Params& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) return std::nullopt;
  std::string v = it->second;
  p.erase(it);
  return v;
}

void reject_unknown(const Params& p, const std::string& context) {
  if (p.empty()) return;
  std::string keys;
  for (const auto& [k, v] : p) keys += (keys.empty() ? "" : ", ") + k;
  throw fm::invalid_input(context + ": unknown parameter(s) " + keys);
}

// ---------------------------------------------------------------------------
// State resolution

struct ResolvedState {
  std::string family;
  json params = json::object();
  double hbar = 1.0;
  double mass = 1.0;
  bool grid_backed = false;      // operator/Wigner measurement available
  bool parity_definite = false;  // enables the Y_2 form of the Omega_4 bound
  std::optional<fm::GridWavefunction> psi;         // measurement grid
  std::optional<fm::GridWavefunction> wigner_psi;  // <= 1024 points
  std::map<int, fm::MomentVector> closed;          // closed-form orders
  std::optional<fm::ShapeMetrics> closed_metrics;
  std::array<double, 3> x_central{0.0, 0.0, 0.0};  // <X^2>, <X^3>, <X^4>
  bool has_x_central = false;
  std::vector<std::string> notes;
};

constexpr std::size_t max_wigner_points = 1024;

fm::GridWavefunction load_wavefunction(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fm::invalid_input("cannot open wavefunction file '" + path + "'");
  char magic[6] = {};
  in.read(magic, 6);
  const bool binary = in.gcount() == 6 && std::string(magic, 6) == "FMWF1\n";
  in.clear();
  in.seekg(0);
  return binary ? fm::read_wavefunction_binary(in) : fm::read_wavefunction_csv(in);
}

// Fills the closed-form slots of a power-exponential-like family, recording
// which momentum moments fall outside their existence domain instead of
// failing the whole command.
template <typename Family>
void fill_power_closed(const Family& f, ResolvedState& st, const RunConfig& cfg) {
  st.x_central = {f.x_even_moment(2), 0.0, f.x_even_moment(4)};
  st.has_x_central = true;
  st.closed_metrics = f.metrics();
  st.closed.emplace(3, fm::MomentVector(3, {0.0, 0.0, 0.0, 0.0}, cfg.mass, cfg.hbar));
  try {
    st.closed.emplace(
        2, fm::MomentVector(2, {f.x_even_moment(2), 0.0, f.p2()}, cfg.mass, cfg.hbar));
  } catch (const fm::domain_error& e) {
    st.notes.push_back(std::string("second-order moments omitted: ") + e.what());
  }
  try {
    st.closed.emplace(4, f.moments4());
  } catch (const fm::domain_error& e) {
    st.notes.push_back(std::string("fourth-order moments omitted: ") + e.what());
  }
}

ResolvedState resolve_state(const std::vector<std::string>& spec, const RunConfig& cfg) {
  if (spec.empty())
    throw fm::invalid_input(
        "expected a state spec: gaussian | skew_gaussian | power_exp | "
        "power_exp_truncated | abs_exp | sqrt_exp | wavefunction, followed by "
        "key=value parameters");

  ResolvedState st;
  st.family = spec[0];
  st.hbar = cfg.hbar;
  st.mass = cfg.mass;
  Params p = parse_params(spec, 1);

  if (st.family == "gaussian") {
    const double a = take_number(p, "a", 1.0);
    reject_unknown(p, "gaussian");
    if (!(a > 0)) throw fm::invalid_input("gaussian: a must be positive");
    const fm::Gaussian g{a, cfg.hbar, cfg.mass};
    st.params["a"] = a;
    st.parity_definite = true;
    st.grid_backed = true;
    st.psi = g.grid(cfg.grid_points, cfg.grid_extent);
    st.wigner_psi = g.grid(std::min(cfg.grid_points, max_wigner_points), cfg.grid_extent);
    for (int n = 2; n <= 4; ++n) st.closed.emplace(n, g.moments(n));
    st.closed_metrics = g.metrics();
    st.x_central = {g.moments(2)[0], 0.0, g.moments(4)[0]};
    st.has_x_central = true;
  } else if (st.family == "skew_gaussian") {
    const double b = require_number(p, "b", "skew_gaussian");
    const double a = take_number(p, "a", 1.0);
    reject_unknown(p, "skew_gaussian");
    if (!(a > 0)) throw fm::invalid_input("skew_gaussian: a must be positive");
    const fm::SkewGaussian sk{b, a, cfg.hbar, cfg.mass};
    st.params["b"] = b;
    st.params["a"] = a;
    st.grid_backed = true;
    st.psi = sk.grid(cfg.grid_points, cfg.grid_extent);
    st.wigner_psi = sk.grid(std::min(cfg.grid_points, max_wigner_points), cfg.grid_extent);
    st.closed.emplace(3, sk.moments3());
  } else if (st.family == "power_exp" || st.family == "abs_exp" ||
             st.family == "sqrt_exp") {
    fm::PowerExponential pe;
    if (st.family == "power_exp") {
      pe.c = require_number(p, "c", "power_exp");
      pe.b = require_number(p, "b", "power_exp");
    } else {
      pe = st.family == "abs_exp" ? fm::abs_exp() : fm::sqrt_exp();
    }
    pe.a = take_number(p, "a", 1.0);
    pe.hbar = cfg.hbar;
    pe.mass = cfg.mass;
    reject_unknown(p, st.family);
    if (!(pe.a > 0) || !(pe.b > 0))
      throw fm::invalid_input(st.family + ": a and b must be positive");
    st.params["c"] = pe.c;
    st.params["b"] = pe.b;
    st.params["a"] = pe.a;
    st.parity_definite = true;
    fill_power_closed(pe, st, cfg);
  } else if (st.family == "power_exp_truncated") {
    const double c = require_number(p, "c", "power_exp_truncated");
    const double b = require_number(p, "b", "power_exp_truncated");
    const double a = take_number(p, "a", 1.0);
    const double match_at = take_number(p, "match_at", 6.0);
    const double zero_at = take_number(p, "zero_at", 15.0);
    reject_unknown(p, "power_exp_truncated");
    const auto tr =
        fm::make_truncated_power_exponential(c, b, a, match_at, zero_at, cfg.hbar, cfg.mass);
    st.params["c"] = c;
    st.params["b"] = b;
    st.params["a"] = a;
    st.params["match_at"] = match_at;
    st.params["zero_at"] = zero_at;
    st.parity_definite = true;
    st.x_central = {tr.x_even_moment(2), 0.0, tr.x_even_moment(4)};
    st.has_x_central = true;
    st.closed_metrics = tr.metrics();
    st.closed.emplace(3, fm::MomentVector(3, {0.0, 0.0, 0.0, 0.0}, cfg.mass, cfg.hbar));
    st.closed.emplace(
        2, fm::MomentVector(2, {tr.x_even_moment(2), 0.0, tr.p2()}, cfg.mass, cfg.hbar));
    st.closed.emplace(4, tr.moments4());
  } else if (st.family == "wavefunction") {
    const auto path = take_string(p, "file");
    reject_unknown(p, "wavefunction");
    if (!path) throw fm::invalid_input("wavefunction requires file=<path>");
    st.psi = load_wavefunction(*path);
    st.params["file"] = *path;
    st.grid_backed = true;
    st.hbar = st.psi->hbar;
    st.mass = st.psi->mass;
    if (!power_of_two(st.psi->size()))
      throw fm::invalid_input("wavefunction grids must have a power-of-two size "
                              "for spectral measurement");
    if (st.psi->size() <= max_wigner_points)
      st.wigner_psi = st.psi;
    else
      st.notes.push_back("Wigner cross-check skipped: grid larger than 1024 points");
  } else {
    throw fm::invalid_input(
        "unknown family '" + st.family +
        "'; expected gaussian, skew_gaussian, power_exp, power_exp_truncated, "
        "abs_exp, sqrt_exp or wavefunction");
  }
  return st;
}

// ---------------------------------------------------------------------------
// Shared report plumbing

json parsed(const std::string& text) { return json::parse(text); }

// Moments used for invariants, geometry and inequalities: measured when a
// grid exists, closed-form otherwise.
std::map<int, fm::MomentVector> authoritative_moments(const ResolvedState& st) {
  if (!st.grid_backed) return st.closed;
  std::map<int, fm::MomentVector> out;
  for (int n = 2; n <= 4; ++n) out.emplace(n, fm::measure_moments(*st.psi, n));
  return out;
}

// Grid measurement cannot distinguish a parity-forced zero from roundoff, so
// components below 1e-10 of the state's natural scale sigma_x^(n-k) sigma_p^k
// are floored to exact zero before classification or invariant extraction.
// Closed-form and user-supplied moments pass through untouched (no sigmas).
fm::MomentVector floor_measurement_noise(const fm::MomentVector& y,
                                         std::optional<double> sigma_x,
                                         std::optional<double> sigma_p) {
  if (!sigma_x || !sigma_p) return y;
  std::vector<double> values = y.values;
  for (int k = 0; k <= y.order; ++k) {
    const double scale = std::pow(*sigma_x, y.order - k) * std::pow(*sigma_p, k);
    if (std::fabs(values[static_cast<std::size_t>(k)]) <= 1e-10 * scale)
      values[static_cast<std::size_t>(k)] = 0.0;
  }
  return fm::MomentVector(y.order, std::move(values), y.mass, y.hbar);
}

// A zero top moment is routed to the quadratic-in-time special case
// (order 3) or reported as unclassifiable (order 4).
fm::GeometryReport classify_routed(const fm::MomentVector& y, std::string* note) {
  if (y.order == 3) {
    if (y[3] == 0.0) {
      if (note)
        *note = "top moment y_3 is zero; Y_0 is quadratic in time and classified "
                "accordingly";
      return fm::special_case_topzero(y);
    }
    return fm::classify_third(y);
  }
  if (y.order == 4) {
    if (y[4] == 0.0)
      throw fm::degenerate_top_moment(
          "order-4 moments with y_4 = 0 have no finite-time classification");
    return fm::classify_fourth(y);
  }
  throw fm::invalid_input("classification needs order 3 or 4 moments");
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const std::vector<std::string>& spec, const RunConfig& cfg) {
  ResolvedState st = resolve_state(spec, cfg);
  std::vector<std::string> notes = st.notes;

  // Measurement phase: operator moments on the full grid, Wigner moments on
  // the (possibly coarser) oracle grid.
  std::map<int, fm::MomentVector> op;
  std::map<int, fm::MomentVector> wig;
  if (st.grid_backed) {
    for (int n = 2; n <= 4; ++n) op.emplace(n, fm::measure_moments(*st.psi, n));
    if (st.wigner_psi) {
      try {
        const auto w = fm::wigner_transform(*st.wigner_psi);
        for (int n = 2; n <= 4; ++n) {
          std::vector<double> vals(static_cast<std::size_t>(n) + 1);
          for (int k = 0; k <= n; ++k)
            vals[static_cast<std::size_t>(k)] = fm::wigner_moment(w, k, n);
          wig.emplace(n, fm::MomentVector(n, std::move(vals), st.mass, st.hbar));
        }
      } catch (const fm::error& e) {
        notes.push_back(std::string("Wigner cross-check unavailable: ") + e.what());
        wig.clear();
      }
    }
  }

  const std::map<int, fm::MomentVector>& raw_auth = st.grid_backed ? op : st.closed;
  std::optional<double> sigma_x, sigma_p;
  if (st.grid_backed && raw_auth.count(2)) {
    if (raw_auth.at(2)[0] > 0) sigma_x = std::sqrt(raw_auth.at(2)[0]);
    if (raw_auth.at(2)[2] > 0) sigma_p = std::sqrt(raw_auth.at(2)[2]);
  }
  std::map<int, fm::MomentVector> auth;
  for (const auto& [n, y] : raw_auth)
    auth.emplace(n, floor_measurement_noise(y, sigma_x, sigma_p));

  json report;
  report["schema"] = 1;
  report["command"] = "analyze";
  report["family"] = st.family;
  report["params"] = st.params;
  report["hbar"] = st.hbar;
  report["mass"] = st.mass;
  report["length_scale"] = cfg.length_scale;

  if (st.grid_backed) {
    const auto c = fm::centroid(*st.psi);
    report["centroid"] = {{"x", c.x}, {"p", c.p}};
  } else {
    report["centroid"] = {{"x", 0.0}, {"p", 0.0}};  // even density
  }

  json moments = json::object();
  for (int n = 2; n <= 4; ++n) {
    json slot;
    slot["operator"] = op.count(n) ? parsed(fm::to_json(op.at(n))) : json(nullptr);
    slot["wigner"] = wig.count(n) ? parsed(fm::to_json(wig.at(n))) : json(nullptr);
    slot["closed_form"] =
        st.closed.count(n) ? parsed(fm::to_json(st.closed.at(n))) : json(nullptr);
    moments[std::to_string(n)] = slot;
  }
  report["moments"] = moments;

  json invariants = json::object();
  for (int n = 2; n <= 4; ++n) {
    if (!auth.count(n) || auth.at(n)[n] == 0.0) {
      invariants[std::to_string(n)] = nullptr;
      if (auth.count(n))
        notes.push_back("order-" + std::to_string(n) +
                        " invariants omitted: top moment is zero at working precision");
      continue;
    }
    invariants[std::to_string(n)] = parsed(fm::to_json(fm::invariants(auth.at(n))));
  }
  report["invariants"] = invariants;

  if (st.grid_backed) {
    const auto m = fm::shape_metrics(*st.psi);
    report["metrics"] = {{"sigma2", m.sigma2},
                         {"sigma4", m.sigma4},
                         {"skew_length", m.skew_length},
                         {"kurtosis", m.kurtosis}};
  } else {
    const auto& m = *st.closed_metrics;
    report["metrics"] = {{"sigma2", m.sigma2},
                         {"sigma4", m.sigma4},
                         {"skew_length", m.skew_length},
                         {"kurtosis", m.kurtosis}};
  }

  json geometry = json::object();
  for (const int n : {3, 4}) {
    if (!auth.count(n)) {
      geometry[std::to_string(n)] = nullptr;
      continue;
    }
    try {
      std::string note;
      const auto g = classify_routed(auth.at(n), &note);
      geometry[std::to_string(n)] = parsed(fm::to_json(g));
      if (!note.empty()) notes.push_back("order-" + std::to_string(n) + ": " + note);
    } catch (const fm::degenerate_top_moment& e) {
      geometry[std::to_string(n)] = nullptr;
      notes.push_back("order-" + std::to_string(n) + " geometry omitted: " + e.what());
    }
  }
  report["geometry"] = geometry;

  json ineqs = json::array();
  const auto push = [&](const fm::InequalityReport& r) { ineqs.push_back(parsed(fm::to_json(r))); };
  if (auth.count(2)) {
    for (const auto& r : fm::check_schrodinger(auth.at(2))) push(r);
    push(fm::check_even_product(auth.at(2)[0], auth.at(2)[2], 2, st.hbar));
  }
  if (auth.count(2) && auth.count(4)) {
    for (const auto& r : fm::check_omega4_bound(auth.at(4), auth.at(2)[2], auth.at(4)[4],
                                                st.parity_definite))
      push(r);
  }
  if (auth.count(4))
    push(fm::check_even_product(auth.at(4)[0], auth.at(4)[4], 4, st.hbar));
  if (st.grid_backed) {
    const auto pm = fm::position_moments(*st.psi, 4);
    push(fm::check_kurtosis_skewness(pm[2], pm[3], pm[4], false));
  } else if (st.has_x_central) {
    push(fm::check_kurtosis_skewness(st.x_central[0], st.x_central[1], st.x_central[2],
                                     false));
  }
  if (auth.count(2) && auth.count(3) && auth.count(4))
    push(fm::check_kurtosis_skewness(auth.at(2)[2], auth.at(3)[3], auth.at(4)[4], true));
  report["inequalities"] = ineqs;

  std::sort(notes.begin(), notes.end());
  report["notes"] = notes;

  if (!cfg.format.empty() && cfg.format != "json")
    throw fm::invalid_input("analyze emits JSON; csv is not available");
  emit(cfg, report.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// evolve

int cmd_evolve(const std::vector<std::string>& spec, const RunConfig& cfg) {
  ResolvedState st = resolve_state(spec, cfg);
  const int order = cfg.order == 0 ? 2 : cfg.order;

  fm::MomentVector y0(order, std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0),
                      st.mass, st.hbar);
  if (st.grid_backed)
    y0 = fm::measure_moments(*st.psi, order);
  else if (st.closed.count(order))
    y0 = st.closed.at(order);
  else
    throw fm::domain_error("order-" + std::to_string(order) + " moments of " + st.family +
                           " are outside the family's existence domain");

  std::optional<double> sigma_x, sigma_p;
  if (st.grid_backed) {
    const auto y2 = order == 2 ? y0 : fm::measure_moments(*st.psi, 2);
    if (y2[0] > 0) sigma_x = std::sqrt(y2[0]);
    if (y2[2] > 0) sigma_p = std::sqrt(y2[2]);
  }
  const auto t0_basis = floor_measurement_noise(y0, sigma_x, sigma_p);
  double t0 = 0.0;
  if (t0_basis[order] != 0.0) t0 = fm::reference_time(t0_basis);

  struct Row {
    double u;
    std::vector<double> values;
    const char* source;
  };
  std::vector<Row> rows;
  const double du = (cfg.time_stop - cfg.time_start) / (cfg.time_steps - 1);
  for (int i = 0; i < cfg.time_steps; ++i) {
    const double u = cfg.time_start + du * i;
    const double t = t0 + u * st.mass;
    rows.push_back({u, fm::propagate(y0, t).values, "propagate"});
  }
  if (st.grid_backed) {
    for (int i = 0; i < cfg.time_steps; ++i) {
      const double u = cfg.time_start + du * i;
      const double t = t0 + u * st.mass;
      fm::GridWavefunction evolved = *st.psi;
      try {
        evolved = fm::free_propagate(*st.psi, t);
      } catch (const fm::boundary_overflow& e) {
        throw fm::boundary_overflow("grid evolution failed at u = " + fm::format_double(u) +
                                    ": " + e.what());
      }
      rows.push_back({u, fm::measure_moments(evolved, order).values, "grid"});
    }
  }

  const bool as_json = cfg.format == "json";
  std::ostringstream out;
  if (as_json) {
    json doc;
    doc["schema"] = 1;
    doc["command"] = "evolve";
    doc["family"] = st.family;
    doc["params"] = st.params;
    doc["order"] = order;
    doc["hbar"] = st.hbar;
    doc["mass"] = st.mass;
    doc["length_scale"] = cfg.length_scale;
    doc["t0"] = t0;
    json jrows = json::array();
    for (const auto& r : rows)
      jrows.push_back({{"u", r.u}, {"values", r.values}, {"source", r.source}});
    doc["rows"] = jrows;
    out << doc.dump(2) << "\n";
  } else {
    out << "# evolve: family=" << st.family << " order=" << order << "\n";
    out << "# params:";
    for (const auto& [key, value] : st.params.items())
      out << ' ' << key << '='
          << (value.is_string() ? value.get<std::string>()
                                : fm::format_double(value.get<double>()));
    out << "\n";
    out << "# hbar=" << fm::format_double(st.hbar) << " mass=" << fm::format_double(st.mass)
        << " length_scale=" << fm::format_double(cfg.length_scale) << "\n";
    out << "# t0=" << fm::format_double(t0) << " u=(t-t0)/mass\n";
    out << "u";
    for (int k = 0; k <= order; ++k) out << ",Y" << k;
    out << ",source\n";
    for (const auto& r : rows) {
      out << fm::format_double(r.u);
      for (const double v : r.values) out << ',' << fm::format_double(v);
      out << ',' << r.source << "\n";
    }
  }
  emit(cfg, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const std::vector<std::string>& spec, const RunConfig& cfg) {
  if (spec.empty())
    throw fm::invalid_input(
        "classify needs a state spec, or: moments file=<json> | moments y=<v0,v1,...>");

  fm::MomentVector y;
  std::string source;
  json echo = json::object();
  std::string family = spec[0];

  if (family == "moments") {
    Params p = parse_params(spec, 1);
    const auto path = take_string(p, "file");
    const auto inline_y = take_string(p, "y");
    reject_unknown(p, "moments");
    if (static_cast<bool>(path) == static_cast<bool>(inline_y))
      throw fm::invalid_input("moments needs exactly one of file=<json> or y=<v0,v1,...>");
    if (path) {
      std::ifstream in(*path);
      if (!in) throw fm::invalid_input("cannot open moments file '" + *path + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      y = fm::moment_vector_from_json(buf.str());
      echo["file"] = *path;
    } else {
      std::vector<double> values;
      std::istringstream items(*inline_y);
      std::string item;
      while (std::getline(items, item, ','))
        values.push_back(parse_number(item, "moment component"));
      if (values.size() < 4 || values.size() > 5)
        throw fm::invalid_input("y=<...> needs 4 (order 3) or 5 (order 4) components");
      const int y_order = static_cast<int>(values.size()) - 1;
      y = fm::MomentVector(y_order, std::move(values), cfg.mass, cfg.hbar);
      echo["y"] = *inline_y;
    }
    source = "input";
    if (y.order != 3 && y.order != 4)
      throw fm::invalid_input("classification needs order 3 or 4 moments");
  } else {
    ResolvedState st = resolve_state(spec, cfg);
    const int order = cfg.order != 0 ? cfg.order : (st.family == "skew_gaussian" ? 3 : 4);
    if (order == 2) throw fm::invalid_input("classification needs order 3 or 4 moments");
    const auto auth = authoritative_moments(st);
    if (!auth.count(order))
      throw fm::domain_error("order-" + std::to_string(order) + " moments of " + st.family +
                             " are outside the family's existence domain");
    y = auth.at(order);
    if (st.grid_backed && auth.count(2)) {
      std::optional<double> sigma_x, sigma_p;
      if (auth.at(2)[0] > 0) sigma_x = std::sqrt(auth.at(2)[0]);
      if (auth.at(2)[2] > 0) sigma_p = std::sqrt(auth.at(2)[2]);
      y = floor_measurement_noise(y, sigma_x, sigma_p);
    }
    source = st.grid_backed ? "operator" : "closed_form";
    echo = st.params;
  }

  std::string note;
  const auto report = classify_routed(y, &note);

  json doc = parsed(fm::to_json(report));
  doc["schema"] = 1;
  doc["command"] = "classify";
  doc["family"] = family;
  doc["params"] = echo;
  doc["source"] = source;
  doc["hbar"] = y.hbar;
  doc["mass"] = y.mass;
  doc["length_scale"] = cfg.length_scale;
  if (!note.empty()) doc["note"] = note;

  if (!cfg.format.empty() && cfg.format != "json")
    throw fm::invalid_input("classify emits JSON; csv is not available");
  emit(cfg, doc.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

fm::MomentVector random_moments(std::mt19937_64& rng, int order) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::vector<double> values(static_cast<std::size_t>(order) + 1);
  for (auto& v : values) v = coeff(rng);
  while (std::fabs(values.back()) < 0.25) values.back() = coeff(rng);
  return fm::MomentVector(order, std::move(values));
}

double drift_metric(const fm::MomentVector& a, const fm::MomentVector& b) {
  const auto za = fm::invariants(a);
  const auto zb = fm::invariants(b);
  const auto sa = fm::invariant_scale(a);
  const auto sb = fm::invariant_scale(b);
  double worst = 0.0;
  for (std::size_t l = 0; l < za.z.size(); ++l) {
    const double denom = std::max({std::fabs(za.z[l]), sa[l], sb[l]});
    worst = std::max(worst, std::fabs(zb.z[l] - za.z[l]) / denom);
  }
  return worst;
}

fm::GridWavefunction smooth_random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  const double alpha = 1.0 + std::fabs(coeff(rng));
  const double beta = coeff(rng), gamma = coeff(rng), delta = coeff(rng), eps = coeff(rng);
  const std::size_t n = 512;
  const double x_min = -10.0, dx = 20.0 / static_cast<double>(n);
  std::vector<std::complex<double>> amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_min + dx * static_cast<double>(i);
    amp[i] = std::complex<double>(alpha + beta * x + gamma * x * x, delta + eps * x) *
             std::exp(-0.5 * x * x);
  }
  return fm::GridWavefunction{std::move(amp), x_min, dx, 1.0, 1.0};
}

std::vector<CheckResult> suite_invariance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> orders(2, 6);
  std::uniform_real_distribution<double> times(-10.0, 10.0);

  double worst_drift = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto y = random_moments(rng, orders(rng));
    worst_drift = std::max(worst_drift, drift_metric(y, fm::propagate(y, times(rng))));
  }

  // Both error metrics below are scaled by the conditioning of the binomial
  // sums involved: the terms being summed can exceed the (cancelled) result
  // by orders of magnitude, and roundoff lives at the term scale.
  double worst_round_trip = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto y = random_moments(rng, orders(rng));
    const int n = y.order;
    const double t = times(rng);
    const auto z = fm::invariants(y);
    const auto s = fm::invariant_scale(y);
    const double u = (t - z.t0) / y.mass;
    const auto back = fm::moments_from_invariants(z, u);
    const auto direct = fm::propagate(y, t);
    for (int k = 0; k <= n; ++k) {
      double scale = 0.0, u_pow = 1.0;
      for (int j = 0; j <= n - k; ++j) {
        scale += fm::binomial(n - k, j) * s[static_cast<std::size_t>(n - k - j)] * u_pow *
                 std::pow(std::fabs(z.yn), -(n - k - j - 1));
        u_pow *= std::fabs(u);
      }
      const double denom = std::max({std::fabs(direct[k]), std::fabs(back[k]), scale});
      worst_round_trip = std::max(worst_round_trip, std::fabs(direct[k] - back[k]) / denom);
    }
  }

  double worst_semigroup = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto y = random_moments(rng, orders(rng));
    const double t1 = times(rng), t2 = times(rng);
    const auto once = fm::propagate(y, t1 + t2);
    const auto twice = fm::propagate(fm::propagate(y, t1), t2);
    double max_y = 0.0;
    for (int k = 0; k <= y.order; ++k) max_y = std::max(max_y, std::fabs(y[k]));
    for (int k = 0; k <= y.order; ++k) {
      const double scale =
          std::pow((1.0 + std::fabs(t1)) * (1.0 + std::fabs(t2)), y.order - k) * max_y;
      const double denom = std::max({std::fabs(once[k]), std::fabs(twice[k]), scale});
      worst_semigroup = std::max(worst_semigroup, std::fabs(once[k] - twice[k]) / denom);
    }
  }

  return {
      {"propagate invariant drift", worst_drift < 1e-12,
       "worst relative drift " + brief(worst_drift) + " over 2000 trials (limit 1e-12)"},
      {"invariant reconstruction round-trip", worst_round_trip < 1e-12,
       "worst scaled error " + brief(worst_round_trip) + " (limit 1e-12)"},
      {"propagation semigroup", worst_semigroup < 1e-12,
       "worst scaled error " + brief(worst_semigroup) + " (limit 1e-12)"},
  };
}

std::vector<CheckResult> suite_oracle(std::uint64_t seed) {
  std::vector<CheckResult> out;

  {
    const fm::Gaussian g{1.0, 1.0, 1.0};
    const auto psi = g.grid(2048, 14.0);
    double worst = 0.0;
    for (const int n : {2, 4}) {
      const auto measured = fm::measure_moments(psi, n);
      const auto closed = g.moments(n);
      for (int k = 0; k <= n; ++k) {
        const double denom = std::max({std::fabs(closed[k]), 1e-3});
        worst = std::max(worst, std::fabs(measured[k] - closed[k]) / denom);
      }
    }
    out.push_back({"gaussian grid vs closed form", worst < 1e-7,
                   "worst relative error " + brief(worst) + " (limit 1e-7)"});
  }

  {
    const fm::SkewGaussian sk{0.671, 1.0, 1.0, 1.0};
    const auto psi = sk.grid(4096, 26.0);
    const auto y = fm::measure_moments(psi, 3);
    const auto c = fm::centroid(psi);
    double worst = std::fabs(y[1] - sk.y1()) / std::fabs(sk.y1());
    worst = std::max(worst, std::fabs(y[3] - sk.y3()) / std::fabs(sk.y3()));
    worst = std::max(worst, std::fabs(c.p - sk.p_mean()) / std::fabs(sk.p_mean()));
    out.push_back({"skew-gaussian grid vs closed form", worst < 1e-5,
                   "worst relative error " + brief(worst) + " (limit 1e-5)"});
  }

  {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const auto psi = smooth_random_state(rng);
      const auto w = fm::wigner_transform(psi);
      for (int n = 2; n <= 4; ++n) {
        const auto op = fm::measure_moments(psi, n);
        for (int k = 0; k <= n; ++k) {
          const double wm = fm::wigner_moment(w, k, n);
          worst = std::max(worst, std::fabs(wm - op[k]) /
                                      std::max(1e-2, std::fabs(op[k])));
        }
      }
    }
    out.push_back({"operator vs Wigner moments", worst < 1e-4,
                   "worst scaled difference " + brief(worst) + " (limit 1e-4)"});
  }

  {
    double worst = 0.0;
    for (const auto& pe : {fm::PowerExponential{2.0, 1.0, 1.0, 1.0, 1.0},
                           fm::PowerExponential{1.51, 0.24, 1.0, 1.0, 1.0}}) {
      const std::array<std::pair<double, double>, 5> pairs = {{
          {pe.x2(), pe.x_even_moment_quadrature(2)},
          {pe.x4(), pe.x_even_moment_quadrature(4)},
          {pe.p2(), pe.p2_quadrature()},
          {pe.p4(), pe.p4_quadrature()},
          {pe.y2(), pe.y2_quadrature()},
      }};
      for (const auto& [closed, quad] : pairs)
        worst = std::max(worst,
                         std::fabs(closed - quad) / std::max(std::fabs(closed), 1e-12));
    }
    out.push_back({"power-exponential quadrature vs Gamma forms", worst < 1e-6,
                   "worst relative error " + brief(worst) + " (limit 1e-6)"});
  }

  return out;
}

std::vector<CheckResult> suite_inequalities(std::uint64_t seed) {
  std::vector<CheckResult> out;
  int violations = 0;
  int checked = 0;
  std::string first_violation;

  const auto run_state = [&](const std::string& label, const fm::MomentVector& y2,
                             const fm::MomentVector& y3, const fm::MomentVector& y4,
                             bool parity, double m3x) {
    std::vector<fm::InequalityReport> reps;
    for (const auto& r : fm::check_schrodinger(y2)) reps.push_back(r);
    for (const auto& r : fm::check_omega4_bound(y4, y2[2], y4[4], parity))
      reps.push_back(r);
    reps.push_back(fm::check_even_product(y2[0], y2[2], 2, y2.hbar));
    reps.push_back(fm::check_even_product(y4[0], y4[4], 4, y4.hbar));
    reps.push_back(fm::check_kurtosis_skewness(y2[0], m3x, y4[0], false));
    reps.push_back(fm::check_kurtosis_skewness(y2[2], y3[3], y4[4], true));
    for (const auto& r : reps) {
      ++checked;
      if (!r.satisfied) {
        ++violations;
        if (first_violation.empty())
          first_violation = label + "/" + fm::to_string(r.name);
      }
    }
  };

  {
    const fm::Gaussian g{1.0, 1.0, 1.0};
    const auto psi = g.grid(2048, 14.0);
    run_state("gaussian", fm::measure_moments(psi, 2), fm::measure_moments(psi, 3),
              fm::measure_moments(psi, 4), true, fm::position_moments(psi, 3)[3]);
  }
  {
    const fm::SkewGaussian sk{0.671, 1.0, 1.0, 1.0};
    const auto psi = sk.grid(4096, 26.0);
    run_state("skew_gaussian", fm::measure_moments(psi, 2), fm::measure_moments(psi, 3),
              fm::measure_moments(psi, 4), false, fm::position_moments(psi, 3)[3]);
  }
  for (const auto& pe : {fm::PowerExponential{2.0, 1.0, 1.0, 1.0, 1.0},
                         fm::PowerExponential{1.51, 0.24, 1.0, 1.0, 1.0},
                         fm::PowerExponential{3.0, 0.5, 1.0, 1.0, 1.0}}) {
    const fm::MomentVector y2(2, {pe.x2(), 0.0, pe.p2()});
    const fm::MomentVector y3(3, {0.0, 0.0, 0.0, 0.0});
    run_state("power_exp", y2, y3, pe.moments4(), true, 0.0);
  }
  {
    std::mt19937_64 rng(seed + 1);
    for (int trial = 0; trial < 10; ++trial) {
      const auto psi = smooth_random_state(rng);
      run_state("random smooth state", fm::measure_moments(psi, 2),
                fm::measure_moments(psi, 3), fm::measure_moments(psi, 4), false,
                fm::position_moments(psi, 3)[3]);
    }
  }
  out.push_back({"quantum states satisfy every bound", violations == 0,
                 violations == 0
                     ? std::to_string(checked) + " checks satisfied"
                     : std::to_string(violations) + " violations, first at " +
                           first_violation});

  {
    const fm::Gaussian g{1.0, 1.0, 1.0};
    const auto psi = g.grid(2048, 14.0);
    const auto r = fm::check_schrodinger(fm::measure_moments(psi, 2))[0];
    const double off = std::fabs(r.saturation_ratio - 1.0);
    out.push_back({"gaussian saturates the Schrodinger bound", off < 1e-8,
                   "|ratio - 1| = " + brief(off) + " (limit 1e-8)"});
  }

  {
    std::vector<double> ratios;
    for (const double b : {0.24, 0.12, 0.06}) {
      const fm::PowerExponential pe{1.51, b, 1.0, 1.0, 1.0};
      ratios.push_back(fm::check_omega4_bound(pe.moments4(), pe.p2(), pe.p4())[0]
                           .saturation_ratio);
    }
    const bool monotone =
        ratios[0] < ratios[1] && ratios[1] < ratios[2] && ratios[2] < 1.0;
    out.push_back({"Omega_4 bound saturation rises as b -> 0", monotone,
                   "ratios " + brief(ratios[0]) + " -> " + brief(ratios[1]) + " -> " +
                       brief(ratios[2])});
  }

  return out;
}

std::vector<CheckResult> suite_classical(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  {
    std::uniform_int_distribution<std::size_t> sizes(2, 1000);
    std::uniform_real_distribution<double> rho(-1.0, 1.0);
    std::uniform_real_distribution<double> spread(0.05, 3.0);
    double min_ratio = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 2000; ++trial) {
      const auto e =
          fm::random_ensemble(rng, sizes(rng), 0.0, spread(rng), 0.0, spread(rng), rho(rng));
      const double omega = fm::classical_omega4(e);
      const double scale = fm::classical_omega4_scale(e);
      if (omega < -1e-12 * scale) ok = false;
      if (scale > 0) min_ratio = std::min(min_ratio, omega / scale);
    }
    out.push_back({"classical Omega_4 positivity", ok,
                   "min Omega_4/scale " + brief(min_ratio) + " over 2000 ensembles "
                   "(limit -1e-12)"});
  }

  {
    std::uniform_real_distribution<double> times(-4.0, 4.0);
    double worst = 0.0;
    for (int trial = 0; trial < 150; ++trial) {
      const auto e = fm::random_ensemble(rng, 300, 0.3, 1.1, -0.2, 0.9, 0.25, 1.4);
      const double t = times(rng);
      const auto moved = fm::drift(e, t);
      for (int n = 2; n <= 6; ++n) {
        const auto predicted = fm::propagate(fm::ensemble_moments(e, n), t);
        const auto actual = fm::ensemble_moments(moved, n);
        for (int k = 0; k <= n; ++k) {
          const double scale =
              std::pow(1.1 * (1.0 + std::fabs(t)), n - k) * std::pow(0.9, k);
          worst = std::max(worst, std::fabs(actual[k] - predicted[k]) /
                                      std::max({std::fabs(predicted[k]), scale}));
        }
      }
    }
    out.push_back({"ensemble drift matches the quantum propagator", worst < 1e-10,
                   "worst relative error " + brief(worst) + " (limit 1e-10)"});
  }

  {
    const fm::ParticleEnsemble two({-1.0, 1.0}, {-1.0, 1.0});
    const auto y = fm::ensemble_moments(two, 2);
    const double omega2 = y[0] * y[2] - y[1] * y[1];
    const bool ok = fm::classical_omega4(two) == 0.0 && omega2 == 0.0;
    out.push_back({"perfectly correlated pair saturates positivity", ok,
                   "Omega_4 = " + brief(fm::classical_omega4(two)) +
                       ", Omega_2 = " + brief(omega2)});
  }

  return out;
}

int cmd_verify(const std::string& suite, const RunConfig& cfg) {
  const std::vector<std::string> known = {"invariance", "oracle", "inequalities",
                                          "classical"};
  std::vector<std::string> selected;
  if (suite == "all")
    selected = known;
  else if (std::find(known.begin(), known.end(), suite) != known.end())
    selected = {suite};
  else
    throw fm::invalid_input("unknown suite '" + suite +
                            "'; expected invariance, oracle, inequalities, classical or all");

  std::ostringstream table;
  json log;
  log["schema"] = 1;
  log["command"] = "verify";
  log["seed"] = cfg.seed;
  json jsuites = json::array();
  bool all_pass = true;

  for (const auto& name : selected) {
    std::vector<CheckResult> checks;
    if (name == "invariance") checks = suite_invariance(cfg.seed);
    if (name == "oracle") checks = suite_oracle(cfg.seed);
    if (name == "inequalities") checks = suite_inequalities(cfg.seed);
    if (name == "classical") checks = suite_classical(cfg.seed);

    bool suite_pass = true;
    json jchecks = json::array();
    for (const auto& c : checks) {
      suite_pass = suite_pass && c.pass;
      table << (c.pass ? "[ok]   " : "[FAIL] ") << name << ": " << c.name << " — "
            << c.detail << "\n";
      jchecks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    table << "suite " << name << ": " << (suite_pass ? "pass" : "FAIL") << "\n";
    jsuites.push_back({{"name", name}, {"pass", suite_pass}, {"checks", jchecks}});
    all_pass = all_pass && suite_pass;
  }
  log["suites"] = jsuites;
  log["pass"] = all_pass;

  table << "verify: " << (all_pass ? "pass" : "FAIL") << "\n";
  std::cout << table.str();
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw fm::invalid_input("cannot open output file '" + cfg.out_path + "'");
    out << log.dump(2) << "\n";
  } else if (!all_pass) {
    std::cout << log.dump(2) << "\n";
  }
  return all_pass ? 0 : 3;
}

// ---------------------------------------------------------------------------
// ensemble

int cmd_ensemble_generate(const std::vector<std::string>& args, const RunConfig& cfg) {
  Params p = parse_params(args, 0);
  const double n_raw = take_number(p, "n", 1000.0);
  const double mean_x = take_number(p, "mean_x", 0.0);
  const double sigma_x = take_number(p, "sigma_x", 1.0);
  const double mean_p = take_number(p, "mean_p", 0.0);
  const double sigma_p = take_number(p, "sigma_p", 1.0);
  const double rho = take_number(p, "rho", 0.0);
  reject_unknown(p, "ensemble generate");
  if (n_raw < 2 || n_raw != std::floor(n_raw))
    throw fm::invalid_input("ensemble generate: n must be an integer >= 2");

  std::mt19937_64 rng(cfg.seed);
  const auto e = fm::random_ensemble(rng, static_cast<std::size_t>(n_raw), mean_x, sigma_x,
                                     mean_p, sigma_p, rho, cfg.mass);

  std::ostringstream out;
  out << "# ensemble: n=" << fm::format_double(n_raw) << " seed=" << cfg.seed
      << " mean_x=" << fm::format_double(mean_x) << " sigma_x=" << fm::format_double(sigma_x)
      << " mean_p=" << fm::format_double(mean_p) << " sigma_p=" << fm::format_double(sigma_p)
      << " rho=" << fm::format_double(rho) << "\n";
  out << "# hbar=" << fm::format_double(cfg.hbar) << " mass=" << fm::format_double(cfg.mass)
      << " length_scale=" << fm::format_double(cfg.length_scale) << "\n";
  fm::write_ensemble_csv(out, e);
  emit(cfg, out.str());
  return 0;
}

int cmd_ensemble_analyze(const std::vector<std::string>& args, const RunConfig& cfg) {
  Params p = parse_params(args, 0);
  const auto path = take_string(p, "file");
  reject_unknown(p, "ensemble analyze");
  if (!path) throw fm::invalid_input("ensemble analyze requires file=<csv>");

  std::ifstream in(*path);
  if (!in) throw fm::invalid_input("cannot open ensemble file '" + *path + "'");
  const auto e = fm::read_ensemble_csv(in, cfg.mass);

  double mean_x = 0.0, mean_p = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    mean_x += e.positions[i];
    mean_p += e.momenta[i];
  }
  mean_x /= static_cast<double>(e.size());
  mean_p /= static_cast<double>(e.size());

  json doc;
  doc["schema"] = 1;
  doc["command"] = "ensemble analyze";
  doc["count"] = e.size();
  doc["hbar"] = cfg.hbar;
  doc["mass"] = cfg.mass;
  doc["length_scale"] = cfg.length_scale;
  doc["centroid"] = {{"x", mean_x}, {"p", mean_p}};

  json moments = json::object();
  json invariants = json::object();
  for (int n = 2; n <= 4; ++n) {
    const auto y = fm::ensemble_moments(e, n, cfg.hbar);
    moments[std::to_string(n)] = parsed(fm::to_json(y));
    invariants[std::to_string(n)] =
        y[n] == 0.0 ? json(nullptr) : parsed(fm::to_json(fm::invariants(y)));
  }
  doc["moments"] = moments;
  doc["invariants"] = invariants;

  const double omega = fm::classical_omega4(e);
  const double scale = fm::classical_omega4_scale(e);
  doc["classical_omega4"] = omega;
  doc["classical_omega4_scale"] = scale;
  doc["positivity_ok"] = omega >= -1e-12 * scale;

  if (!cfg.format.empty() && cfg.format != "json")
    throw fm::invalid_input("ensemble analyze emits JSON; csv is not available");
  emit(cfg, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-particle phase-space moments: analyze, evolve, classify, verify"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, format, out_path;
  std::uint64_t seed = 1;
  int order = 0;
  app.add_option("--config", config_path, "JSON run-configuration file");
  app.add_option("--format", format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "write output to this path instead of stdout");
  app.add_option("--seed", seed, "PRNG seed for verify and ensemble generate");
  app.add_option("--order", order, "moment order (2, 3 or 4)")->check(CLI::Range(2, 4));

  auto* analyze = app.add_subcommand(
      "analyze", "measure a state: moments, invariants, geometry, inequalities");
  std::vector<std::string> analyze_spec;
  analyze->add_option("spec", analyze_spec, "family name, then key=value parameters");

  auto* evolve =
      app.add_subcommand("evolve", "emit the moment time series in scaled time u");
  std::vector<std::string> evolve_spec;
  evolve->add_option("spec", evolve_spec, "family name, then key=value parameters");

  auto* classify =
      app.add_subcommand("classify", "classify the time dependence of Y_0 .. Y_n");
  std::vector<std::string> classify_spec;
  classify->add_option("spec", classify_spec,
                       "family spec, or: moments file=<json> | moments y=<v0,v1,...>");

  auto* verify = app.add_subcommand("verify", "run a numerical verification suite");
  std::string suite = "all";
  verify->add_option("suite", suite, "invariance | oracle | inequalities | classical | all");

  auto* ensemble = app.add_subcommand("ensemble", "classical ensemble utilities");
  ensemble->require_subcommand(1);
  ensemble->fallthrough();
  auto* ens_generate =
      ensemble->add_subcommand("generate", "draw a correlated Gaussian ensemble as CSV");
  std::vector<std::string> generate_args;
  ens_generate->add_option(
      "params", generate_args, "key=value: n, mean_x, sigma_x, mean_p, sigma_p, rho");
  auto* ens_analyze =
      ensemble->add_subcommand("analyze", "moments and positivity of an x,p CSV");
  std::vector<std::string> ens_analyze_args;
  ens_analyze->add_option("params", ens_analyze_args, "file=<csv>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) load_config_file(config_path, cfg);
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.out_path = out_path;
    cfg.seed = seed;
    cfg.order = order;
    validate_config(cfg);

    if (analyze->parsed()) return cmd_analyze(analyze_spec, cfg);
    if (evolve->parsed()) return cmd_evolve(evolve_spec, cfg);
    if (classify->parsed()) return cmd_classify(classify_spec, cfg);
    if (verify->parsed()) return cmd_verify(suite, cfg);
    if (ensemble->parsed()) {
      if (ens_generate->parsed()) return cmd_ensemble_generate(generate_args, cfg);
      if (ens_analyze->parsed()) return cmd_ensemble_analyze(ens_analyze_args, cfg);
    }
    throw fm::invalid_input("no subcommand selected");
  } catch (const fm::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fm::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
