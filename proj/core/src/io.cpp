#include "freemoments/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

namespace fm {

namespace {

using nlohmann::json;

double parse_double(const std::string& token) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r'))
    --last;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw invalid_input("malformed number '" + token + "'");
  return value;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw invalid_input("malformed JSON");
  return j;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw invalid_input(std::string("missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

// Scans "key=value" pairs out of a comment header line.
void scan_header_value(const std::string& line, const char* key, double* into) {
  const std::string needle = std::string(key) + "=";
  const std::size_t pos = line.find(needle);
  if (pos == std::string::npos) return;
  std::size_t end = line.find(' ', pos + needle.size());
  if (end == std::string::npos) end = line.size();
  *into = parse_double(line.substr(pos + needle.size(), end - pos - needle.size()));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw invalid_input("value is not representable as text");
  return std::string(buf, ptr);
}

std::string to_json(const MomentVector& y) {
  json j;
  j["order"] = y.order;
  j["values"] = y.values;
  j["mass"] = y.mass;
  j["hbar"] = y.hbar;
  return j.dump();
}

MomentVector moment_vector_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.contains("order") || !j["order"].is_number_integer())
    throw invalid_input("missing or non-integer field 'order'");
  if (!j.contains("values") || !j["values"].is_array())
    throw invalid_input("missing or non-array field 'values'");
  std::vector<double> values;
  for (const auto& v : j["values"]) {
    if (!v.is_number()) throw invalid_input("moment entries must be numbers");
    values.push_back(v.get<double>());
  }
  const double mass = j.contains("mass") ? require_number(j, "mass") : 1.0;
  const double hbar = j.contains("hbar") ? require_number(j, "hbar") : 1.0;
  return MomentVector(j["order"].get<int>(), std::move(values), mass, hbar);
}

std::string to_json(const InvariantSet& zset) {
  json j;
  j["order"] = zset.order;
  j["z"] = zset.z;
  j["t0"] = zset.t0;
  j["yn"] = zset.yn;
  return j.dump();
}

InvariantSet invariant_set_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.contains("order") || !j["order"].is_number_integer())
    throw invalid_input("missing or non-integer field 'order'");
  if (!j.contains("z") || !j["z"].is_array())
    throw invalid_input("missing or non-array field 'z'");

  InvariantSet zset;
  zset.order = j["order"].get<int>();
  for (const auto& v : j["z"]) {
    if (!v.is_number()) throw invalid_input("invariant entries must be numbers");
    zset.z.push_back(v.get<double>());
  }
  zset.t0 = require_number(j, "t0");
  zset.yn = require_number(j, "yn");
  zset.mass = 1.0;
  zset.hbar = 1.0;
  if (zset.order < 1 || zset.z.size() != static_cast<std::size_t>(zset.order) + 1)
    throw invalid_input("invariant array length must be order+1");
  return zset;
}

std::string to_json(const GeometryReport& report) {
  json j;
  j["order"] = report.order;
  j["case"] = to_string(report.case_label);
  if (report.u0)
    j["u0"] = *report.u0;
  else
    j["u0"] = nullptr;
  json pts = json::array();
  for (const auto& cp : report.critical_points) {
    json p;
    p["u"] = cp.u;
    p["kind"] = to_string(cp.kind);
    p["value"] = cp.value;
    pts.push_back(p);
  }
  j["critical_points"] = pts;
  j["boundary"] = report.boundary;
  return j.dump();
}

std::string to_json(const InequalityReport& report) {
  json j;
  j["name"] = to_string(report.name);
  j["lhs"] = report.lhs;
  j["rhs"] = report.rhs;
  j["margin"] = report.margin;
  j["satisfied"] = report.satisfied;
  j["saturation_ratio"] = report.saturation_ratio;
  j["provenance"] = to_string(report.provenance);
  return j.dump();
}

void write_wavefunction_csv(std::ostream& out, const GridWavefunction& psi) {
  out << "# wavefunction grid: points=" << psi.size() << " x_min=" << format_double(psi.x_min)
      << " dx=" << format_double(psi.dx) << " hbar=" << format_double(psi.hbar)
      << " mass=" << format_double(psi.mass) << "\n";
  out << "x,re_psi,im_psi\n";
  for (std::size_t i = 0; i < psi.size(); ++i)
    out << format_double(psi.x_at(i)) << ',' << format_double(psi.amplitudes[i].real())
        << ',' << format_double(psi.amplitudes[i].imag()) << "\n";
  if (!out) throw invalid_input("failed to write wavefunction CSV");
}

GridWavefunction read_wavefunction_csv(std::istream& in) {
  GridWavefunction psi;
  std::vector<double> xs;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      scan_header_value(line, "hbar", &psi.hbar);
      scan_header_value(line, "mass", &psi.mass);
      continue;
    }
    if (!header_seen) {
      if (line != "x,re_psi,im_psi")
        throw invalid_input("expected header 'x,re_psi,im_psi', got '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_row(line);
    if (fields.size() != 3)
      throw invalid_input("wavefunction rows need exactly three columns");
    xs.push_back(parse_double(fields[0]));
    psi.amplitudes.emplace_back(parse_double(fields[1]), parse_double(fields[2]));
  }
  if (xs.size() < 2) throw invalid_input("wavefunction CSV needs at least two samples");

  psi.x_min = xs.front();
  psi.dx = xs[1] - xs[0];
  if (!(psi.dx > 0.0)) throw invalid_input("x column must be strictly increasing");
  const double span = std::fabs(xs.back() - xs.front());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::fabs(xs[i] - (psi.x_min + static_cast<double>(i) * psi.dx)) >
        1e-9 * std::max(1.0, span))
      throw invalid_input("x column is not uniformly spaced");
  return psi;
}

namespace {

constexpr char binary_magic[6] = {'F', 'M', 'W', 'F', '1', '\n'};

template <typename T>
void write_raw(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void read_raw(std::istream& in, T* v) {
  in.read(reinterpret_cast<char*>(v), sizeof *v);
  if (!in) throw invalid_input("truncated wavefunction binary");
}

}  // namespace

void write_wavefunction_binary(std::ostream& out, const GridWavefunction& psi) {
  out.write(binary_magic, sizeof binary_magic);
  write_raw(out, static_cast<std::uint64_t>(psi.size()));
  write_raw(out, psi.x_min);
  write_raw(out, psi.dx);
  write_raw(out, psi.hbar);
  write_raw(out, psi.mass);
  for (const auto& a : psi.amplitudes) {
    write_raw(out, a.real());
    write_raw(out, a.imag());
  }
  if (!out) throw invalid_input("failed to write wavefunction binary");
}

GridWavefunction read_wavefunction_binary(std::istream& in) {
  char magic[sizeof binary_magic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, binary_magic, sizeof magic) != 0)
    throw invalid_input("not a wavefunction binary (bad magic)");

  std::uint64_t count = 0;
  GridWavefunction psi;
  read_raw(in, &count);
  read_raw(in, &psi.x_min);
  read_raw(in, &psi.dx);
  read_raw(in, &psi.hbar);
  read_raw(in, &psi.mass);
  if (count < 2 || count > (1ull << 30))
    throw invalid_input("implausible sample count in wavefunction binary");
  psi.amplitudes.resize(count);
  for (auto& a : psi.amplitudes) {
    double re = 0.0, im = 0.0;
    read_raw(in, &re);
    read_raw(in, &im);
    a = {re, im};
  }
  return psi;
}

void write_ensemble_csv(std::ostream& out, const ParticleEnsemble& e) {
  out << "x,p\n";
  for (std::size_t i = 0; i < e.size(); ++i)
    out << format_double(e.positions[i]) << ',' << format_double(e.momenta[i]) << "\n";
  if (!out) throw invalid_input("failed to write ensemble CSV");
}

ParticleEnsemble read_ensemble_csv(std::istream& in, double mass) {
  std::vector<double> x, p;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') continue;
    if (!header_seen) {
      if (line != "x,p") throw invalid_input("expected header 'x,p', got '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_row(line);
    if (fields.size() != 2) throw invalid_input("ensemble rows need exactly two columns");
    x.push_back(parse_double(fields[0]));
    p.push_back(parse_double(fields[1]));
  }
  return ParticleEnsemble(std::move(x), std::move(p), mass);
}

}  // namespace fm
