#include "fracmass/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fracmass {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

Vec read_point(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw std::invalid_argument(where + ": point dimension mismatch");
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = j[i].get<double>();
  return v;
}

PolyCurve read_curve(const json& j, int dim, const std::string& where) {
  PolyCurve c;
  c.closed = j.value("closed", false);
  c.weight = j.value("weight", 1.0);
  if (!j.contains("vertices"))
    throw std::invalid_argument(where + ": curve missing vertices");
  for (const auto& v : j.at("vertices"))
    c.vertices.push_back(read_point(v, dim, where));
  return c;
}

void write_point(std::ostream& os, const Vec& p) {
  os << '[';
  for (int i = 0; i < p.dim(); ++i) {
    if (i) os << ',';
    os << format_double(p[i]);
  }
  os << ']';
}

void write_curve(std::ostream& os, const PolyCurve& c) {
  os << "{\"closed\":" << (c.closed ? "true" : "false")
     << ",\"weight\":" << format_double(c.weight) << ",\"vertices\":[";
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (i) os << ',';
    write_point(os, c.vertices[i]);
  }
  os << "]}";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<PolyCurve> load_curves(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("dim") || !j.contains("curves"))
    throw std::invalid_argument(path + ": expected {dim, curves}");
  const int dim = j.at("dim").get<int>();
  std::vector<PolyCurve> out;
  for (const auto& c : j.at("curves")) out.push_back(read_curve(c, dim, path));
  for (const auto& c : out) c.validate();
  return out;
}

void save_curves(const std::vector<PolyCurve>& curves, int dim,
                 const std::string& path) {
  auto out = open_out(path);
  out << "{\"dim\":" << dim << ",\"curves\":[";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i) out << ',';
    write_curve(out, curves[i]);
  }
  out << "]}\n";
}

SegmentCurrent load_current(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("dim") || !j.contains("segments"))
    throw std::invalid_argument(path + ": expected {dim, segments}");
  SegmentCurrent mu;
  mu.dim = j.at("dim").get<int>();
  for (const auto& s : j.at("segments")) {
    OrientedSegment seg;
    seg.a = read_point(s.at("a"), mu.dim, path);
    seg.b = read_point(s.at("b"), mu.dim, path);
    seg.w = s.value("w", 1.0);
    mu.segments.push_back(seg);
  }
  return mu;
}

void save_current(const SegmentCurrent& mu, const std::string& path) {
  auto out = open_out(path);
  out << "{\"dim\":" << mu.dim << ",\"segments\":[";
  for (std::size_t i = 0; i < mu.segments.size(); ++i) {
    if (i) out << ',';
    const auto& s = mu.segments[i];
    out << "{\"a\":";
    write_point(out, s.a);
    out << ",\"b\":";
    write_point(out, s.b);
    out << ",\"w\":" << format_double(s.w) << '}';
  }
  out << "]}\n";
}

PlanarRegion load_region(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("outer"))
    throw std::invalid_argument(path + ": expected {dim, outer, holes}");
  const int dim = j.value("dim", 2);
  if (dim != 2) throw std::invalid_argument(path + ": regions are 2-D");
  PlanarRegion r;
  r.outer = read_curve(j.at("outer"), 2, path);
  r.outer.closed = true;
  if (j.contains("holes"))
    for (const auto& h : j.at("holes")) {
      r.holes.push_back(read_curve(h, 2, path));
      r.holes.back().closed = true;
    }
  r.validate();
  return r;
}

void save_region(const PlanarRegion& region, const std::string& path) {
  auto out = open_out(path);
  out << "{\"dim\":2,\"outer\":";
  write_curve(out, region.outer);
  out << ",\"holes\":[";
  for (std::size_t i = 0; i < region.holes.size(); ++i) {
    if (i) out << ',';
    write_curve(out, region.holes[i]);
  }
  out << "]}\n";
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::map<std::string, std::string> cfg;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) cfg[key] = val;
  }
  return cfg;
}

}  // namespace fracmass
