#include "esample/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "esample/random.hpp"

namespace esample {

namespace {

// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(out);
}

bool parse_flag(const std::string& s, char& out) {
  std::string t = trim(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "yes" || t == "y" || t == "t") {
    out = 1;
    return true;
  }
  if (t == "0" || t == "false" || t == "no" || t == "n" || t == "f" || t.empty()) {
    out = 0;
    return true;
  }
  return false;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

CsvData ingest_csv(const std::string& path, const std::string& x_col, const std::string& y_col,
                   const std::vector<std::string>& flag_cols, bool rotate, std::uint64_t rotation_seed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw Error(ErrorCode::SchemaError, "'" + path + "' has no header row");
  }
  auto header = split_record(line);
  for (auto& h : header) h = trim(h);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::SchemaError, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t xi = column(x_col), yi = column(y_col);
  std::vector<std::size_t> fi;
  for (const auto& f : flag_cols) fi.push_back(column(f));

  CsvData data;
  data.flags.resize(flag_cols.size());
  std::vector<char> row_flags(flag_cols.size());
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++data.rows;
    auto fields = split_record(line);
    Point p;
    bool ok = fields.size() == header.size() && parse_double(fields[xi], p.x) && parse_double(fields[yi], p.y);
    for (std::size_t c = 0; ok && c < fi.size(); ++c) ok = parse_flag(fields[fi[c]], row_flags[c]);
    if (!ok) {
      ++data.bad_rows;
      continue;
    }
    data.points.push_back(p);
    for (std::size_t c = 0; c < fi.size(); ++c) data.flags[c].push_back(row_flags[c]);
  }
  if (data.rows == 0) throw Error(ErrorCode::SchemaError, "'" + path + "' has no data rows");
  if (static_cast<double>(data.bad_rows) > 0.01 * static_cast<double>(data.rows)) {
    throw Error(ErrorCode::TooManyBadRows, std::to_string(data.bad_rows) + " of " +
                                               std::to_string(data.rows) + " rows failed to parse");
  }
  if (rotate) data.rotation = rotate_for_general_position(data.points, rotation_seed);
  return data;
}

GeneratorSpec parse_generator(const std::string& spec) {
  GeneratorSpec g;
  std::string name = spec, args;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  if (name == "uniform") g.kind = GeneratorKind::Uniform;
  else if (name == "annulus") g.kind = GeneratorKind::Annulus;
  else if (name == "clusters" || name == "gaussian_clusters") g.kind = GeneratorKind::GaussianClusters;
  else throw Error(ErrorCode::InvalidArgument, "unknown generator '" + name + "'");
  std::stringstream ss(args);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || g.kind != GeneratorKind::GaussianClusters) {
      throw Error(ErrorCode::InvalidArgument, "bad generator argument '" + kv + "'");
    }
    std::string key = trim(kv.substr(0, eq));
    double value;
    if (!parse_double(kv.substr(eq + 1), value)) {
      throw Error(ErrorCode::InvalidArgument, "bad generator value in '" + kv + "'");
    }
    if (key == "c" && value >= 1) g.clusters = static_cast<int>(value);
    else if (key == "sigma" && value > 0) g.sigma = value;
    else throw Error(ErrorCode::InvalidArgument, "bad generator argument '" + kv + "'");
  }
  return g;
}

std::string to_string(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::Uniform: return "uniform";
    case GeneratorKind::Annulus: return "annulus";
    case GeneratorKind::GaussianClusters:
      return "clusters:c=" + std::to_string(spec.clusters) + ",sigma=" + fmt(spec.sigma);
  }
  return "unknown";
}

std::vector<Point> generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  switch (spec.kind) {
    case GeneratorKind::Uniform:
      for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(), rng.uniform()});
      break;
    case GeneratorKind::Annulus: {
      const double pi = std::acos(-1.0);
      const double r0 = 0.3, r1 = 0.5;
      for (std::size_t i = 0; i < n; ++i) {
        double r = std::sqrt(r0 * r0 + (r1 * r1 - r0 * r0) * rng.uniform());
        double a = rng.uniform(0.0, 2.0 * pi);
        out.push_back({0.5 + r * std::cos(a), 0.5 + r * std::sin(a)});
      }
      break;
    }
    case GeneratorKind::GaussianClusters: {
      std::vector<Point> centers;
      for (int c = 0; c < spec.clusters; ++c) centers.push_back({rng.uniform(), rng.uniform()});
      for (std::size_t i = 0; i < n; ++i) {
        const Point& c = centers[rng.below(centers.size())];
        double dx = rng.normal(), dy = rng.normal();
        out.push_back({c.x + spec.sigma * dx, c.y + spec.sigma * dy});
      }
      break;
    }
  }
  return out;
}

std::vector<WeightedLine> random_lines(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<WeightedLine> out;
  while (out.size() < n) {
    Point a{rng.uniform(), rng.uniform()}, b{rng.uniform(), rng.uniform()};
    if (std::abs(a.x - b.x) < 1e-6) continue;
    out.push_back({line_through(a, b), 1.0});
  }
  return out;
}

nlohmann::json to_json(const CuttingMetrics& m) {
  return {{"n_lines", m.n_lines},
          {"r", m.r},
          {"kind", m.kind},
          {"leaves", m.leaves},
          {"leaves_per_r2", m.leaves_per_r2},
          {"max_crossing_weight", m.max_crossing_weight}};
}

nlohmann::json to_json(const Partition& part, const Box& viewport, bool timings) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : part.cells) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : c.region.outline(viewport)) verts.push_back({v.x, v.y});
    cells.push_back({{"vertices", std::move(verts)}, {"points", c.points}});
  }
  nlohmann::json stats = {{"cells", part.cells.size()},
                          {"max_cell_size", part.max_cell_size()},
                          {"levels", part.stats.levels},
                          {"max_test_crossing", part.stats.max_test_crossing}};
  if (timings) stats["seconds"] = part.stats.seconds;
  return {{"method", part.method}, {"t", part.t}, {"stats", std::move(stats)}, {"cells", std::move(cells)}};
}

nlohmann::json to_json(const WeightedSample& s, bool timings) {
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < s.points.size(); ++i) pts.push_back({s.points[i].x, s.points[i].y, s.weights[i]});
  nlohmann::json j = {{"method", s.method},
                      {"k_requested", s.k_requested},
                      {"k_effective", s.k_effective},
                      {"points", std::move(pts)}};
  if (timings) j["seconds"] = s.seconds;
  return j;
}

nlohmann::json to_json(const ScanResult& r, bool timings) {
  nlohmann::json j = {{"line", {{"a", r.line.a}, {"b", r.line.b}}},
                      {"side", r.above ? "above" : "below"},
                      {"phi_sample", r.phi_sample},
                      {"phi", r.phi},
                      {"phi_planted", r.phi_planted},
                      {"discrepancy_error", r.discrepancy_error}};
  if (timings) j["seconds"] = r.seconds;
  return j;
}

void render_svg(const SvgLayer& layer, const Box& viewport, const std::string& path) {
  const double size = 800.0;
  double w = viewport.x_hi - viewport.x_lo, h = viewport.y_hi - viewport.y_lo;
  if (!(w > 0 && h > 0)) throw Error(ErrorCode::InvalidArgument, "viewport has no area");
  double scale = size / std::max(w, h);
  auto sx = [&](double x) { return fmt((x - viewport.x_lo) * scale); };
  auto sy = [&](double y) { return fmt((viewport.y_hi - y) * scale); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w * scale) << "\" height=\""
      << fmt(h * scale) << "\" viewBox=\"0 0 " << fmt(w * scale) << " " << fmt(h * scale) << "\">\n";
  out << "<g fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1\">\n";
  for (const auto& poly : layer.polygons) {
    out << "<polygon points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) out << (i ? " " : "") << sx(poly[i].x) << "," << sy(poly[i].y);
    out << "\"/>\n";
  }
  out << "</g>\n";
  if (!layer.lines.empty()) {
    auto clip = ConvexRegion::box(viewport);
    out << "<g stroke=\"#c0392b\" stroke-width=\"0.6\" stroke-opacity=\"0.7\">\n";
    for (const auto& l : layer.lines) {
      auto seg = clip.clip_line(l);
      if (!seg) continue;
      Point a = seg->lo_point(), b = seg->hi_point();
      out << "<line x1=\"" << sx(a.x) << "\" y1=\"" << sy(a.y) << "\" x2=\"" << sx(b.x) << "\" y2=\""
          << sy(b.y) << "\"/>\n";
    }
    out << "</g>\n";
  }
  if (!layer.points.empty()) {
    out << "<g fill=\"#333333\">\n";
    for (const auto& p : layer.points) out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"1\"/>\n";
    out << "</g>\n";
  }
  out << "</svg>\n";

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  file << out.str();
  if (!file) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

SvgLayer svg_layer(const Cutting& c, const Box& viewport, bool with_lines) {
  SvgLayer layer;
  layer.polygons = c.tree.leaf_outlines(viewport);
  if (with_lines) {
    for (const auto& wl : c.tree.lines()) layer.lines.push_back(wl.line);
  }
  return layer;
}

SvgLayer svg_layer(const Partition& part, std::span<const Point> pts, const Box& viewport) {
  SvgLayer layer;
  for (const auto& cell : part.cells) layer.polygons.push_back(cell.region.outline(viewport));
  if (pts.size() <= 20000) layer.points.assign(pts.begin(), pts.end());
  return layer;
}

}  // namespace esample
