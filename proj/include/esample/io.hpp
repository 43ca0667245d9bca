#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "esample/cutting.hpp"
#include "esample/partition.hpp"
#include "esample/sampling.hpp"

namespace esample {

struct CsvData {
  std::vector<Point> points;
  /// flags[c][i] is column flag_cols[c] of point i.
  std::vector<std::vector<char>> flags;
  std::size_t rows = 0;
  std::size_t bad_rows = 0;
  /// Angle the points were rotated by (0 when rotation was off).
  double rotation = 0.0;
};

/// Reads a CSV with a header row. Rows whose coordinates or flags do not
/// parse are skipped and counted. Throws IoError when the file cannot be
/// read, SchemaError for an empty file or missing column, TooManyBadRows
/// when more than 1% of the rows are bad.
CsvData ingest_csv(const std::string& path, const std::string& x_col, const std::string& y_col,
                   const std::vector<std::string>& flag_cols = {}, bool rotate = true,
                   std::uint64_t rotation_seed = 0);

enum class GeneratorKind { Uniform, GaussianClusters, Annulus };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Uniform;
  int clusters = 20;
  double sigma = 0.02;
};

/// "uniform", "annulus", "clusters" or "gaussian_clusters", the latter two
/// optionally followed by ":c=<count>,sigma=<spread>".
GeneratorSpec parse_generator(const std::string& spec);
std::string to_string(const GeneratorSpec& spec);

/// Deterministic per seed. Uniform and annulus points lie in the unit
/// square; clusters have centers there and Gaussian spread sigma.
std::vector<Point> generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed);

/// Lines through pairs of uniform points in the unit square.
std::vector<WeightedLine> random_lines(std::size_t n, std::uint64_t seed);

nlohmann::json to_json(const CuttingMetrics& m);
/// Cells as vertex lists (unbounded cells clipped to `viewport`) plus point
/// indices, and the stats block.
nlohmann::json to_json(const Partition& part, const Box& viewport, bool timings);
nlohmann::json to_json(const WeightedSample& s, bool timings);
nlohmann::json to_json(const ScanResult& r, bool timings);

struct SvgLayer {
  std::vector<std::vector<Point>> polygons;
  std::vector<Line> lines;
  std::vector<Point> points;
};

/// Writes the layer as a deterministic SVG document framed on `viewport`.
/// Throws IoError when the file cannot be written.
void render_svg(const SvgLayer& layer, const Box& viewport, const std::string& path);

SvgLayer svg_layer(const Cutting& c, const Box& viewport, bool with_lines);
SvgLayer svg_layer(const Partition& part, std::span<const Point> pts, const Box& viewport);

}  // namespace esample
