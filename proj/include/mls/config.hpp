#pragma once

// Declarative run configuration: an INI file with [run], [metric:NAME],
// [matrices:NAME], [census], [curve], [jsr], [jtl] and [bound] sections.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mls/census.hpp"
#include "mls/metric.hpp"
#include "mls/spectral.hpp"

namespace mls {

/// Raw key/value view of one section, with source lines for diagnostics.
struct ConfigSection {
  std::string name;
  int line = 0;
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
};

struct MatrixSettings {
  std::string name;
  int dim = 2;
  std::vector<MatrixX<double>> matrices;  // explicit m0, m1, ... (row-major)
  // Random sets: count > 0 draws `count` matrices from the run seed.
  std::size_t random_count = 0;
  double lo = -1;
  double hi = 1;
};

struct CensusSettings {
  std::string metric;
  std::optional<std::string> metric_star;
  double radius = 8;
  std::size_t max_rows = 20'000'000;
  int bracket_depth = 16;
  std::string filter = "all";  // all | commutator | homology | subgroup | tolerance | equality
  std::vector<int> homology;
  std::vector<std::string> subgroup;
  double tol_c = 1;
  double tol_p = 0.5;
  double rel_tol = 1e-9;
  std::string counts = "elements";  // elements | classes
  std::size_t window = 4;
  std::string estimator;  // annulus | linear | corrected; empty picks per count kind
};

struct CurveSettings {
  std::size_t grid_points = 21;
  std::optional<double> grid_max;      // default v_d*
  std::optional<double> v_d_star;      // default measured on the d* ball
  std::optional<double> star_radius;   // radius of that ball; default the census radius
  std::size_t window = 6;
};

struct JsrSettings {
  std::string matrices;
  int depth = 8;
  std::uint64_t budget = 50'000'000;
  std::uint64_t samples = 200'000;
  std::optional<double> c_m;
  std::optional<int> d_m;
};

struct JtlSettings {
  std::string metric;
  std::vector<std::string> semigroup;
  int depth = 6;
  std::uint64_t budget = 5'000'000;
};

struct BoundSettings {
  std::string formula;
  std::map<std::string, double> params;
};

struct RunConfig {
  int rank = 2;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<std::filesystem::path> output_dir;
  std::vector<ConfigSection> metric_sections;  // resolved lazily by name
  std::map<std::string, MatrixSettings> matrices;
  std::optional<CensusSettings> census;
  CurveSettings curve;
  std::optional<JsrSettings> jsr;
  std::optional<JtlSettings> jtl;
  std::optional<BoundSettings> bound;
  std::string source = "<string>";

  /// Builds the named metric; cycles and unknown names are config errors.
  MetricHandle metric(const std::string& name) const;
  MatrixSet<double> matrix_set(const std::string& name) const;
};

/// Parses INI text. Errors throw Error(Config) with "source:line: field: message".
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mls
