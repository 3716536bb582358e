#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fofx/fof2mesh.hpp"
#include "fofx/geometry.hpp"
#include "fofx/mesh2fof.hpp"

namespace fofx {

/// Settings shared by every mesh -> FOF -> mesh trial.
struct RoundTripConfig {
  int resolution = 256;  // H = W
  int terms = 128;
  int depth = 256;
  double iso = 0.5;
  RepairMode repair = RepairMode::kConstraint;
  MatchPolicy policy = MatchPolicy::kAutomaton;
  std::size_t samples = 100000;  // per mesh side
  std::uint64_t seed = 0;        // metric sampling seed

  /// Throws UsageError naming the offending field.
  void validate() const;
};

struct RoundTripResult {
  TriangleMesh mesh;
  double chamfer = 0.0;
  double p2s = 0.0;
  MatchReport match;
  ExtractReport extract;
  double convert_seconds = 0.0;
  double extract_seconds = 0.0;
};

/// Extracts a mesh from `fof` and scores it against `reference`. An empty
/// extraction scores +inf.
RoundTripResult score_fof(const FofGrid& fof, const TriangleMesh& reference, const RoundTripConfig& config);
RoundTripResult round_trip(const TriangleMesh& mesh, const RoundTripConfig& config);

struct SweepRow {
  std::string mesh;
  double parameter = 0.0;
  double chamfer = 0.0;
  double p2s = 0.0;
  std::size_t vertices = 0;
  std::size_t triangles = 0;
};

/// One round trip per term count at the base resolution and depth.
std::vector<SweepRow> n_sweep(const TriangleMesh& mesh, const std::vector<int>& terms,
                              const RoundTripConfig& base);

/// Converts once at the largest resolution and box-downsamples the same
/// coefficient grid to every other resolution r (depth = r). Every entry
/// must divide the largest one.
std::vector<SweepRow> res_sweep(const TriangleMesh& mesh, const std::vector<int>& resolutions,
                                const RoundTripConfig& base);

/// Relative Gaussian coefficient noise at each level (in percent); each row is
/// the median over `trials` noise seeds derived from `noise_seed`.
std::vector<SweepRow> noise_sweep(const TriangleMesh& mesh, const std::vector<double>& levels_percent,
                                  const RoundTripConfig& base, std::uint64_t noise_seed, int trials = 3);

/// Appends a "mean" row per parameter value when more than one mesh is present.
std::vector<SweepRow> with_mean_rows(const std::vector<SweepRow>& rows);

/// Column-oriented result table with deterministic text rendering.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
  /// Array of objects; numeric-looking cells are emitted as numbers.
  void write_json(std::ostream& out) const;
};

/// Shortest round-trip decimal text; "inf", "-inf" or "nan" otherwise.
std::string format_number(double v);

/// Metric values are multiplied by `scale` (1 for normalized units).
Table sweep_table(const std::vector<SweepRow>& rows, const std::string& parameter_name, double scale = 1.0);

/// Centimetres per normalized unit when the reference is `meters` tall.
double centimetre_scale(const TriangleMesh& reference, double meters);
/// Parses "1.8m" / "180cm" / "1.8" (meters) into meters. Throws UsageError.
double parse_height(const std::string& text);

struct CompareResult {
  double chamfer = 0.0;
  double p2s = 0.0;
  double normal_mse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

/// Full metric suite; `a` plays the predicted role for p2s.
CompareResult compare_meshes(const TriangleMesh& a, const TriangleMesh& b, std::size_t samples,
                             std::uint64_t seed, int render_size = 256);
/// Object with keys chamfer, p2s, normal_mse, psnr, ssim (psnr "inf" when exact).
void write_compare_json(std::ostream& out, const CompareResult& result);

enum class ExperimentKind { kNSweep, kResSweep, kNoiseSweep, kRoundTrip, kConvert, kCompare };
enum class OutputFormat { kCsv, kJson };

/// Fully described experiment as assembled by the command-line front end.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kRoundTrip;
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::kCsv;
  RoundTripConfig trial;
  std::vector<int> terms_list;
  std::vector<int> resolution_list;
  std::vector<double> noise_levels;
  std::uint64_t noise_seed = 0;
  int noise_trials = 3;
  double height_meters = 0.0;  // > 0 converts metrics to centimetres
  int render_size = 256;

  /// Checks the fields required by `kind`. Throws UsageError.
  void validate() const;
};

/// Runs a sweep or round-trip experiment over `meshes` (parallel to
/// config.inputs) and returns its table.
Table run_experiment(const ExperimentConfig& config, const std::vector<TriangleMesh>& meshes);

}  // namespace fofx
