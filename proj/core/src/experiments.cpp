#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fofx/errors.hpp"
#include "fofx/experiments.hpp"
#include "fofx/field.hpp"
#include "fofx/metrics.hpp"
#include "fofx/render.hpp"

namespace fofx {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void usage_check(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SweepRow row_from(const std::string& name, double parameter, const RoundTripResult& r) {
  return {name, parameter, r.chamfer, r.p2s, r.mesh.vertices.size(), r.mesh.triangles.size()};
}

}  // namespace

void RoundTripConfig::validate() const {
  usage_check(resolution >= 1, "resolution must be at least 1");
  usage_check(terms >= 1, "terms must be at least 1");
  usage_check(depth >= 2, "depth must be at least 2");
  usage_check(iso > 0.0 && iso < 1.0, "iso must lie strictly between 0 and 1");
  usage_check(samples >= 1, "sample count must be at least 1");
}

RoundTripResult score_fof(const FofGrid& fof, const TriangleMesh& reference, const RoundTripConfig& config) {
  RoundTripResult out;
  ExtractOptions options;
  options.depth = config.depth;
  options.iso = config.iso;
  options.repair = config.repair;
  const auto start = Clock::now();
  out.mesh = fof_to_mesh(fof, options, &out.extract);
  out.extract_seconds = seconds_since(start);
  if (out.mesh.triangles.empty() || surface_area(out.mesh) <= 0.0) {
    out.chamfer = std::numeric_limits<double>::infinity();
    out.p2s = std::numeric_limits<double>::infinity();
    return out;
  }
  out.chamfer = chamfer(out.mesh, reference, config.samples, config.seed);
  out.p2s = p2s(out.mesh, reference, config.samples, config.seed);
  return out;
}

RoundTripResult round_trip(const TriangleMesh& mesh, const RoundTripConfig& config) {
  config.validate();
  const auto start = Clock::now();
  FofConversion conv = mesh_to_fof(mesh, config.resolution, config.resolution, config.terms, config.policy);
  const double convert_seconds = seconds_since(start);
  RoundTripResult out = score_fof(conv.fof, mesh, config);
  out.match = conv.report;
  out.convert_seconds = convert_seconds;
  return out;
}

std::vector<SweepRow> n_sweep(const TriangleMesh& mesh, const std::vector<int>& terms,
                              const RoundTripConfig& base) {
  usage_check(!terms.empty(), "term list is empty");
  std::vector<SweepRow> rows;
  for (int n : terms) {
    RoundTripConfig c = base;
    c.terms = n;
    rows.push_back(row_from("", n, round_trip(mesh, c)));
  }
  return rows;
}

std::vector<SweepRow> res_sweep(const TriangleMesh& mesh, const std::vector<int>& resolutions,
                                const RoundTripConfig& base) {
  usage_check(!resolutions.empty(), "resolution list is empty");
  const int top = *std::max_element(resolutions.begin(), resolutions.end());
  for (int r : resolutions) {
    usage_check(r >= 2 && top % r == 0,
                "every resolution must be >= 2 and divide the largest (" + std::to_string(top) + ")");
  }
  RoundTripConfig c = base;
  c.resolution = top;
  c.validate();
  const FofGrid fine = mesh_to_fof(mesh, top, top, c.terms, c.policy).fof;
  std::vector<SweepRow> rows;
  for (int r : resolutions) {
    const FofGrid grid = r == top ? fine : downsample(fine, top / r);
    RoundTripConfig rc = c;
    rc.resolution = r;
    rc.depth = r;
    rows.push_back(row_from("", r, score_fof(grid, mesh, rc)));
  }
  return rows;
}

std::vector<SweepRow> noise_sweep(const TriangleMesh& mesh, const std::vector<double>& levels_percent,
                                  const RoundTripConfig& base, std::uint64_t noise_seed, int trials) {
  usage_check(!levels_percent.empty(), "noise level list is empty");
  usage_check(trials >= 1, "noise trials must be at least 1");
  for (double level : levels_percent) usage_check(level >= 0.0, "noise levels must be non-negative");
  base.validate();
  const FofGrid clean = mesh_to_fof(mesh, base.resolution, base.resolution, base.terms, base.policy).fof;
  std::vector<SweepRow> rows;
  for (double level : levels_percent) {
    std::vector<SweepRow> runs;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t seed = derived_seed(noise_seed + static_cast<std::uint64_t>(t));
      const FofGrid noisy = level == 0.0 ? clean : add_relative_noise(clean, level / 100.0, seed);
      runs.push_back(row_from("", level, score_fof(noisy, mesh, base)));
    }
    std::vector<double> ch;
    std::vector<double> ps;
    for (const auto& r : runs) {
      ch.push_back(r.chamfer);
      ps.push_back(r.p2s);
    }
    SweepRow row = runs.front();
    row.chamfer = median(ch);
    row.p2s = median(ps);
    // Report the geometry of the trial closest to the median Chamfer.
    const auto pick = std::min_element(runs.begin(), runs.end(), [&](const SweepRow& a, const SweepRow& b) {
      return std::abs(a.chamfer - row.chamfer) < std::abs(b.chamfer - row.chamfer);
    });
    row.vertices = pick->vertices;
    row.triangles = pick->triangles;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> with_mean_rows(const std::vector<SweepRow>& rows) {
  std::vector<std::string> names;
  for (const auto& r : rows) {
    if (std::find(names.begin(), names.end(), r.mesh) == names.end()) names.push_back(r.mesh);
  }
  if (names.size() < 2) return rows;
  std::vector<SweepRow> out = rows;
  std::vector<double> order;
  std::map<double, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) {
    if (!groups.count(r.parameter)) order.push_back(r.parameter);
    groups[r.parameter].push_back(&r);
  }
  for (double p : order) {
    const auto& g = groups[p];
    SweepRow m{"mean", p, 0.0, 0.0, 0, 0};
    for (const SweepRow* r : g) {
      m.chamfer += r->chamfer;
      m.p2s += r->p2s;
      m.vertices += r->vertices;
      m.triangles += r->triangles;
    }
    const double n = static_cast<double>(g.size());
    m.chamfer /= n;
    m.p2s /= n;
    m.vertices = static_cast<std::size_t>(std::llround(static_cast<double>(m.vertices) / n));
    m.triangles = static_cast<std::size_t>(std::llround(static_cast<double>(m.triangles) / n));
    out.push_back(m);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void Table::write_csv(std::ostream& out) const {
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        out << cells[i];
        continue;
      }
      out << '"';
      for (char c : cells[i]) out << (c == '"' ? "\"\"" : std::string(1, c));
      out << '"';
    }
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
}

void Table::write_json(std::ostream& out) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < columns.size() && i < r.size(); ++i) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(r[i].data(), r[i].data() + r[i].size(), v);
      const bool numeric = !r[i].empty() && ec == std::errc() && ptr == r[i].data() + r[i].size() &&
                           std::isfinite(v);
      if (numeric) {
        obj[columns[i]] = v;
      } else {
        obj[columns[i]] = r[i];
      }
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

Table sweep_table(const std::vector<SweepRow>& rows, const std::string& parameter_name, double scale) {
  Table t;
  t.columns = {"mesh", parameter_name, "chamfer", "p2s", "vertices", "triangles"};
  for (const auto& r : rows) {
    t.rows.push_back({r.mesh, format_number(r.parameter), format_number(r.chamfer * scale),
                      format_number(r.p2s * scale), std::to_string(r.vertices), std::to_string(r.triangles)});
  }
  return t;
}

double centimetre_scale(const TriangleMesh& reference, double meters) {
  if (!(meters > 0.0)) throw UsageError("height must be positive");
  const double extent = bounding_box(reference).extent().y();
  if (!(extent > 0.0)) throw DegenerateInput("reference mesh has zero height");
  return meters * 100.0 / extent;
}

double parse_height(const std::string& text) {
  std::string s = text;
  double unit = 1.0;
  if (s.size() > 2 && s.ends_with("cm")) {
    unit = 0.01;
    s.resize(s.size() - 2);
  } else if (s.size() > 1 && s.ends_with("m")) {
    s.resize(s.size() - 1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw UsageError("invalid height '" + text + "' (expected e.g. 1.8m or 180cm)");
  }
  return v * unit;
}

CompareResult compare_meshes(const TriangleMesh& a, const TriangleMesh& b, std::size_t samples,
                             std::uint64_t seed, int render_size) {
  CompareResult r;
  r.chamfer = chamfer(a, b, samples, seed);
  r.p2s = p2s(a, b, samples, seed);
  const auto ma = render_normal_maps(a, render_size, render_size);
  const auto mb = render_normal_maps(b, render_size, render_size);
  r.normal_mse = normal_difference(ma, mb);
  const ImageQuality q = psnr_ssim(ma, mb);
  r.psnr = q.psnr;
  r.ssim = q.ssim;
  return r;
}

void write_compare_json(std::ostream& out, const CompareResult& r) {
  nlohmann::ordered_json j;
  const auto put = [&](const char* key, double v) {
    if (std::isfinite(v)) {
      j[key] = v;
    } else {
      j[key] = format_number(v);
    }
  };
  put("chamfer", r.chamfer);
  put("p2s", r.p2s);
  put("normal_mse", r.normal_mse);
  put("psnr", r.psnr);
  put("ssim", r.ssim);
  out << j.dump(2) << '\n';
}

void ExperimentConfig::validate() const {
  usage_check(!inputs.empty(), "at least one input is required");
  trial.validate();
  switch (kind) {
    case ExperimentKind::kNSweep:
      usage_check(!terms_list.empty(), "n-sweep needs a term list");
      for (int n : terms_list) usage_check(n >= 1, "term counts must be at least 1");
      break;
    case ExperimentKind::kResSweep:
      usage_check(!resolution_list.empty(), "res-sweep needs a resolution list");
      break;
    case ExperimentKind::kNoiseSweep:
      usage_check(!noise_levels.empty(), "noise-sweep needs a level list");
      usage_check(noise_trials >= 1, "noise trials must be at least 1");
      break;
    case ExperimentKind::kCompare:
      usage_check(inputs.size() == 2, "compare needs exactly two meshes");
      usage_check(render_size >= 11, "render size must be at least 11");
      break;
    case ExperimentKind::kConvert:
      usage_check(inputs.size() == 1, "convert takes one mesh");
      usage_check(output.has_value(), "convert needs an output path");
      break;
    case ExperimentKind::kRoundTrip:
      break;
  }
  usage_check(height_meters >= 0.0, "height must be non-negative");
}

Table run_experiment(const ExperimentConfig& config, const std::vector<TriangleMesh>& meshes) {
  config.validate();
  usage_check(meshes.size() == config.inputs.size(), "mesh count does not match the inputs");
  std::vector<SweepRow> rows;
  std::string parameter;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    std::vector<SweepRow> part;
    switch (config.kind) {
      case ExperimentKind::kNSweep:
        parameter = "terms";
        part = n_sweep(meshes[i], config.terms_list, config.trial);
        break;
      case ExperimentKind::kResSweep:
        parameter = "resolution";
        part = res_sweep(meshes[i], config.resolution_list, config.trial);
        break;
      case ExperimentKind::kNoiseSweep:
        parameter = "noise_percent";
        part = noise_sweep(meshes[i], config.noise_levels, config.trial, config.noise_seed, config.noise_trials);
        break;
      case ExperimentKind::kRoundTrip:
        parameter = "terms";
        part = {row_from("", config.trial.terms, round_trip(meshes[i], config.trial))};
        break;
      default:
        throw UsageError("experiment kind does not produce a sweep table");
    }
    const double scale = config.height_meters > 0.0 ? centimetre_scale(meshes[i], config.height_meters) : 1.0;
    for (auto& r : part) {
      r.mesh = config.inputs[i].stem().string();
      r.chamfer *= scale;
      r.p2s *= scale;
      rows.push_back(r);
    }
  }
  return sweep_table(with_mean_rows(rows), parameter);
}

}  // namespace fofx
