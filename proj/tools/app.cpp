#include "app.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include "docgen.hpp"
#include "fofx/errors.hpp"
#include "fofx/experiments.hpp"
#include "fofx/io.hpp"
#include "fofx/shapes.hpp"

namespace fofx::cli {

namespace fs = std::filesystem;

struct Options {
  std::function<int()> action;

  // convert
  std::string mesh_path;
  std::string out_path;
  int height = 256;
  int width = 256;
  int terms = 128;
  std::string matcher = "automaton";
  double normalize_margin = -1.0;

  // extract
  std::string fof_path;
  int depth = 256;
  double iso = 0.5;
  std::string repair = "constraint";
  int smooth_iterations = 3;

  // experiments
  std::vector<std::string> meshes;
  int resolution = 256;
  std::vector<int> terms_list = {8, 16, 32, 64, 128, 256};
  std::vector<int> resolutions = {16, 32, 64, 128, 256, 512};
  std::vector<double> levels = {0, 5, 10, 15, 20, 25, 30};
  std::uint64_t noise_seed = 0;
  int trials = 3;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string scale;
  int render_size = 256;

  // gen
  std::string shape;
  double radius = 0.6;
  int subdivisions = 4;
  double major_radius = 0.6;
  double minor_radius = 0.25;
  int segments = 64;
  int rings = 16;
  double half_length = 0.4;
  double half_extent = 0.5;
  double percent = 10.0;

  // docs
  std::string docs_mode;
  std::string docs_dir = "docs";
  std::vector<std::string> docs_extra;
};

namespace {

void log(const std::string& msg) { std::cerr << "fofx: " << msg << '\n'; }

RepairMode parse_repair(const std::string& s) {
  if (s == "none") return RepairMode::kNone;
  if (s == "smooth") return RepairMode::kSmooth;
  return RepairMode::kConstraint;
}

TriangleMesh load_mesh(const std::string& path, double margin) {
  TriangleMesh mesh = read_mesh(path);
  if (mesh.triangles.empty()) throw EmptyInput(path + ": mesh has no faces");
  if (margin >= 0.0) return normalize_mesh(mesh, margin).mesh;
  const BoundingBox box = bounding_box(mesh);
  if (box.min.minCoeff() < -1.0 || box.max.maxCoeff() > 1.0) {
    log(path + ": mesh extends outside [-1,1]^3; parts beyond the grid are clipped (see --normalize)");
  }
  return mesh;
}

// Writes through a temporary buffer so nothing is emitted on failure.
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  std::ostringstream buf;
  write(buf);
  if (path.empty() || path == "-") {
    std::cout << buf.str();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out << buf.str();
  if (!out) throw IoError("write failed: " + path);
}

void add_normalize(CLI::App* sub, Options& o) {
  sub->add_option("--normalize", o.normalize_margin,
                  "Center and rescale input meshes into [-1+m, 1-m]^3 with margin m (off when negative)")
      ->capture_default_str();
}

void add_trial_options(CLI::App* sub, Options& o, bool with_resolution, bool with_terms) {
  if (with_resolution) {
    sub->add_option("--resolution", o.resolution, "FOF grid size H = W")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    // The resolution sweep extracts each grid at depth = resolution.
    sub->add_option("--depth", o.depth, "Extraction z-samples D")->check(CLI::Range(2, 1 << 16))->capture_default_str();
  }
  if (with_terms) {
    sub->add_option("-n,--terms", o.terms, "Cosine terms N per pixel")->check(CLI::PositiveNumber)->capture_default_str();
  }
  sub->add_option("--iso", o.iso, "Iso-level, strictly inside (0, 1)")
      ->check(CLI::Validator(
          [](std::string& s) {
            const double v = std::stod(s);
            return v > 0.0 && v < 1.0 ? std::string() : std::string("iso must lie strictly inside (0, 1)");
          },
          "(0,1)"))
      ->capture_default_str();
  sub->add_option("--repair", o.repair, "Unreliable-vertex repair")
      ->check(CLI::IsMember({"none", "smooth", "constraint"}))
      ->capture_default_str();
  sub->add_option("--samples", o.samples, "Surface samples per mesh for Chamfer/P2S")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "Surface sampling seed")->capture_default_str();
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("-o,--output", o.out_path, "Output file (standard output when omitted)");
  sub->add_option("--scale", o.scale,
                  "Report metrics in cm for a reference height, e.g. 1.8m (normalized units when omitted)");
  add_normalize(sub, o);
}

ExperimentConfig experiment_from(const Options& o, ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  for (const auto& m : o.meshes) c.inputs.emplace_back(m);
  if (!o.out_path.empty() && o.out_path != "-") c.output = o.out_path;
  c.format = o.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  c.trial.resolution = o.resolution;
  c.trial.terms = o.terms;
  c.trial.depth = o.depth;
  c.trial.iso = o.iso;
  c.trial.repair = parse_repair(o.repair);
  c.trial.samples = o.samples;
  c.trial.seed = o.seed;
  c.terms_list = o.terms_list;
  c.resolution_list = o.resolutions;
  c.noise_levels = o.levels;
  c.noise_seed = o.noise_seed;
  c.noise_trials = o.trials;
  c.height_meters = o.scale.empty() ? 0.0 : parse_height(o.scale);
  c.render_size = o.render_size;
  return c;
}

int run_table(const Options& o, ExperimentKind kind) {
  const ExperimentConfig config = experiment_from(o, kind);
  config.validate();
  std::vector<TriangleMesh> meshes;
  for (const auto& p : config.inputs) meshes.push_back(load_mesh(p.string(), o.normalize_margin));
  const Table table = run_experiment(config, meshes);
  emit(o.out_path, [&](std::ostream& out) {
    if (config.format == OutputFormat::kJson) {
      table.write_json(out);
    } else {
      table.write_csv(out);
    }
  });
  return kExitOk;
}

int run_convert(const Options& o) {
  const TriangleMesh mesh = load_mesh(o.mesh_path, o.normalize_margin);
  const MatchPolicy policy = o.matcher == "disabled" ? MatchPolicy::kDisabled : MatchPolicy::kAutomaton;
  const FofConversion conv = mesh_to_fof(mesh, o.height, o.width, o.terms, policy);
  write_fof(fs::path(o.out_path), conv.fof);
  const MatchReport& r = conv.report;
  std::cerr << "triangles " << r.raster.triangles << "\ntriangles_skipped " << r.raster.triangles_skipped
            << "\nevents " << r.raster.events << "\nevents_clamped " << r.raster.events_clamped
            << "\npixels " << r.pixels_total << "\npixels_modified " << r.pixels_modified << "\nevents_dropped "
            << r.events_dropped << '\n';
  return kExitOk;
}

int run_extract(const Options& o) {
  const FofGrid fof = read_fof(fs::path(o.fof_path));
  ExtractOptions options;
  options.depth = o.depth;
  options.iso = o.iso;
  options.repair = parse_repair(o.repair);
  options.smooth_iterations = o.smooth_iterations;
  ExtractReport report;
  const TriangleMesh mesh = fof_to_mesh(fof, options, &report);
  if (mesh.triangles.empty()) log("warning: no surface at iso " + format_number(o.iso) + "; writing an empty mesh");
  write_mesh(fs::path(o.out_path), mesh);
  std::cerr << "vertices " << report.vertices << "\nreliable " << report.reliable << "\nrefined "
            << report.refine.refined << "\nno_sign_change " << report.refine.no_sign_change << "\nisolated "
            << report.laplacian.isolated << '\n';
  return kExitOk;
}

int run_compare(const Options& o) {
  ExperimentConfig config = experiment_from(o, ExperimentKind::kCompare);
  config.validate();
  const TriangleMesh a = load_mesh(o.meshes[0], o.normalize_margin);
  const TriangleMesh b = load_mesh(o.meshes[1], o.normalize_margin);
  CompareResult r = compare_meshes(a, b, o.samples, o.seed, o.render_size);
  if (config.height_meters > 0.0) {
    const double s = centimetre_scale(b, config.height_meters);
    r.chamfer *= s;
    r.p2s *= s;
  }
  emit(o.out_path, [&](std::ostream& out) { write_compare_json(out, r); });
  return kExitOk;
}

int run_gen(const Options& o) {
  std::string shape = o.shape;
  double percent = o.percent;
  static const std::regex kOpen(R"(open-sphere\(([0-9.]+)%?\))");
  std::smatch m;
  if (std::regex_match(shape, m, kOpen)) {
    percent = std::stod(m[1].str());
    shape = "open-sphere";
  }
  TriangleMesh mesh;
  if (shape == "sphere") {
    mesh = icosphere(o.radius, o.subdivisions);
  } else if (shape == "torus") {
    mesh = torus(o.major_radius, o.minor_radius, 2 * o.segments, o.segments);
  } else if (shape == "cube") {
    mesh = cube(o.half_extent, o.rings);
  } else if (shape == "capsule") {
    mesh = capsule(o.radius, o.half_length, o.segments, o.rings);
  } else if (shape == "cylinder") {
    mesh = cylinder(o.radius, o.half_length, o.segments, o.rings);
  } else if (shape == "open-sphere") {
    if (!(percent >= 0.0 && percent < 100.0)) throw UsageError("open-sphere percentage must be in [0, 100)");
    mesh = open_sphere(o.radius, o.subdivisions, percent / 100.0, o.seed);
  } else {
    throw UsageError("unknown shape '" + o.shape + "'");
  }
  write_mesh(fs::path(o.out_path), mesh);
  std::cerr << "vertices " << mesh.vertices.size() << "\ntriangles " << mesh.triangles.size() << '\n';
  return kExitOk;
}

}  // namespace

App::App() : options_(std::make_unique<Options>()), app_(std::make_unique<CLI::App>()) {
  Options& o = *options_;
  CLI::App& app = *app_;
  app.name("fofx");
  app.description("Fourier occupancy field conversion, extraction and evaluation");
  app.require_subcommand(1);
  app.set_version_flag("--version", "fofx 1.0.0");

  auto* convert = app.add_subcommand("convert", "Convert a mesh (.obj/.ply) into a FOF file");
  convert->add_option("mesh", o.mesh_path, "Input mesh")->required()->check(CLI::ExistingFile);
  convert->add_option("-o,--output", o.out_path, "Output .fof file")->required();
  convert->add_option("-H,--height", o.height, "Grid rows H")->check(CLI::PositiveNumber)->capture_default_str();
  convert->add_option("-W,--width", o.width, "Grid columns W")->check(CLI::PositiveNumber)->capture_default_str();
  convert->add_option("-n,--terms", o.terms, "Cosine terms N per pixel")->check(CLI::PositiveNumber)->capture_default_str();
  convert->add_option("--matcher", o.matcher, "Discontinuity matching (disabled pairs events blindly)")
      ->check(CLI::IsMember({"automaton", "disabled"}))
      ->capture_default_str();
  add_normalize(convert, o);
  convert->callback([&o] { o.action = [&o] { return run_convert(o); }; });

  auto* extract = app.add_subcommand("extract", "Extract a mesh from a FOF file");
  extract->add_option("fof", o.fof_path, "Input .fof file")->required()->check(CLI::ExistingFile);
  extract->add_option("-o,--output", o.out_path, "Output mesh (.obj/.ply)")->required();
  extract->add_option("--depth", o.depth, "z-samples D")->check(CLI::Range(2, 1 << 16))->capture_default_str();
  extract->add_option("--iso", o.iso, "Iso-level, strictly inside (0, 1)")
      ->check(CLI::Validator(
          [](std::string& s) {
            const double v = std::stod(s);
            return v > 0.0 && v < 1.0 ? std::string() : std::string("iso must lie strictly inside (0, 1)");
          },
          "(0,1)"))
      ->capture_default_str();
  extract->add_option("--repair", o.repair, "Unreliable-vertex repair")
      ->check(CLI::IsMember({"none", "smooth", "constraint"}))
      ->capture_default_str();
  extract->add_option("--smooth-iterations", o.smooth_iterations, "Iterations for --repair smooth")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  extract->callback([&o] { o.action = [&o] { return run_extract(o); }; });

  auto* nsweep = app.add_subcommand("nsweep", "Round-trip error for a list of term counts");
  nsweep->add_option("meshes", o.meshes, "Input meshes")->required()->check(CLI::ExistingFile);
  nsweep->add_option("--terms-list", o.terms_list, "Term counts")->delimiter(',')->capture_default_str();
  add_trial_options(nsweep, o, true, false);
  nsweep->callback([&o] { o.action = [&o] { return run_table(o, ExperimentKind::kNSweep); }; });

  auto* ressweep = app.add_subcommand("ressweep", "Round-trip error for a list of grid resolutions");
  ressweep->add_option("meshes", o.meshes, "Input meshes")->required()->check(CLI::ExistingFile);
  ressweep->add_option("--resolutions", o.resolutions, "Grid sizes; each must divide the largest")
      ->delimiter(',')
      ->capture_default_str();
  add_trial_options(ressweep, o, false, true);
  ressweep->callback([&o] { o.action = [&o] { return run_table(o, ExperimentKind::kResSweep); }; });

  auto* noisesweep = app.add_subcommand("noisesweep", "Round-trip error under relative coefficient noise");
  noisesweep->add_option("meshes", o.meshes, "Input meshes")->required()->check(CLI::ExistingFile);
  noisesweep->add_option("--levels", o.levels, "Noise levels in percent")->delimiter(',')->capture_default_str();
  noisesweep->add_option("--noise-seed", o.noise_seed, "Base seed for the noise trials")->capture_default_str();
  noisesweep->add_option("--trials", o.trials, "Seeds per level (median reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_trial_options(noisesweep, o, true, true);
  noisesweep->callback([&o] { o.action = [&o] { return run_table(o, ExperimentKind::kNoiseSweep); }; });

  auto* roundtrip = app.add_subcommand("roundtrip", "Single mesh -> FOF -> mesh trial per input");
  roundtrip->add_option("meshes", o.meshes, "Input meshes")->required()->check(CLI::ExistingFile);
  add_trial_options(roundtrip, o, true, true);
  roundtrip->callback([&o] { o.action = [&o] { return run_table(o, ExperimentKind::kRoundTrip); }; });

  auto* compare = app.add_subcommand("compare", "Chamfer, P2S, normal MSE, PSNR and SSIM between two meshes");
  compare->add_option("meshes", o.meshes, "Predicted mesh, then reference mesh")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  compare->add_option("--samples", o.samples, "Surface samples per mesh")->check(CLI::PositiveNumber)->capture_default_str();
  compare->add_option("--seed", o.seed, "Surface sampling seed")->capture_default_str();
  compare->add_option("--render-size", o.render_size, "Normal-map size in pixels")
      ->check(CLI::Range(11, 8192))
      ->capture_default_str();
  compare->add_option("-o,--output", o.out_path, "Output JSON file (standard output when omitted)");
  compare->add_option("--scale", o.scale, "Report distances in cm for a reference height, e.g. 1.8m");
  add_normalize(compare, o);
  compare->callback([&o] { o.action = [&o] { return run_compare(o); }; });

  auto* gen = app.add_subcommand("gen", "Generate a synthetic test mesh");
  gen->add_option("shape", o.shape, "sphere, torus, cube, capsule, cylinder, open-sphere or open-sphere(P%)")->required();
  gen->add_option("-o,--output", o.out_path, "Output mesh (.obj/.ply)")->required();
  gen->add_option("--radius", o.radius, "Sphere, capsule and cylinder radius")->capture_default_str();
  gen->add_option("--subdivisions", o.subdivisions, "Icosphere subdivision level")->capture_default_str();
  gen->add_option("--major", o.major_radius, "Torus ring radius")->capture_default_str();
  gen->add_option("--minor", o.minor_radius, "Torus tube radius")->capture_default_str();
  gen->add_option("--segments", o.segments, "Angular segments (torus tube uses this, ring twice this)")
      ->capture_default_str();
  gen->add_option("--rings", o.rings, "Capsule rings per cap, cylinder length segments, cube face segments")
      ->capture_default_str();
  gen->add_option("--half-length", o.half_length, "Capsule and cylinder half length")->capture_default_str();
  gen->add_option("--half-extent", o.half_extent, "Cube half extent")->capture_default_str();
  gen->add_option("--percent", o.percent, "Faces removed from open-sphere, in percent")->capture_default_str();
  gen->add_option("--seed", o.seed, "Seed choosing the removed open-sphere faces")->capture_default_str();
  gen->callback([&o] { o.action = [&o] { return run_gen(o); }; });

  auto* docs = app.add_subcommand("docs", "Regenerate or verify the generated documentation blocks");
  docs->add_option("mode", o.docs_mode, "write or check")->required()->check(CLI::IsMember({"write", "check"}));
  docs->add_option("--dir", o.docs_dir, "Documentation directory")->capture_default_str();
  docs->add_option("--extra", o.docs_extra, "Further markdown files whose links are checked (e.g. README.md)");
  docs->callback([this, &o] {
    o.action = [this, &o] {
      if (o.docs_mode == "write") {
        write_generated_docs(o.docs_dir, *app_);
        return kExitOk;
      }
      const auto problems = check_docs(o.docs_dir, o.docs_extra, *app_);
      for (const auto& p : problems) std::cerr << p << '\n';
      return problems.empty() ? kExitOk : kExitFailure;
    };
  });
}

App::~App() = default;

int App::run(int argc, char** argv) {
  try {
    app_->parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app_->exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app_->exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app_->exit(e);
  } catch (const CLI::ParseError& e) {
    app_->exit(e);
    return kExitUsage;
  }
  try {
    return options_->action ? options_->action() : kExitUsage;
  } catch (const UsageError& e) {
    log(std::string("usage error: ") + e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kExitFailure;
  }
}

}  // namespace fofx::cli
