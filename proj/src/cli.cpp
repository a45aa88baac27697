#include "vsynth/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vsynth/atlas.hpp"
#include "vsynth/augment.hpp"
#include "vsynth/batch.hpp"
#include "vsynth/config.hpp"
#include "vsynth/container.hpp"
#include "vsynth/dataset.hpp"
#include "vsynth/denoise.hpp"
#include "vsynth/growth.hpp"
#include "vsynth/noise.hpp"
#include "vsynth/raster.hpp"
#include "vsynth/tree_io.hpp"

namespace vsynth {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// `--config` is read before the real parse so that flags can override it.
std::optional<fs::path> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return fs::path(args[i + 1]);
    if (args[i].rfind("--config=", 0) == 0) return fs::path(args[i].substr(9));
  }
  return std::nullopt;
}

struct Vec3Flag {
  std::vector<double> values;
  bool set() const { return values.size() == 3; }
  Vec3 get() const { return Vec3(values[0], values[1], values[2]); }
};

struct GridFlags {
  std::vector<int> dims{128, 128, 128};
  Vec3Flag spacing{{1.0, 1.0, 1.0}};
  Vec3Flag origin{{0.0, 0.0, 0.0}};
  std::string like;

  GridGeometry resolve() const {
    if (!like.empty()) return read_any_geometry(like);
    GridGeometry g;
    if (dims.size() != 3) throw Error(Errc::InvalidParams, "--dims needs three values");
    g.dims = Index3(dims[0], dims[1], dims[2]);
    g.spacing = spacing.get();
    g.origin = origin.get();
    validate_geometry(g);
    return g;
  }

  static GridGeometry read_any_geometry(const fs::path& path) {
    ContainerHeader header;
    read_any(path, &header);
    return header.geometry;
  }
};

void add_vec3(CLI::App* app, const std::string& name, Vec3Flag& flag, const std::string& help) {
  app->add_option(name, flag.values, help)->expected(3)->type_name("X Y Z");
}

void add_grid_flags(CLI::App* app, GridFlags& g, bool allow_like) {
  app->add_option("--dims", g.dims, "Grid dimensions (voxels)")->expected(3)->type_name("NX NY NZ");
  add_vec3(app, "--spacing", g.spacing, "Voxel spacing (mm)");
  add_vec3(app, "--origin", g.origin, "Grid origin (mm)");
  if (allow_like) app->add_option("--like", g.like, "Take the grid from an existing .vvol file");
}

void load_grid_config(const json& cfg, GridFlags& g) {
  if (!cfg.contains("grid")) return;
  const json& grid = cfg.at("grid");
  if (grid.contains("dims")) g.dims = grid.at("dims").get<std::vector<int>>();
  if (grid.contains("spacing")) g.spacing.values = grid.at("spacing").get<std::vector<double>>();
  if (grid.contains("origin")) g.origin.values = grid.at("origin").get<std::vector<double>>();
}

using FlagKeys = std::vector<std::pair<CLI::Option*, std::string>>;

FlagKeys add_growth_flags(CLI::App* app, GrowthParams& p) {
  FlagKeys keys;
  auto add = [&](const std::string& flag, const char* key, auto& field, const std::string& help) {
    keys.emplace_back(app->add_option(flag, field, help), key);
  };
  add("--sigma-angle", "sigma_angle", p.sigma_angle, "Angular jitter std-dev (rad)");
  add("--beta0", "beta0", p.beta0, "Radius / direction-length ratio");
  add("--gamma", "gamma", p.gamma, "Murray exponent");
  add("--r-min", "r_min", p.r_min, "Pruning radius (mm)");
  add("--bifurcation-prob", "bifurcation_prob", p.bifurcation_prob, "Probability a step bifurcates");
  add("--min-bifurcation-spacing", "min_bifurcation_spacing", p.min_bifurcation_spacing,
      "Minimum node distance between bifurcations");
  add("--lambda-pull", "lambda_pull", p.lambda_pull, "Turn fraction toward the atlas target");
  add("--radius-sigma-fraction", "radius_sigma_fraction", p.radius_sigma_fraction,
      "New-child radius std-dev / expected radius");
  add("--max-nodes", "max_nodes", p.max_nodes, "Node budget per tree");
  add("--target-search-factor", "target_search_factor", p.target_search_factor,
      "Atlas search radius / node radius");
  add("--decrement-amount", "decrement_amount", p.decrement_amount, "Atlas decrement per node");
  add("--decrement-radius-factor", "decrement_radius_factor", p.decrement_radius_factor,
      "Atlas decrement radius / node radius");
  return keys;
}

void add_noise_flags(CLI::App* app, NoiseParams& p) {
  app->add_option("--octaves", p.octaves, "Octave count");
  app->add_option("--base-frequency", p.base_frequency, "Lattice cells per mm");
  app->add_option("--persistence", p.persistence, "Amplitude ratio between octaves");
  app->add_option("--lacunarity", p.lacunarity, "Frequency ratio between octaves");
  app->add_option("--amplitude", p.amplitude_hu, "Noise amplitude (HU)");
}

void add_range(CLI::App* app, const std::string& name, Range& r, const std::string& help) {
  app->add_option(name, r, help)->expected(2)->type_name("LO HI");
}

void add_augment_flags(CLI::App* app, AugmentParams& p) {
  add_range(app, "--rot-axial", p.rot_axial, "Axial rotation range (deg)");
  add_range(app, "--rot-coronal", p.rot_coronal, "Coronal rotation range (deg)");
  add_range(app, "--rot-sagittal", p.rot_sagittal, "Sagittal rotation range (deg)");
  add_range(app, "--trans-z-frac", p.trans_z_frac, "z translation range (fraction of extent)");
  add_range(app, "--trans-xy-frac", p.trans_xy_frac, "x/y translation range (fraction of extent)");
  app->add_option("--mirror-prob", p.mirror_sagittal_prob, "Sagittal mirror probability");
  app->add_option("--fill", p.fill_hu, "Out-of-field intensity (HU)");
}

void add_denoise_flags(CLI::App* app, DenoiseParams& p) {
  app->add_option("--h", p.h, "Similarity bandwidth (HU)");
  app->add_option("--patch-radius", p.patch_radius, "Patch half-width (voxels)");
}

std::vector<fs::path> frames_in(const fs::path& dir) {
  static const std::regex pattern(R"(frame_(\d{4})\.vvol)");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (std::regex_match(entry.path().filename().string(), pattern)) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct Settings {
  json cfg = json::object();
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;

  GrowthParams growth;
  NoiseParams noise;
  AugmentParams augment;
  DenoiseParams denoise;
  GridFlags grid;

  double contrast_hu = 300.0;
  double edge_sigma = 0.0;
  int supersample = 2;
  double atlas_threshold = 0.05;
  int midsagittal_x = -1;
  double lo = kContrastLowHu;
  double hi = kContrastHighHu;
  std::optional<double> binarize_threshold;
  Vec3Flag root{{}};
  Vec3Flag root_dir{{0.0, 0.0, 1.0}};
  Vec3Flag root_left{{}};
  Vec3Flag root_right{{}};
  int count = 1;
  bool with_augment = false;

  std::string input;
  std::string second;
  std::vector<std::string> inputs;
  std::string frames_dir;
  std::string atlas_path;
  std::string background_path;
  std::string out_volume;
  std::string out_mask;
  std::string out_left;
  std::string out_right;
  bool labeled = false;

  void load(const json& c) {
    cfg = c;
    if (c.contains("growth")) c.at("growth").get_to(growth);
    if (c.contains("noise")) c.at("noise").get_to(noise);
    if (c.contains("augment")) {
      c.at("augment").get_to(augment);
      with_augment = true;
    }
    if (c.contains("denoise")) c.at("denoise").get_to(denoise);
    load_grid_config(c, grid);
    if (c.contains("blend")) {
      const json& b = c.at("blend");
      contrast_hu = b.value("contrast_hu", contrast_hu);
      edge_sigma = b.value("edge_sigma_mm", edge_sigma);
    }
    supersample = c.value("supersample", supersample);
    atlas_threshold = c.value("atlas_threshold", atlas_threshold);
    midsagittal_x = c.value("midsagittal_x", midsagittal_x);
    if (c.contains("roots")) {
      const json& r = c.at("roots");
      if (!r.is_array() || r.size() != 2) throw Error(Errc::ParseError, "roots must list two entries");
      root_left.values = r[0].at("position").get<std::vector<double>>();
      root_right.values = r[1].at("position").get<std::vector<double>>();
    }
  }
};

void print_tree_summary(const Tree& tree) {
  std::size_t bif = 0;
  for (const Node& n : tree.arena()) bif += n.alive && n.kind == NodeKind::bifurcation;
  std::cerr << "tree: " << tree.node_count() << " nodes, " << bif << " bifurcations\n";
}

int dispatch(const std::vector<std::string>& args) {
  Settings s;
  if (auto path = find_config(args)) s.load(load_json(*path));

  CLI::App app{"Synthetic cerebrovascular volume toolkit", "vsynth"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON parameter document (flags override it)");

  // grow
  auto* grow = app.add_subcommand("grow", "Grow a vessel tree inside an atlas");
  grow->add_option("--seed", s.seed, "Random seed")->required();
  grow->add_option("--config", config_path, "JSON parameter document");
  grow->add_option("--atlas", s.atlas_path, "Atlas .vvol")->required();
  grow->add_option("--binarize", s.binarize_threshold, "Binarize the atlas at this threshold first");
  add_vec3(grow, "--root", s.root, "Root position (mm)");
  grow->get_option("--root")->required();
  add_vec3(grow, "--root-dir", s.root_dir, "Root direction; its length times beta0 is the root radius");
  grow->add_option("--out", s.out, "Output tree file")->required();
  add_growth_flags(grow, s.growth);

  // rasterize
  auto* raster = app.add_subcommand("rasterize", "Voxelize a tree into a mask");
  raster->add_option("tree", s.input, "Tree file")->required();
  raster->add_option("--config", config_path, "JSON parameter document");
  add_grid_flags(raster, s.grid, true);
  raster->add_option("--supersample", s.supersample, "Sub-samples per axis");
  raster->add_option("--out", s.out, "Output mask .vvol")->required();

  // blend
  auto* blend = app.add_subcommand("blend", "Blend a vessel mask into a background volume");
  blend->add_option("background", s.input, "Background volume")->required();
  blend->add_option("mask", s.second, "Vessel mask")->required();
  blend->add_option("--config", config_path, "JSON parameter document");
  blend->add_option("--contrast", s.contrast_hu, "Lumen intensity (HU)");
  blend->add_option("--edge-sigma", s.edge_sigma, "Edge smoothing sigma (mm)");
  blend->add_option("--out", s.out, "Output volume")->required();

  // noise
  auto* noise = app.add_subcommand("noise", "Generate octave gradient noise, optionally adding it to a volume");
  noise->add_option("--seed", s.seed, "Random seed")->required();
  noise->add_option("--config", config_path, "JSON parameter document");
  noise->add_option("--input", s.input, "Volume to add the noise to");
  add_grid_flags(noise, s.grid, true);
  add_noise_flags(noise, s.noise);
  noise->add_option("--out", s.out, "Output volume")->required();

  // denoise
  auto* denoise = app.add_subcommand("denoise", "Temporal non-local-means over a frame sequence");
  denoise->set_help_flag("--help", "Print this help message and exit");
  denoise->add_option("frames", s.inputs, "Frame volumes in temporal order (frame 0 is the reference)");
  denoise->add_option("--frames-dir", s.frames_dir, "Directory of frame_NNNN.vvol files");
  denoise->add_option("--config", config_path, "JSON parameter document");
  add_denoise_flags(denoise, s.denoise);
  denoise->add_option("--out", s.out, "Output volume")->required();

  // augment
  auto* augment = app.add_subcommand("augment", "Random rigid transform of a volume/mask pair");
  augment->add_option("volume", s.input, "Volume")->required();
  augment->add_option("mask", s.second, "Mask")->required();
  augment->add_option("--seed", s.seed, "Random seed")->required();
  augment->add_option("--config", config_path, "JSON parameter document");
  add_augment_flags(augment, s.augment);
  augment->add_option("--out-volume", s.out_volume, "Output volume")->required();
  augment->add_option("--out-mask", s.out_mask, "Output mask")->required();

  // atlas
  auto* atlas = app.add_subcommand("atlas", "Atlas construction");
  atlas->require_subcommand(1);
  auto* atlas_build = atlas->add_subcommand("build", "Voxelwise mean of masks");
  atlas_build->add_option("masks", s.inputs, "Mask files")->required();
  atlas_build->add_option("--out", s.out, "Output atlas")->required();
  auto* atlas_bin = atlas->add_subcommand("binarize", "Threshold an atlas (inclusive)");
  atlas_bin->add_option("atlas", s.input, "Atlas file")->required();
  atlas_bin->add_option("--threshold", s.atlas_threshold, "Threshold in [0,1]");
  atlas_bin->add_option("--out", s.out, "Output atlas")->required();
  auto* atlas_split = atlas->add_subcommand("split", "Split into hemisphere atlases");
  atlas_split->add_option("atlas", s.input, "Atlas file")->required();
  atlas_split->add_option("--mid", s.midsagittal_x, "Midsagittal x index (default nx/2)");
  atlas_split->add_option("--out-left", s.out_left, "Left atlas")->required();
  atlas_split->add_option("--out-right", s.out_right, "Right atlas")->required();

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Training data generation");
  dataset->require_subcommand(1);
  auto* generate = dataset->add_subcommand("generate", "Generate labeled synthetic examples");
  generate->add_option("--seed", s.seed, "Master seed; example i uses seed + i")->required();
  generate->add_option("--config", config_path, "JSON parameter document");
  generate->add_option("--count", s.count, "Number of examples");
  generate->add_option("--jobs", s.jobs, "Worker threads");
  generate->add_option("--out", s.out, "Output directory")->required();
  generate->add_option("--background", s.background_path, "Pre-contrast background volume (default: phantom)");
  generate->add_option("--atlas", s.atlas_path, "Density atlas (default: phantom atlas)");
  generate->add_option("--atlas-threshold", s.atlas_threshold, "Binarization threshold");
  generate->add_option("--mid", s.midsagittal_x, "Midsagittal x index (default nx/2)");
  add_vec3(generate, "--root-left", s.root_left, "Left root position (mm)");
  add_vec3(generate, "--root-right", s.root_right, "Right root position (mm)");
  add_vec3(generate, "--root-dir", s.root_dir, "Root direction for both trees");
  generate->add_option("--contrast", s.contrast_hu, "Lumen intensity (HU)");
  generate->add_option("--edge-sigma", s.edge_sigma, "Edge smoothing sigma (mm)");
  generate->add_option("--supersample", s.supersample, "Rasterization sub-samples per axis");
  generate->add_flag("--augment", s.with_augment, "Apply random rigid augmentation");
  add_grid_flags(generate, s.grid, false);
  GrowthParams generate_growth_flags;
  const FlagKeys generate_growth_keys = add_growth_flags(generate, generate_growth_flags);
  add_noise_flags(generate, s.noise);

  // expand-gt
  auto* expand = app.add_subcommand("expand-gt", "Grow a ground truth one axial slice up and down");
  expand->add_option("mask", s.input, "Mask")->required();
  expand->add_option("volume", s.second, "Volume")->required();
  expand->add_option("--lo", s.lo, "Lower intensity bound (inclusive)");
  expand->add_option("--hi", s.hi, "Upper intensity bound (exclusive)");
  expand->add_option("--out", s.out, "Output mask")->required();

  // dice
  auto* dice_cmd = app.add_subcommand("dice", "Dice coefficient of two masks");
  dice_cmd->add_option("a", s.input, "Mask A")->required();
  dice_cmd->add_option("b", s.second, "Mask B")->required();

  // phantom
  auto* phantom = app.add_subcommand("phantom", "Synthetic head-like background volume");
  phantom->add_option("--seed", s.seed, "Texture seed")->required();
  phantom->add_option("--config", config_path, "JSON parameter document");
  add_grid_flags(phantom, s.grid, false);
  phantom->add_option("--labeled", s.labeled, "Tag the output as a labeled scan");
  phantom->add_option("--out", s.out, "Output volume")->required();
  phantom->add_option("--out-atlas", s.out_left, "Also write the matching phantom atlas");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (*grow) {
    Atlas a = read_atlas(s.atlas_path);
    if (s.binarize_threshold) a = binarize(a, *s.binarize_threshold);
    s.growth.seed = s.seed;
    Rng rng(s.seed);
    const Tree tree = grow_tree(s.growth, a, s.root.get(), s.root_dir.get(), rng);
    save_tree(s.out, tree);
    print_tree_summary(tree);
  } else if (*raster) {
    const Tree tree = load_tree(s.input);
    write_mask(s.out, rasterize_tree(tree, s.grid.resolve(), s.supersample));
  } else if (*blend) {
    ContainerHeader header;
    const Volume bg = read_volume(s.input, &header);
    write_volume(s.out, blend_vessels(bg, read_mask(s.second), s.contrast_hu, s.edge_sigma), header.labeled);
  } else if (*noise) {
    s.noise.seed = s.seed;
    if (!s.input.empty()) {
      ContainerHeader header;
      const Volume v = read_volume(s.input, &header);
      write_volume(s.out, add_noise(v, noise_volume(v.geometry(), s.noise)), header.labeled);
    } else {
      write_volume(s.out, noise_volume(s.grid.resolve(), s.noise));
    }
  } else if (*denoise) {
    std::vector<fs::path> paths(s.inputs.begin(), s.inputs.end());
    if (!s.frames_dir.empty()) {
      const auto found = frames_in(s.frames_dir);
      paths.insert(paths.end(), found.begin(), found.end());
    }
    std::vector<Volume> frames;
    for (const auto& p : paths) frames.push_back(read_volume(p));
    write_volume(s.out, temporal_nlm(frames, s.denoise));
  } else if (*augment) {
    s.augment.seed = s.seed;
    Rng rng(s.seed);
    auto [v, m] = random_rigid(read_volume(s.input), read_mask(s.second), s.augment, rng);
    write_volume(s.out_volume, v);
    write_mask(s.out_mask, m);
  } else if (*atlas_build) {
    std::vector<Mask> masks;
    for (const auto& p : s.inputs) masks.push_back(read_mask(p));
    write_atlas(s.out, build_atlas(masks));
  } else if (*atlas_bin) {
    write_atlas(s.out, binarize(read_atlas(s.input), s.atlas_threshold));
  } else if (*atlas_split) {
    const Atlas a = read_atlas(s.input);
    const int mid = s.midsagittal_x < 0 ? a.dims().x() / 2 : s.midsagittal_x;
    auto [left, right] = split_hemispheres(a, mid);
    write_atlas(s.out_left, left);
    write_atlas(s.out_right, right);
  } else if (*generate) {
    const GridGeometry grid = [&] {
      if (!s.background_path.empty()) return GridFlags::read_any_geometry(s.background_path);
      return s.grid.resolve();
    }();
    ExampleSpec spec = desk_example_spec(grid, derive_seed(s.seed, 1000));
    if (!s.background_path.empty()) {
      ContainerHeader header;
      spec.background = read_volume(s.background_path, &header);
      spec.background_labeled = header.labeled;
    }
    if (!s.atlas_path.empty()) spec.atlas = read_atlas(s.atlas_path);
    if (s.root_left.set()) spec.root_positions[0] = s.root_left.get();
    if (s.root_right.set()) spec.root_positions[1] = s.root_right.get();
    spec.root_directions = {s.root_dir.get(), s.root_dir.get()};
    // Layering: desk defaults, then config sections, then explicit flags.
    json flagged;
    const json flag_values = generate_growth_flags;
    for (const auto& [opt, key] : generate_growth_keys)
      if (opt->count() > 0) flagged[key] = flag_values.at(key);
    for (std::size_t h = 0; h < 2; ++h) {
      if (s.cfg.contains("growth")) s.cfg.at("growth").get_to(spec.growth[h]);
      const char* side = h == 0 ? "growth_left" : "growth_right";
      if (s.cfg.contains(side)) s.cfg.at(side).get_to(spec.growth[h]);
      if (!flagged.is_null()) flagged.get_to(spec.growth[h]);
    }
    spec.noise = s.noise;
    spec.contrast_hu = s.contrast_hu;
    spec.edge_sigma_mm = s.edge_sigma;
    spec.supersample = s.supersample;
    spec.atlas_threshold = s.atlas_threshold;
    spec.midsagittal_x = s.midsagittal_x;
    if (s.with_augment) spec.augment = s.augment;
    generate_dataset(spec, s.count, s.seed, s.out, s.jobs, example_spec_json(spec));
  } else if (*expand) {
    write_mask(s.out, expand_ground_truth(read_mask(s.input), read_volume(s.second), s.lo, s.hi));
  } else if (*dice_cmd) {
    std::printf("%.6f\n", dice(read_mask(s.input), read_mask(s.second)));
    std::fflush(stdout);
  } else if (*phantom) {
    const GridGeometry g = s.grid.resolve();
    write_volume(s.out, phantom_background(g, s.seed), s.labeled);
    if (!s.out_left.empty()) write_atlas(s.out_left, phantom_atlas(g));
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace vsynth
