#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "vsynth/cli.hpp"
#include "vsynth/config.hpp"
#include "vsynth/container.hpp"
#include "vsynth/dataset.hpp"

using namespace vsynth;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("vsynth_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Errc read_error(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_container(in);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;
}

GridGeometry odd_grid() {
  GridGeometry g;
  g.dims = Index3(3, 4, 5);
  g.spacing = Vec3(0.5, 0.75, 1.25);
  g.origin = Vec3(-1.5, 2.0, 0.125);
  return g;
}

int cli(std::initializer_list<std::string> args) { return run_cli(std::vector<std::string>(args)); }

}  // namespace

TEST_CASE("containers round trip bit-exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-1e4f, 1e4f);
  Volume v(odd_grid());
  for (auto& x : v.values()) x = u(rng);
  v[3] = -0.0f;
  v[4] = std::numeric_limits<float>::denorm_min();
  const Mask m = oracle::random_mask(odd_grid(), 0.5, rng);
  Atlas a(odd_grid());
  for (auto& x : a.values()) x = std::abs(u(rng)) / 1e4f;

  TempDir dir("containers");
  write_volume(dir / "v.vvol", v, true);
  write_mask(dir / "m.vvol", m);
  write_atlas(dir / "a.vvol", a);
  ContainerHeader h;
  const Volume v2 = read_volume(dir / "v.vvol", &h);
  CHECK(h.labeled);
  CHECK(h.kind == VolumeKind::volume);
  CHECK(h.geometry == odd_grid());
  CHECK(std::memcmp(v.values().data(), v2.values().data(), v.size() * 4) == 0);
  CHECK(read_mask(dir / "m.vvol") == m);
  CHECK(read_atlas(dir / "a.vvol") == a);

  const std::string text = slurp(dir / "m.vvol");
  const auto newline = text.find('\n');
  CHECK(text.substr(0, newline).find("\"format\":\"vvol\"") != std::string::npos);
  CHECK(text.size() == newline + 1 + 60);
}

TEST_CASE("container payload checks") {
  GridGeometry g = oracle::cube(2);
  std::ostringstream out;
  write_container(out, Volume(g, 1.0f));
  const std::string good = out.str();
  CHECK(read_error(good.substr(0, good.size() - 4)) == Errc::TruncatedPayload);
  CHECK(read_error(good + "x") == Errc::ParseError);
  CHECK(read_error("{\"format\":\"nope\"}\n") == Errc::ParseError);
  CHECK(read_error("not json\n") == Errc::ParseError);

  std::ostringstream mout;
  write_container(mout, Mask(g, 1));
  std::string bad_mask = mout.str();
  bad_mask.back() = 2;
  CHECK(read_error(bad_mask) == Errc::ParseError);

  TempDir dir("kinds");
  write_mask(dir / "m.vvol", Mask(g, 0));
  try {
    read_volume(dir / "m.vvol");
    FAIL("expected KindMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::KindMismatch);
  }
  CHECK_THROWS_AS(read_volume(dir / "missing.vvol"), Error);
}

TEST_CASE("parameter documents layer over defaults") {
  const auto j = nlohmann::json::parse(R"({"r_min": 0.25, "max_nodes": 42})");
  GrowthParams p;
  j.get_to(p);
  CHECK(p.r_min == 0.25);
  CHECK(p.max_nodes == 42);
  CHECK(p.gamma == 3.0);

  GrowthParams q;
  q.sigma_angle = 0.01;
  nlohmann::json back = q;
  CHECK(back.get<GrowthParams>().sigma_angle == 0.01);

  AugmentParams a;
  nlohmann::json::parse(R"({"rot_axial": [-5, 5], "mirror_sagittal_prob": 0})").get_to(a);
  CHECK(a.rot_axial == Range{-5.0, 5.0});
  CHECK(a.mirror_sagittal_prob == 0.0);
  CHECK(a.rot_coronal == Range{-10.0, 10.0});
}

TEST_CASE("dice command prints the coefficient") {
  TempDir dir("dice");
  std::mt19937_64 rng(3);
  write_mask(dir / "a.vvol", oracle::random_mask(oracle::cube(6), 0.3, rng));
  const std::string cmd = std::string(VSYNTH_CLI_PATH) + " dice " + (dir / "a.vvol") + " " +
                          (dir / "a.vvol") + " > " + (dir / "out.txt");
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(dir / "out.txt") == "1.000000\n");
}

TEST_CASE("grow is reproducible and seeds are mandatory") {
  TempDir dir("grow");
  const GridGeometry g = oracle::cube(32);
  write_atlas(dir / "atlas.vvol", phantom_atlas(g));
  const auto root = phantom_roots(g)[0];
  auto grow = [&](const std::string& out) {
    return run_cli({"grow", "--seed", "7", "--atlas", dir / "atlas.vvol", "--root",
                    std::to_string(root.x()), std::to_string(root.y()), std::to_string(root.z()),
                    "--root-dir", "0", "0", "0.3", "--max-nodes", "200", "--out", dir / out});
  };
  REQUIRE(grow("t1.txt") == kExitOk);
  REQUIRE(grow("t2.txt") == kExitOk);
  CHECK(slurp(dir / "t1.txt") == slurp(dir / "t2.txt"));
  CHECK(slurp(dir / "t1.txt").rfind("vasculsynth-tree v1", 0) == 0);

  CHECK(cli({"grow", "--atlas", dir / "atlas.vvol", "--root", "1", "1", "1", "--out",
             dir / "x.txt"}) == kExitUsage);
  CHECK(cli({"dataset", "generate", "--out", dir / "ds"}) == kExitUsage);
  CHECK(cli({"noise", "--out", dir / "n.vvol"}) == kExitUsage);
  CHECK(cli({"no-such-command"}) == kExitUsage);
  CHECK_FALSE(fs::exists(dir / "ds"));
}

TEST_CASE("data errors exit with 2") {
  TempDir dir("errors");
  write_mask(dir / "a.vvol", Mask(oracle::cube(3), 0));
  write_mask(dir / "b.vvol", Mask(oracle::cube(4), 0));
  CHECK(cli({"dice", dir / "a.vvol", dir / "b.vvol"}) == kExitData);
  CHECK(cli({"dice", dir / "a.vvol", dir / "missing.vvol"}) == kExitData);
  std::ofstream(dir / "cfg.json") << "{ not json";
  CHECK(cli({"--config", dir / "cfg.json", "dice", dir / "a.vvol", dir / "a.vvol"}) == kExitData);
}

TEST_CASE("subcommands chain into a small pipeline") {
  TempDir dir("chain");
  const std::string dims[] = {"--dims", "24", "24", "24"};
  REQUIRE(cli({"phantom", "--seed", "1", dims[0], dims[1], dims[2], dims[3], "--out",
               dir / "bg.vvol", "--out-atlas", dir / "atlas.vvol"}) == kExitOk);
  REQUIRE(cli({"atlas", "split", dir / "atlas.vvol", "--out-left", dir / "l.vvol", "--out-right",
               dir / "r.vvol"}) == kExitOk);
  const auto root = phantom_roots(oracle::cube(24))[1];
  REQUIRE(cli({"grow", "--seed", "3", "--atlas", dir / "r.vvol", "--root", std::to_string(root.x()),
               std::to_string(root.y()), std::to_string(root.z()), "--root-dir", "0", "0", "0.4",
               "--max-nodes", "80", "--out", dir / "tree.txt"}) == kExitOk);
  REQUIRE(cli({"rasterize", dir / "tree.txt", "--like", dir / "bg.vvol", "--out",
               dir / "mask.vvol"}) == kExitOk);
  REQUIRE(cli({"blend", dir / "bg.vvol", dir / "mask.vvol", "--contrast", "300", "--out",
               dir / "blend.vvol"}) == kExitOk);
  REQUIRE(cli({"noise", "--seed", "4", "--input", dir / "blend.vvol", "--out",
               dir / "noisy.vvol"}) == kExitOk);
  REQUIRE(cli({"expand-gt", dir / "mask.vvol", dir / "noisy.vvol", "--out", dir / "gt.vvol"}) ==
          kExitOk);
  REQUIRE(cli({"augment", dir / "noisy.vvol", dir / "gt.vvol", "--seed", "5", "--out-volume",
               dir / "av.vvol", "--out-mask", dir / "am.vvol"}) == kExitOk);
  REQUIRE(cli({"denoise", dir / "bg.vvol", dir / "noisy.vvol", "--h", "40", "--out",
               dir / "dn.vvol"}) == kExitOk);
  REQUIRE(cli({"atlas", "build", dir / "mask.vvol", dir / "gt.vvol", "--out", dir / "built.vvol"}) ==
          kExitOk);
  REQUIRE(cli({"atlas", "binarize", dir / "built.vvol", "--threshold", "0.5", "--out",
               dir / "bin.vvol"}) == kExitOk);

  const Mask mask = read_mask(dir / "mask.vvol");
  const Mask gt = read_mask(dir / "gt.vvol");
  CHECK(count_set(mask) > 0);
  CHECK(count_set(gt) >= count_set(mask));
  const Atlas bin = read_atlas(dir / "bin.vvol");
  for (std::size_t n = 0; n < gt.size(); ++n) CHECK(bin[n] == (gt[n] ? 1.0f : 0.0f));
}

TEST_CASE("dataset generation does not depend on the worker count") {
  TempDir dir("dataset");
  const std::vector<std::string> common{"--seed", "11", "--count", "3", "--dims", "32", "32", "32",
                                        "--max-nodes", "150"};
  auto run = [&](const std::string& out, const std::string& jobs) {
    std::vector<std::string> args{"dataset", "generate"};
    args.insert(args.end(), common.begin(), common.end());
    args.insert(args.end(), {"--jobs", jobs, "--out", dir / out});
    return run_cli(args);
  };
  REQUIRE(run("serial", "1") == kExitOk);
  REQUIRE(run("parallel", "3") == kExitOk);
  for (const auto& entry : fs::directory_iterator(dir.path / "serial")) {
    const fs::path other = dir.path / "parallel" / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }
  const auto manifest = nlohmann::json::parse(slurp(dir.path / "serial" / "manifest.json"));
  CHECK(manifest.at("examples").size() == 3);
  CHECK(manifest.at("examples")[2].at("seed") == 13);
  CHECK(manifest.at("examples")[0].at("volume") == "example_0000_volume.vvol");

  // Config documents are honored and flags override them.
  std::ofstream(dir / "cfg.json") << R"({"growth": {"max_nodes": 5}, "grid": {"dims": [20, 20, 20]}})";
  REQUIRE(run_cli({"--config", dir / "cfg.json", "dataset", "generate", "--seed", "1", "--out",
                   dir / "cfg", "--max-nodes", "9"}) == kExitOk);
  const auto cfg_manifest = nlohmann::json::parse(slurp(dir.path / "cfg" / "manifest.json"));
  const auto& spec = cfg_manifest.at("examples")[0].at("spec");
  CHECK(spec.at("growth")[0].at("max_nodes") == 9);
  ContainerHeader h;
  read_volume(dir.path / "cfg" / "example_0000_volume.vvol", &h);
  CHECK(h.geometry.dims.x() == 20);
}
