#include "vsynth/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace vsynth {

namespace {

using nlohmann::json;

constexpr int kVersion = 1;

json header_json(const GridGeometry& g, VolumeKind kind, bool labeled) {
  json h;
  h["format"] = "vvol";
  h["version"] = kVersion;
  h["kind"] = std::string(to_string(kind));
  h["dtype"] = kind == VolumeKind::mask ? "uint8" : "float32";
  h["byte_order"] = "little";
  h["dims"] = {g.dims.x(), g.dims.y(), g.dims.z()};
  h["spacing"] = {g.spacing.x(), g.spacing.y(), g.spacing.z()};
  h["origin"] = {g.origin.x(), g.origin.y(), g.origin.z()};
  h["labeled"] = labeled;
  return h;
}

void write_header(std::ostream& out, const GridGeometry& g, VolumeKind kind, bool labeled) {
  out << header_json(g, kind, labeled).dump() << '\n';
}

void write_floats(std::ostream& out, const std::vector<float>& values) {
  std::vector<unsigned char> bytes(values.size() * 4);
  for (std::size_t n = 0; n < values.size(); ++n) {
    const auto bits = std::bit_cast<std::uint32_t>(values[n]);
    for (int b = 0; b < 4; ++b) bytes[n * 4 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t expected) {
  std::vector<unsigned char> bytes(expected);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(expected));
  if (static_cast<std::size_t>(in.gcount()) != expected)
    throw Error(Errc::TruncatedPayload, "expected " + std::to_string(expected) + " payload bytes, got " +
                                            std::to_string(in.gcount()));
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(Errc::ParseError, "trailing bytes after payload");
  return bytes;
}

Vec3 vec3_field(const json& h, const char* key) {
  const json& a = h.at(key);
  if (!a.is_array() || a.size() != 3) throw Error(Errc::ParseError, std::string(key) + " must have 3 entries");
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

ContainerHeader parse_header(const std::string& line) {
  ContainerHeader out;
  try {
    const json h = json::parse(line);
    if (h.at("format").get<std::string>() != "vvol") throw Error(Errc::ParseError, "not a vvol file");
    if (h.at("version").get<int>() != kVersion) throw Error(Errc::ParseError, "unsupported vvol version");
    if (h.at("byte_order").get<std::string>() != "little")
      throw Error(Errc::ParseError, "only little-endian payloads are supported");
    const std::string kind = h.at("kind").get<std::string>();
    const std::string dtype = h.at("dtype").get<std::string>();
    if (kind == "volume") out.kind = VolumeKind::volume;
    else if (kind == "mask") out.kind = VolumeKind::mask;
    else if (kind == "atlas") out.kind = VolumeKind::atlas;
    else throw Error(Errc::ParseError, "unknown kind " + kind);
    const std::string want = out.kind == VolumeKind::mask ? "uint8" : "float32";
    if (dtype != want) throw Error(Errc::ParseError, "dtype " + dtype + " invalid for kind " + kind);
    const json& dims = h.at("dims");
    if (!dims.is_array() || dims.size() != 3) throw Error(Errc::ParseError, "dims must have 3 entries");
    for (int a = 0; a < 3; ++a) {
      const auto v = dims[a].get<long long>();
      if (v < 1 || v > (1LL << 24)) throw Error(Errc::ParseError, "dims out of range");
      out.geometry.dims[a] = static_cast<int>(v);
    }
    out.geometry.spacing = vec3_field(h, "spacing");
    out.geometry.origin = vec3_field(h, "origin");
    out.labeled = h.value("labeled", false);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed header: ") + e.what());
  }
  try {
    validate_geometry(out.geometry);
  } catch (const Error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  return out;
}

template <typename Grid>
void write_file(const std::filesystem::path& path, const Grid& grid) {
  auto out = open_out(path);
  write_container(out, grid);
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

}  // namespace

std::string_view to_string(VolumeKind kind) {
  switch (kind) {
    case VolumeKind::volume: return "volume";
    case VolumeKind::mask: return "mask";
    case VolumeKind::atlas: return "atlas";
  }
  return "volume";
}

void write_container(std::ostream& out, const Volume& volume, bool labeled) {
  write_header(out, volume.geometry(), VolumeKind::volume, labeled);
  write_floats(out, volume.values());
}

void write_container(std::ostream& out, const Mask& mask) {
  write_header(out, mask.geometry(), VolumeKind::mask, false);
  out.write(reinterpret_cast<const char*>(mask.values().data()),
            static_cast<std::streamsize>(mask.size()));
}

void write_container(std::ostream& out, const Atlas& atlas) {
  write_header(out, atlas.geometry(), VolumeKind::atlas, false);
  write_floats(out, atlas.values());
}

AnyGrid read_container(std::istream& in, ContainerHeader* header_out) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "missing vvol header");
  const ContainerHeader header = parse_header(line);
  if (header_out) *header_out = header;
  const std::size_t count = header.geometry.voxel_count();
  if (header.kind == VolumeKind::mask) {
    const auto bytes = read_payload(in, count);
    Mask mask(header.geometry, 0);
    for (std::size_t n = 0; n < count; ++n) {
      if (bytes[n] > 1) throw Error(Errc::ParseError, "mask payload holds a non-binary value");
      mask[n] = bytes[n];
    }
    return AnyGrid(std::in_place_type<Mask>, std::move(mask));
  }
  const auto bytes = read_payload(in, count * 4);
  Grid<float> grid(header.geometry, 0.0f);
  for (std::size_t n = 0; n < count; ++n) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[n * 4 + b]) << (8 * b);
    grid[n] = std::bit_cast<float>(bits);
  }
  if (header.kind == VolumeKind::atlas) {
    for (float v : grid.values())
      if (!(v >= 0.0f && v <= 1.0f)) throw Error(Errc::ParseError, "atlas value outside [0,1]");
    return AnyGrid(std::in_place_type<Atlas>, std::move(grid));
  }
  return AnyGrid(std::in_place_type<Volume>, std::move(grid));
}

void write_volume(const std::filesystem::path& path, const Volume& volume, bool labeled) {
  auto out = open_out(path);
  write_container(out, volume, labeled);
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

void write_mask(const std::filesystem::path& path, const Mask& mask) { write_file(path, mask); }

void write_atlas(const std::filesystem::path& path, const Atlas& atlas) { write_file(path, atlas); }

AnyGrid read_any(const std::filesystem::path& path, ContainerHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_container(in, header);
}

Volume read_volume(const std::filesystem::path& path, ContainerHeader* header) {
  AnyGrid g = read_any(path, header);
  if (auto* v = std::get_if<Volume>(&g)) return std::move(*v);
  throw Error(Errc::KindMismatch, path.string() + " does not hold a volume");
}

Mask read_mask(const std::filesystem::path& path) {
  AnyGrid g = read_any(path);
  if (auto* m = std::get_if<Mask>(&g)) return std::move(*m);
  throw Error(Errc::KindMismatch, path.string() + " does not hold a mask");
}

Atlas read_atlas(const std::filesystem::path& path) {
  AnyGrid g = read_any(path);
  if (auto* a = std::get_if<Atlas>(&g)) return std::move(*a);
  throw Error(Errc::KindMismatch, path.string() + " does not hold an atlas");
}

}  // namespace vsynth
