#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <variant>

#include "vsynth/atlas.hpp"
#include "vsynth/grid.hpp"

namespace vsynth {

enum class VolumeKind { volume, mask, atlas };

std::string_view to_string(VolumeKind kind);

/// `.vvol` container: one line of compact JSON
///   {"byte_order":"little","dims":[nx,ny,nz],"dtype":"float32"|"uint8",
///    "format":"vvol","kind":"volume"|"mask"|"atlas","labeled":false,
///    "origin":[..],"spacing":[..],"version":1}
/// terminated by '\n', then nx*ny*nz little-endian scalars, x fastest.
/// Volumes and atlases store float32, masks uint8 restricted to {0, 1}.
struct ContainerHeader {
  GridGeometry geometry;
  VolumeKind kind = VolumeKind::volume;
  /// Scans from a labeled data set; synthetic vessels are never blended into these.
  bool labeled = false;
};

using AnyGrid = std::variant<Volume, Mask, Atlas>;

void write_container(std::ostream& out, const Volume& volume, bool labeled = false);
void write_container(std::ostream& out, const Mask& mask);
void write_container(std::ostream& out, const Atlas& atlas);

/// Throws ParseError for a malformed header or non-binary mask payload and
/// TruncatedPayload when the payload is short.
AnyGrid read_container(std::istream& in, ContainerHeader* header = nullptr);

void write_volume(const std::filesystem::path& path, const Volume& volume, bool labeled = false);
void write_mask(const std::filesystem::path& path, const Mask& mask);
void write_atlas(const std::filesystem::path& path, const Atlas& atlas);

AnyGrid read_any(const std::filesystem::path& path, ContainerHeader* header = nullptr);
/// Typed readers; KindMismatch when the file holds another kind.
Volume read_volume(const std::filesystem::path& path, ContainerHeader* header = nullptr);
Mask read_mask(const std::filesystem::path& path);
Atlas read_atlas(const std::filesystem::path& path);

}  // namespace vsynth
