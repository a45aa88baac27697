#pragma once

#include <filesystem>
#include <iosfwd>

#include "vsynth/tree.hpp"

namespace vsynth {

/// Line-oriented tree text:
///   vasculsynth-tree v1 <node_count>
///   id parent_id px py pz dx dy dz beta kind      (one per live node)
/// Ids are compacted to 0..n-1 in creation order; the root's parent_id is -1.
/// Reals are printed with 9 significant digits.
void write_tree(std::ostream& out, const Tree& tree);
Tree read_tree(std::istream& in);

void save_tree(const std::filesystem::path& path, const Tree& tree);
Tree load_tree(const std::filesystem::path& path);

}  // namespace vsynth
