#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vsynth/geometry.hpp"

namespace vsynth {

using NodeId = std::uint32_t;

enum class NodeKind { root, leaf, inter, bifurcation };

/// How a node came to exist. Not serialized; used by growth bookkeeping and audits.
enum class NodeOrigin { root, extension, bifurcation };

struct Node {
  NodeId id = 0;
  std::optional<NodeId> parent;
  /// At most two. For a bifurcation, children[0] is the pre-existing child.
  std::vector<NodeId> children;
  Vec3 position = Vec3::Zero();
  /// Offset to the children's position; its length times beta is the radius.
  Vec3 direction = Vec3::Zero();
  double beta = 1.0;
  NodeKind kind = NodeKind::leaf;
  NodeOrigin origin = NodeOrigin::extension;
  bool alive = true;

  double radius() const { return beta * direction.norm(); }
};

/// Arena-backed rooted tree. Removed nodes stay in the arena as tombstones so
/// handles remain stable; iterate with `for (const Node& n : tree.arena()) if (n.alive)`.
///
/// Maintains `leaves()` (childless, not discontinued) and `discontinued()`
/// automatically. `bifurcation_candidates()` is owned by the grower and set
/// through `set_bifurcation_candidates`.
class Tree {
 public:
  Tree() = default;
  Tree(const Vec3& root_position, const Vec3& root_direction, double beta);

  /// Rebuild from a node list where ids are 0..n-1, node 0 is the root and every
  /// parent id is smaller than its child's. Positions are taken as given.
  static Tree from_nodes(std::vector<Node> nodes);

  bool empty() const { return nodes_.empty(); }
  NodeId root() const { return root_; }
  std::size_t node_count() const { return alive_count_; }
  std::span<const Node> arena() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  double radius(NodeId id) const { return node(id).radius(); }

  const std::vector<NodeId>& leaves() const { return leaves_; }
  const std::vector<NodeId>& discontinued() const { return discontinued_; }
  const std::vector<NodeId>& bifurcation_candidates() const { return candidates_; }

  /// Append a child at parent.position + parent.direction.
  NodeId add_child(NodeId parent, const Vec3& direction, double beta, NodeOrigin origin);

  /// Remove `id` and all of its descendants. The root cannot be removed.
  void remove_subtree(NodeId id);

  /// Multiply beta of every node in the subtree rooted at `id` by `factor`,
  /// removing any descendant whose radius drops below `min_radius`. The subtree
  /// root itself is always kept.
  void scale_branch(NodeId id, double factor, double min_radius);

  /// Set a node's direction, moving every descendant so child positions keep
  /// matching parent.position + parent.direction.
  void set_direction(NodeId id, const Vec3& direction);

  void set_beta(NodeId id, double beta) { nodes_.at(id).beta = beta; }

  /// Move a leaf from `leaves()` to `discontinued()`; it will never grow again.
  void discontinue(NodeId leaf);

  void set_bifurcation_candidates(std::vector<NodeId> ids) { candidates_ = std::move(ids); }
  void drop_bifurcation_candidate(NodeId id);

  /// Descendants of `id` including itself, in preorder.
  std::vector<NodeId> subtree(NodeId id) const;

 private:
  void refresh_kind(NodeId id);
  static void insert_sorted(std::vector<NodeId>& v, NodeId id);
  static void erase_value(std::vector<NodeId>& v, NodeId id);

  std::vector<Node> nodes_;
  NodeId root_ = 0;
  std::size_t alive_count_ = 0;
  std::vector<NodeId> leaves_;
  std::vector<NodeId> discontinued_;
  std::vector<NodeId> candidates_;
};

}  // namespace vsynth
