#include "vsynth/tree.hpp"

#include <algorithm>
#include <string>

#include "vsynth/error.hpp"

namespace vsynth {

Tree::Tree(const Vec3& root_position, const Vec3& root_direction, double beta) {
  Node root;
  root.id = 0;
  root.position = root_position;
  root.direction = root_direction;
  root.beta = beta;
  root.kind = NodeKind::root;
  root.origin = NodeOrigin::root;
  nodes_.push_back(std::move(root));
  root_ = 0;
  alive_count_ = 1;
  leaves_.push_back(0);
}

Tree Tree::from_nodes(std::vector<Node> nodes) {
  Tree tree;
  if (nodes.empty()) return tree;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    Node& node = nodes[n];
    if (node.id != n) throw Error(Errc::ParseError, "node ids must be 0..n-1 in order");
    node.alive = true;
    node.children.clear();
    if (n == 0) {
      if (node.parent) throw Error(Errc::ParseError, "node 0 must be the root");
      continue;
    }
    if (!node.parent || *node.parent >= n)
      throw Error(Errc::ParseError, "node " + std::to_string(n) + " has an invalid parent");
    auto& siblings = nodes[*node.parent].children;
    if (siblings.size() >= 2) throw Error(Errc::ParseError, "node with more than two children");
    siblings.push_back(node.id);
  }
  tree.nodes_ = std::move(nodes);
  tree.alive_count_ = tree.nodes_.size();
  for (const Node& node : tree.nodes_) {
    tree.refresh_kind(node.id);
    if (node.children.empty()) tree.leaves_.push_back(node.id);
  }
  return tree;
}

NodeId Tree::add_child(NodeId parent, const Vec3& direction, double beta, NodeOrigin origin) {
  Node& p = nodes_.at(parent);
  if (!p.alive) throw Error(Errc::NotEligible, "cannot add a child to a removed node");
  if (p.children.size() >= 2) throw Error(Errc::NotEligible, "node already has two children");
  Node child;
  child.id = static_cast<NodeId>(nodes_.size());
  child.parent = parent;
  child.position = p.position + p.direction;
  child.direction = direction;
  child.beta = beta;
  child.kind = NodeKind::leaf;
  child.origin = origin;
  p.children.push_back(child.id);
  const NodeId id = child.id;
  nodes_.push_back(std::move(child));
  ++alive_count_;
  erase_value(leaves_, parent);
  insert_sorted(leaves_, id);
  refresh_kind(parent);
  return id;
}

std::vector<NodeId> Tree::subtree(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    out.push_back(n);
    const auto& ch = nodes_.at(n).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

void Tree::remove_subtree(NodeId id) {
  Node& target = nodes_.at(id);
  if (!target.alive) return;
  if (!target.parent) throw Error(Errc::NotEligible, "the root cannot be removed");
  for (NodeId n : subtree(id)) {
    Node& node = nodes_[n];
    node.alive = false;
    node.children.clear();
    --alive_count_;
    erase_value(leaves_, n);
    erase_value(discontinued_, n);
    erase_value(candidates_, n);
  }
  Node& parent = nodes_[*target.parent];
  erase_value(parent.children, id);
  if (parent.children.empty()) insert_sorted(leaves_, parent.id);
  refresh_kind(parent.id);
}

void Tree::scale_branch(NodeId id, double factor, double min_radius) {
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    Node& node = nodes_[n];
    if (!node.alive) continue;
    node.beta *= factor;
    if (n != id && node.radius() < min_radius) {
      remove_subtree(n);
      continue;
    }
    for (NodeId c : node.children) stack.push_back(c);
  }
}

void Tree::set_direction(NodeId id, const Vec3& direction) {
  Node& node = nodes_.at(id);
  const Vec3 delta = direction - node.direction;
  node.direction = direction;
  for (NodeId c : node.children)
    for (NodeId n : subtree(c)) nodes_[n].position += delta;
}

void Tree::discontinue(NodeId leaf) {
  erase_value(leaves_, leaf);
  insert_sorted(discontinued_, leaf);
}

void Tree::drop_bifurcation_candidate(NodeId id) { erase_value(candidates_, id); }

void Tree::refresh_kind(NodeId id) {
  Node& n = nodes_[id];
  if (!n.parent) {
    n.kind = NodeKind::root;
    return;
  }
  switch (n.children.size()) {
    case 0: n.kind = NodeKind::leaf; break;
    case 1: n.kind = NodeKind::inter; break;
    default: n.kind = NodeKind::bifurcation; break;
  }
}

void Tree::insert_sorted(std::vector<NodeId>& v, NodeId id) {
  const auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) v.insert(it, id);
}

void Tree::erase_value(std::vector<NodeId>& v, NodeId id) {
  const auto it = std::find(v.begin(), v.end(), id);
  if (it != v.end()) v.erase(it);
}

}  // namespace vsynth
