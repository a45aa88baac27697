#include "vsynth/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "vsynth/error.hpp"

namespace vsynth {

namespace {

constexpr double kCosineTolerance = 1e-9;
constexpr int kUnbounded = std::numeric_limits<int>::max();

// Nodes between `id` and the nearest bifurcation ancestor, capped at `cap`.
int distance_to_bifurcation_above(const Tree& tree, NodeId id, int cap) {
  int steps = 0;
  std::optional<NodeId> cur = tree.node(id).parent;
  while (cur && steps < cap) {
    ++steps;
    if (tree.node(*cur).children.size() >= 2) return steps;
    cur = tree.node(*cur).parent;
  }
  return cur ? cap : kUnbounded;
}

// Nodes down the single-child chain from `id` to the next bifurcation, capped at `cap`.
int distance_to_bifurcation_below(const Tree& tree, NodeId id, int cap) {
  int steps = 0;
  const Node* cur = &tree.node(id);
  while (cur->children.size() == 1 && steps < cap) {
    ++steps;
    cur = &tree.node(cur->children.front());
    if (cur->children.size() >= 2) return steps;
  }
  return cur->children.empty() ? kUnbounded : cap;
}

bool nearly_parallel(const Vec3& a, const Vec3& b) {
  return a.cross(b).norm() <= 1e-12 * a.norm() * b.norm();
}

std::vector<NodeId> collect_candidates(const Tree& tree, const GrowthParams& params,
                                       const std::set<NodeId>& degenerate) {
  std::vector<NodeId> out;
  for (const Node& n : tree.arena())
    if (n.alive && !degenerate.contains(n.id) && is_bifurcation_eligible(tree, n.id, params))
      out.push_back(n.id);
  return out;
}

void extend_leaf(Tree& tree, NodeId leaf_id, const GrowthParams& params, Atlas& atlas, Rng& rng) {
  const Node& leaf = tree.node(leaf_id);
  const Vec3 position = leaf.position + leaf.direction;
  if (!atlas.in_support(position)) {
    tree.discontinue(leaf_id);
    return;
  }
  const double parent_mag = leaf.direction.norm();
  const double radius = leaf.radius();
  const double beta = leaf.beta;
  Vec3 direction = perturb_direction(leaf.direction, params.sigma_angle, rng);
  if (const auto target = sample_target(atlas, position, params.target_search_factor * radius)) {
    try {
      direction = apply_target_pull(direction, *target - position, params.lambda_pull, parent_mag);
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateBlend) throw;
    }
  }
  tree.add_child(leaf_id, direction, beta, NodeOrigin::extension);
  decrement_neighborhood(atlas, position, radius, params.decrement_amount,
                         params.decrement_radius_factor);
}

}  // namespace

void GrowthParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::InvalidParams, what);
  };
  require(std::isfinite(sigma_angle) && sigma_angle >= 0.0, "sigma_angle must be >= 0");
  require(beta0 > 1.0 && std::isfinite(beta0), "beta0 must exceed 1.0");
  require(gamma > 2.0 && gamma <= 3.0, "gamma must lie in (2, 3]");
  require(r_min > 0.0 && std::isfinite(r_min), "r_min must be positive");
  require(bifurcation_prob >= 0.0 && bifurcation_prob <= 1.0, "bifurcation_prob must lie in [0,1]");
  require(min_bifurcation_spacing >= 0, "min_bifurcation_spacing must be >= 0");
  require(lambda_pull >= 0.0 && lambda_pull <= 1.0, "lambda_pull must lie in [0,1]");
  require(radius_sigma_fraction >= 0.0 && std::isfinite(radius_sigma_fraction),
          "radius_sigma_fraction must be >= 0");
  require(max_nodes >= 1, "max_nodes must be >= 1");
  require(target_search_factor > 0.0, "target_search_factor must be positive");
  require(decrement_amount >= 0.0, "decrement_amount must be >= 0");
  require(decrement_radius_factor > 0.0, "decrement_radius_factor must be positive");
}

Vec3 perturb_direction(const Vec3& d, double sigma_angle, Rng& rng) {
  const double mag = d.norm();
  if (!(mag > 0.0)) throw Error(Errc::ZeroDirection, "cannot perturb a zero direction");
  if (!(sigma_angle >= 0.0)) throw Error(Errc::InvalidParams, "sigma_angle must be >= 0");
  if (sigma_angle == 0.0) return d;
  std::normal_distribution<double> noise(0.0, sigma_angle);
  const double polar = std::acos(std::clamp(d.z() / mag, -1.0, 1.0)) + noise(rng);
  const double azimuth = std::atan2(d.y(), d.x()) + noise(rng);
  const Vec3 perturbed(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                       std::cos(polar));
  return mag * perturbed / perturbed.norm();
}

double bifurcation_angle(double r_parent, double r_child, double r_existing) {
  if (!(r_parent > 0.0 && r_child > 0.0 && r_existing >= 0.0))
    throw Error(Errc::InvalidRadii, "bifurcation radii must be positive");
  const double p2 = r_parent * r_parent;
  const double c2 = r_child * r_child;
  const double e2 = r_existing * r_existing;
  double cosine = (p2 * p2 + c2 * c2 - e2 * e2) / (2.0 * p2 * c2);
  if (cosine > 1.0 + kCosineTolerance || cosine < -1.0 - kCosineTolerance)
    throw Error(Errc::InvalidRadii, "bifurcation cosine " + std::to_string(cosine) + " outside [-1,1]");
  cosine = std::clamp(cosine, -1.0, 1.0);
  return std::acos(cosine);
}

double murray_expected_radius(double r_parent, double gamma) {
  return std::pow(2.0, -1.0 / gamma) * r_parent;
}

double murray_existing_radius(double r_parent, double r_child, double gamma) {
  if (!(r_child > 0.0 && r_child < r_parent))
    throw Error(Errc::InvalidRadii, "need 0 < r_child < r_parent");
  return std::pow(std::pow(r_parent, gamma) - std::pow(r_child, gamma), 1.0 / gamma);
}

Vec3 apply_target_pull(const Vec3& d_old, const Vec3& target, double lambda, double parent_mag) {
  const Vec3 blended = d_old + lambda * (target - d_old);
  const double n = blended.norm();
  if (!(n > 0.0)) throw Error(Errc::DegenerateBlend, "target pull produced a zero vector");
  return parent_mag * blended / n;
}

bool is_bifurcation_eligible(const Tree& tree, NodeId id, const GrowthParams& params) {
  const Node& n = tree.node(id);
  if (!n.alive || n.children.size() != 1) return false;
  if (n.radius() < 2.0 * params.r_min) return false;
  const int spacing = params.min_bifurcation_spacing;
  if (spacing <= 0) return true;
  return distance_to_bifurcation_above(tree, id, spacing) >= spacing &&
         distance_to_bifurcation_below(tree, id, spacing) >= spacing;
}

BifurcationOutcome spawn_bifurcation(Tree& tree, NodeId id, const GrowthParams& params, Rng& rng) {
  if (!is_bifurcation_eligible(tree, id, params))
    throw Error(Errc::NotEligible, "node " + std::to_string(id) + " cannot bifurcate");
  const double r_parent = tree.radius(id);
  const double r_mu = murray_expected_radius(r_parent, params.gamma);
  std::normal_distribution<double> sample(r_mu, r_mu * params.radius_sigma_fraction);
  const double eps = 1e-9 * r_parent;
  const double r_child = std::clamp(sample(rng), eps, r_parent - eps);
  return bifurcate_with_radius(tree, id, params, r_child, rng);
}

BifurcationOutcome bifurcate_with_radius(Tree& tree, NodeId id, const GrowthParams& params,
                                         double r_child, Rng& rng) {
  const Node& parent = tree.node(id);
  if (!parent.alive || parent.children.size() != 1)
    throw Error(Errc::NotEligible, "bifurcation needs exactly one existing child");
  const NodeId existing = parent.children.front();
  const Vec3 d_parent = parent.direction;
  const double beta_parent = parent.beta;
  const double r_parent = parent.radius();
  const double r_existing_old = tree.radius(existing);
  if (!(r_child > 0.0 && r_child < r_parent))
    throw Error(Errc::InvalidRadii, "new child radius must lie in (0, r_parent)");

  const double r_existing_new = murray_existing_radius(r_parent, r_child, params.gamma);
  if (r_child < params.r_min) {
    // The survivor takes over the parent radius.
    if (r_existing_old != r_parent)
      tree.scale_branch(existing, r_parent / r_existing_old, params.r_min);
    return BifurcationOutcome::pruned_new;
  }

  if (nearly_parallel(d_parent, tree.node(existing).direction)) {
    // No pivot plane; re-perturb the existing child once and retry. A child that
    // already bifurcates keeps its direction so its own angles stay valid.
    if (tree.node(existing).children.size() >= 2)
      throw Error(Errc::ParallelDirections, "parent and existing child are collinear");
    tree.set_direction(existing,
                       perturb_direction(tree.node(existing).direction, params.sigma_angle, rng));
    if (nearly_parallel(d_parent, tree.node(existing).direction))
      throw Error(Errc::ParallelDirections, "parent and existing child are collinear");
  }
  const Vec3 d_existing = tree.node(existing).direction;
  const double phi_child = bifurcation_angle(r_parent, r_child, r_existing_new);
  const double phi_existing = angle_between(d_parent, d_existing);
  // Swing the existing child's direction through the parent to the far side of the plane.
  const Vec3 pivot = d_parent.cross(d_existing);
  const Vec3 d_new = rotate_about_axis(d_existing, pivot, -(phi_child + phi_existing));
  const Vec3 unit_new = d_new / d_new.norm();

  if (r_existing_new < params.r_min) {
    tree.remove_subtree(existing);
    tree.add_child(id, unit_new * (r_parent / beta_parent), beta_parent, NodeOrigin::bifurcation);
    return BifurcationOutcome::pruned_existing;
  }
  tree.scale_branch(existing, r_existing_new / r_existing_old, params.r_min);
  const double beta_new = r_existing_new / d_existing.norm();
  tree.set_beta(existing, beta_new);
  tree.add_child(id, unit_new * (r_child / beta_new), beta_new, NodeOrigin::bifurcation);
  return BifurcationOutcome::added;
}

Tree grow_tree(const GrowthParams& params, Atlas& atlas, const Vec3& root_position,
               const Vec3& root_direction, Rng& rng) {
  params.validate();
  if (!root_position.allFinite() || !atlas.in_support(root_position))
    throw Error(Errc::RootOutOfSupport, "root position is outside the atlas support");
  if (!(root_direction.norm() > 0.0) || !root_direction.allFinite())
    throw Error(Errc::ZeroDirection, "root direction must be non-zero");

  Tree tree(root_position, root_direction, params.beta0);
  decrement_neighborhood(atlas, root_position, tree.radius(tree.root()), params.decrement_amount,
                         params.decrement_radius_factor);

  std::set<NodeId> degenerate;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const auto max_nodes = static_cast<std::size_t>(params.max_nodes);
  // Pruned bifurcations add nothing; bail out if growth stalls for this long.
  constexpr int kStallLimit = 100000;
  int stalled = 0;

  while (tree.node_count() < max_nodes && stalled < kStallLimit) {
    const auto& leaves = tree.leaves();
    const auto& candidates = tree.bifurcation_candidates();
    if (leaves.empty() && candidates.empty()) break;
    const std::size_t before = tree.node_count();

    // An empty list hands its turn to the other one, unless that action can
    // never be drawn; then growth is over.
    if (leaves.empty() && params.bifurcation_prob == 0.0) break;
    if (candidates.empty() && params.bifurcation_prob == 1.0) break;
    bool bifurcate = coin(rng) < params.bifurcation_prob;
    if (bifurcate && candidates.empty()) bifurcate = false;
    if (!bifurcate && leaves.empty()) bifurcate = true;

    if (bifurcate) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const NodeId id = candidates[pick(rng)];
      try {
        const auto outcome = spawn_bifurcation(tree, id, params, rng);
        if (outcome != BifurcationOutcome::pruned_new) {
          const Node& created = tree.node(tree.node(id).children.back());
          decrement_neighborhood(atlas, created.position, created.radius(),
                                 params.decrement_amount, params.decrement_radius_factor);
        }
      } catch (const Error& e) {
        if (e.code() != Errc::ParallelDirections) throw;
        degenerate.insert(id);
      }
      tree.set_bifurcation_candidates(collect_candidates(tree, params, degenerate));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
      const NodeId leaf = leaves[pick(rng)];
      extend_leaf(tree, leaf, params, atlas, rng);
      if (tree.node(leaf).children.size() == 1 && !degenerate.contains(leaf) &&
          is_bifurcation_eligible(tree, leaf, params)) {
        auto next = tree.bifurcation_candidates();
        next.insert(std::lower_bound(next.begin(), next.end(), leaf), leaf);
        tree.set_bifurcation_candidates(std::move(next));
      }
    }
    stalled = tree.node_count() > before ? 0 : stalled + 1;
  }
  return tree;
}

Tree grow_tree(const GrowthParams& params, Atlas& atlas, const Vec3& root_position,
               const Vec3& root_direction) {
  Rng rng(params.seed);
  return grow_tree(params, atlas, root_position, root_direction, rng);
}

}  // namespace vsynth
