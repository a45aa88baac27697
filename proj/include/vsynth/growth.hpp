#pragma once

#include <numbers>
#include <optional>

#include "vsynth/atlas.hpp"
#include "vsynth/rng.hpp"
#include "vsynth/tree.hpp"

namespace vsynth {

struct GrowthParams {
  /// Std-dev of the Gaussian noise added to both spherical angles of a leaf extension.
  double sigma_angle = std::numbers::pi / 32.0;
  /// Radius / direction-length ratio of the root (and of every extension child).
  double beta0 = 3.0;
  /// Murray bifurcation exponent.
  double gamma = 3.0;
  double r_min = 0.5;
  double bifurcation_prob = 0.1;
  /// A node must be at least this many nodes along its vessel from any bifurcation.
  int min_bifurcation_spacing = 3;
  /// Fraction of the way a new direction turns toward the atlas target.
  double lambda_pull = 0.3;
  /// New-child radius std-dev as a fraction of the Murray expected radius.
  double radius_sigma_fraction = 1.0 / 32.0;
  int max_nodes = 1000;
  std::uint64_t seed = 0;

  /// Atlas search sphere radius = target_search_factor * node radius.
  double target_search_factor = 10.0;
  /// Amount subtracted from the atlas around every new node.
  double decrement_amount = 0.1;
  /// Decrement sphere radius = decrement_radius_factor * node radius.
  double decrement_radius_factor = 1.0;

  /// Throws Errc::InvalidParams on any violated range.
  void validate() const;
};

/// Jitter the polar and azimuthal angles of `d` by independent N(0, sigma)
/// draws (polar first) and rescale to the input length.
Vec3 perturb_direction(const Vec3& d, double sigma_angle, Rng& rng);

/// Angle between the new child and its parent given the three radii.
double bifurcation_angle(double r_parent, double r_child, double r_existing);

/// Symmetric-split radius 2^(-1/gamma) * r_parent.
double murray_expected_radius(double r_parent, double gamma);

/// Sibling radius (r_p^gamma - r_c^gamma)^(1/gamma) that keeps Murray's law.
double murray_existing_radius(double r_parent, double r_child, double gamma);

/// parent_mag * normalize(d_old + lambda * (target - d_old)).
Vec3 apply_target_pull(const Vec3& d_old, const Vec3& target, double lambda, double parent_mag);

enum class BifurcationOutcome { added, pruned_new, pruned_existing };

/// Radius, leaf status and bifurcation-spacing checks.
bool is_bifurcation_eligible(const Tree& tree, NodeId id, const GrowthParams& params);

/// Sample r_c ~ N(r_mu, r_mu * radius_sigma_fraction), clip it to (0, r_p) and
/// bifurcate `id` with it.
BifurcationOutcome spawn_bifurcation(Tree& tree, NodeId id, const GrowthParams& params, Rng& rng);

/// Bifurcate `id` with a given new-child radius. `rng` is consumed only when the
/// existing child is collinear with the parent and has to be re-perturbed.
BifurcationOutcome bifurcate_with_radius(Tree& tree, NodeId id, const GrowthParams& params,
                                         double r_child, Rng& rng);

/// Grow a tree from a root inside the atlas support. The atlas is decremented
/// around every created node; pass a copy if the caller needs the original.
Tree grow_tree(const GrowthParams& params, Atlas& atlas, const Vec3& root_position,
               const Vec3& root_direction, Rng& rng);

/// Convenience overload seeding its own stream from `params.seed`.
Tree grow_tree(const GrowthParams& params, Atlas& atlas, const Vec3& root_position,
               const Vec3& root_direction);

}  // namespace vsynth
