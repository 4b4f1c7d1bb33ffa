// Embedded Δ-rooted subtrees, their reduction to (shape, extension vector),
// and the contour (Dyck path) encoding.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kforest/combinatorics.hpp"

namespace kforest {

using Vertex = std::uint32_t;

// The absorbing root Δ. Graph vertices are 1..N.
inline constexpr Vertex kRoot = 0;

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parent map of a Δ-rooted tree on a subset of {1..N}. `edges` holds
// (child, parent) pairs; the order is the order in which vertices joined the
// tree and is used as child order where a function asks for stored order.
struct RootedSpanningSubtree {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<Label> marked;

  std::size_t vertex_count() const { return edges.size(); }
};

enum class Classification { kBinaryBouquet, kDegenerate };

std::string_view to_string(Classification c);

struct ReducedVertex {
  std::optional<Label> label;   // set for vertices of L
  int parent = -1;              // index into ReducedObservation::vertices, -1 = Δ
  std::vector<int> children;    // plane order
  std::vector<Label> leaf_set;  // marked labels at or above this vertex
  std::uint64_t extension = 0;  // suppressed vertices between this one and its parent
};

// Equivalence class of an embedded L-tree: the reduced shape plus the
// extension vector. Reduced vertices appear in first-visit contour order.
struct ReducedObservation {
  std::size_t l = 0;
  std::vector<ReducedVertex> vertices;
  std::vector<int> root_children;
  Classification classification = Classification::kDegenerate;
  std::size_t r = 0;             // number of Δ-children
  std::uint64_t d = 0;           // embedded vertices excluding Δ
  std::uint64_t inner_count = 0; // d - l
  std::string shape_key;
  std::optional<BouquetConfig> bouquet;  // set for binary bouquets

  std::vector<std::uint64_t> extensions() const;
  std::uint64_t extension_sum() const;
  // shape_key followed by '#' and the comma separated extension vector.
  std::string class_key() const;
  // Blocks = leaf sets of the Δ-children.
  PartitionOfL partition() const;

  // Builds the observation of a binary bouquet with the given extension
  // vector (length 2l - r, contour order).
  static ReducedObservation from_bouquet(const BouquetConfig& config,
                                         std::span<const std::uint64_t> extensions);
};

// Throws StructuralError if a marked label is missing, the parent map is not
// a tree hanging from Δ, or a leaf is unmarked.
ReducedObservation reduce_observation(const RootedSpanningSubtree& tree);

struct DyckPath {
  std::vector<std::int8_t> steps;  // +1 / -1
  std::vector<Label> marked;
  std::vector<std::size_t> marks;  // first-visit time of marked[i]

  std::vector<std::int64_t> heights() const;
  bool valid() const;
};

// Depth-first contour from Δ; children are visited in plane order (smallest
// marked label above them first).
DyckPath contour_encode(const RootedSpanningSubtree& tree);

// Rebuilds a plane tree. Unmarked vertices get fresh labels above max(L);
// children are stored in path order.
RootedSpanningSubtree contour_decode(const DyckPath& path);

// Groups marked labels by the excursion above 0 that first visits them.
PartitionOfL excursion_partition(const DyckPath& path);

// Plane tree with marked labels shown and unmarked vertices as '*'. With
// canonical_order = false children are taken in stored order.
std::string plane_shape_string(const RootedSpanningSubtree& tree, bool canonical_order = true);

}  // namespace kforest
