// Binary leaf-labelled tree classes, set partitions and bouquets.
//
// A binary shape on a leaf set B is a rooted binary tree whose leaves carry
// the labels of B. Children are kept in plane order: the child holding the
// smaller minimum leaf label comes first. A bouquet is a list of such shapes
// on the blocks of a partition of L, blocks ordered by their minimum element.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kforest {

using Label = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

class BinaryShape {
 public:
  static BinaryShape leaf(Label label);
  // Children are reordered so the smaller minimum leaf comes first.
  static BinaryShape join(BinaryShape a, BinaryShape b);

  bool is_leaf() const { return children_ == nullptr; }
  Label min_leaf() const { return leaves_.front(); }
  const std::vector<Label>& leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t internal_count() const { return leaves_.size() - 1; }

  // Only valid when !is_leaf().
  const BinaryShape& left() const { return children_->first; }
  const BinaryShape& right() const { return children_->second; }

  // Insertion sites are the 2m-1 vertices of the tree, numbered in preorder
  // (site 0 is the root). Grafting at a site inserts a new internal vertex on
  // the edge above that vertex and hangs the new leaf from it.
  std::size_t site_count() const { return 2 * leaves_.size() - 1; }
  BinaryShape graft(std::size_t site, Label new_leaf) const;

  friend bool operator==(const BinaryShape& a, const BinaryShape& b);

 private:
  BinaryShape() = default;

  std::vector<Label> leaves_;  // sorted
  std::shared_ptr<const std::pair<BinaryShape, BinaryShape>> children_;
};

struct PartitionOfL {
  // Each block sorted; blocks ordered by minimum element.
  std::vector<std::vector<Label>> blocks;

  std::size_t size() const { return blocks.size(); }
  friend bool operator==(const PartitionOfL&, const PartitionOfL&) = default;
};

// Puts blocks into canonical order. Throws if blocks are empty or overlap.
PartitionOfL make_partition(std::vector<std::vector<Label>> blocks);

class BouquetConfig {
 public:
  // Shapes must have pairwise disjoint leaf sets; they are sorted by minimum.
  explicit BouquetConfig(std::vector<BinaryShape> shapes);

  const std::vector<BinaryShape>& shapes() const { return shapes_; }
  std::size_t block_count() const { return shapes_.size(); }
  std::size_t leaf_count() const;
  PartitionOfL partition() const;

  friend bool operator==(const BouquetConfig&, const BouquetConfig&) = default;

 private:
  std::vector<BinaryShape> shapes_;
};

// c_l = (2l-3)!!, the number of binary shapes on l labelled leaves.
BigInt count_binary_shapes(std::size_t l);

// Every shape exactly once, built by grafting labels in increasing order.
std::vector<BinaryShape> enumerate_binary_shapes(std::span<const Label> leaf_set);

// C_{l,r}: number of bouquets of r binary trees on l labelled leaves.
BigInt count_bouquets(std::size_t l, std::size_t r);

// All set partitions of `labels` (any order accepted); optionally only those
// with exactly `blocks` blocks (0 = all).
std::vector<PartitionOfL> enumerate_set_partitions(std::span<const Label> labels,
                                                   std::size_t blocks = 0);

std::vector<BouquetConfig> enumerate_bouquets(std::span<const Label> labels, std::size_t r);

// Shapes print as nested parentheses, e.g. "(1,(2,3))"; a lone leaf as "(2)".
// Bouquets wrap each block in one more pair and join blocks with '|':
// "((1,3))|((2))".
std::string canonical_string(const BinaryShape& shape);
std::string canonical_string(const BouquetConfig& config);

// Accepts any child order, e.g. "((2,3),1)", and returns the canonical shape.
BinaryShape parse_shape(std::string_view text);

}  // namespace kforest
