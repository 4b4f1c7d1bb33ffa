#include "kforest/combinatorics.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <stdexcept>

namespace kforest {

BinaryShape BinaryShape::leaf(Label label) {
  BinaryShape s;
  s.leaves_ = {label};
  return s;
}

BinaryShape BinaryShape::join(BinaryShape a, BinaryShape b) {
  if (b.min_leaf() < a.min_leaf()) std::swap(a, b);
  BinaryShape s;
  s.leaves_.reserve(a.leaves_.size() + b.leaves_.size());
  std::merge(a.leaves_.begin(), a.leaves_.end(), b.leaves_.begin(), b.leaves_.end(),
             std::back_inserter(s.leaves_));
  if (std::adjacent_find(s.leaves_.begin(), s.leaves_.end()) != s.leaves_.end())
    throw std::invalid_argument("BinaryShape::join: leaf sets overlap");
  s.children_ = std::make_shared<const std::pair<BinaryShape, BinaryShape>>(std::move(a),
                                                                            std::move(b));
  return s;
}

BinaryShape BinaryShape::graft(std::size_t site, Label new_leaf) const {
  if (site >= site_count()) throw std::out_of_range("BinaryShape::graft: bad site");
  if (site == 0) return join(*this, leaf(new_leaf));
  const std::size_t left_sites = left().site_count();
  if (site <= left_sites) return join(left().graft(site - 1, new_leaf), right());
  return join(left(), right().graft(site - 1 - left_sites, new_leaf));
}

bool operator==(const BinaryShape& a, const BinaryShape& b) {
  if (a.leaves_ != b.leaves_) return false;
  if (a.is_leaf() || b.is_leaf()) return a.is_leaf() == b.is_leaf();
  return a.left() == b.left() && a.right() == b.right();
}

PartitionOfL make_partition(std::vector<std::vector<Label>> blocks) {
  std::vector<Label> all;
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition block is empty");
    std::sort(b.begin(), b.end());
    all.insert(all.end(), b.begin(), b.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("partition blocks overlap");
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return PartitionOfL{std::move(blocks)};
}

BouquetConfig::BouquetConfig(std::vector<BinaryShape> shapes) : shapes_(std::move(shapes)) {
  if (shapes_.empty()) throw std::invalid_argument("bouquet needs at least one tree");
  std::sort(shapes_.begin(), shapes_.end(),
            [](const auto& a, const auto& b) { return a.min_leaf() < b.min_leaf(); });
  std::vector<std::vector<Label>> blocks;
  for (const auto& s : shapes_) blocks.push_back(s.leaves());
  make_partition(std::move(blocks));  // validates disjointness
}

std::size_t BouquetConfig::leaf_count() const {
  std::size_t n = 0;
  for (const auto& s : shapes_) n += s.leaf_count();
  return n;
}

PartitionOfL BouquetConfig::partition() const {
  PartitionOfL p;
  for (const auto& s : shapes_) p.blocks.push_back(s.leaves());
  return p;
}

BigInt count_binary_shapes(std::size_t l) {
  if (l == 0) throw std::invalid_argument("count_binary_shapes: marked set must be nonempty");
  BigInt c = 1;
  for (std::size_t i = 1; i < l; ++i) c *= 2 * i - 1;
  return c;
}

std::vector<BinaryShape> enumerate_binary_shapes(std::span<const Label> leaf_set) {
  if (leaf_set.empty()) throw std::invalid_argument("enumerate_binary_shapes: empty leaf set");
  std::vector<Label> labels(leaf_set.begin(), leaf_set.end());
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw std::invalid_argument("enumerate_binary_shapes: repeated label");

  std::vector<BinaryShape> current{BinaryShape::leaf(labels[0])};
  for (std::size_t k = 1; k < labels.size(); ++k) {
    std::vector<BinaryShape> next;
    next.reserve(current.size() * (2 * k - 1));
    for (const auto& s : current)
      for (std::size_t site = 0; site < s.site_count(); ++site)
        next.push_back(s.graft(site, labels[k]));
    current = std::move(next);
  }
  return current;
}

BigInt count_bouquets(std::size_t l, std::size_t r) {
  if (l == 0) throw std::invalid_argument("count_bouquets: l must be positive");
  if (r < 1 || r > l) return 0;
  // row[r] = C_{k,r}
  std::vector<BigInt> row(l + 2, 0);
  row[1] = 1;
  for (std::size_t k = 2; k <= l; ++k) {
    std::vector<BigInt> next(l + 2, 0);
    for (std::size_t j = 1; j <= k; ++j) {
      BigInt stay = 0;
      if (j <= k - 1) stay = BigInt(2 * k - j - 2) * row[j];
      next[j] = stay + row[j - 1];
    }
    row = std::move(next);
  }
  return row[r];
}

std::vector<PartitionOfL> enumerate_set_partitions(std::span<const Label> labels,
                                                   std::size_t blocks) {
  std::vector<Label> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<PartitionOfL> out;
  if (sorted.empty()) return out;

  // Restricted growth strings: label k goes to an existing block or opens a new one.
  std::vector<std::vector<Label>> current;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == sorted.size()) {
      if (blocks == 0 || current.size() == blocks) out.push_back(PartitionOfL{current});
      return;
    }
    const std::size_t remaining = sorted.size() - k;
    if (blocks != 0 && current.size() + remaining < blocks) return;
    // Index, not reference: the recursion may reallocate `current`.
    for (std::size_t i = 0; i < current.size(); ++i) {
      current[i].push_back(sorted[k]);
      rec(k + 1);
      current[i].pop_back();
    }
    if (blocks == 0 || current.size() < blocks) {
      current.push_back({sorted[k]});
      rec(k + 1);
      current.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<BouquetConfig> enumerate_bouquets(std::span<const Label> labels, std::size_t r) {
  if (r < 1 || r > labels.size())
    throw std::invalid_argument("enumerate_bouquets: block count out of range");
  std::vector<BouquetConfig> out;
  for (const auto& p : enumerate_set_partitions(labels, r)) {
    std::vector<std::vector<BinaryShape>> per_block;
    for (const auto& b : p.blocks) per_block.push_back(enumerate_binary_shapes(b));
    std::vector<std::size_t> idx(per_block.size(), 0);
    for (;;) {
      std::vector<BinaryShape> pick;
      for (std::size_t j = 0; j < idx.size(); ++j) pick.push_back(per_block[j][idx[j]]);
      out.emplace_back(std::move(pick));
      std::size_t j = 0;
      while (j < idx.size() && ++idx[j] == per_block[j].size()) idx[j++] = 0;
      if (j == idx.size()) break;
    }
  }
  return out;
}

namespace {

void render(const BinaryShape& s, std::string& out) {
  if (s.is_leaf()) {
    out += std::to_string(s.min_leaf());
    return;
  }
  out += '(';
  render(s.left(), out);
  out += ',';
  render(s.right(), out);
  out += ')';
}

class ShapeParser {
 public:
  explicit ShapeParser(std::string_view t) : text_(t) {}

  BinaryShape parse_top() {
    BinaryShape s = parse();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return s;
  }

 private:
  BinaryShape parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (text_[pos_] != '(') return BinaryShape::leaf(parse_label());
    ++pos_;
    BinaryShape first = parse();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') {  // "(k)" wraps a lone leaf
      ++pos_;
      return first;
    }
    expect(',');
    BinaryShape second = parse();
    skip_ws();
    expect(')');
    return BinaryShape::join(std::move(first), std::move(second));
  }

  Label parse_label() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a label");
    const auto value = std::stoul(std::string(text_.substr(start, pos_ - start)));
    if (value == 0) fail("labels are positive");
    return static_cast<Label>(value);
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse_shape: " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string canonical_string(const BinaryShape& shape) {
  std::string out;
  if (shape.is_leaf()) {
    out = "(" + std::to_string(shape.min_leaf()) + ")";
  } else {
    render(shape, out);
  }
  return out;
}

std::string canonical_string(const BouquetConfig& config) {
  std::string out;
  for (std::size_t j = 0; j < config.shapes().size(); ++j) {
    if (j) out += '|';
    out += '(' + canonical_string(config.shapes()[j]) + ')';
  }
  return out;
}

BinaryShape parse_shape(std::string_view text) { return ShapeParser(text).parse_top(); }

}  // namespace kforest
