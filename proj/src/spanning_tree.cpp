#include "kforest/spanning_tree.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace kforest {

namespace {

constexpr Label kNoLabel = std::numeric_limits<Label>::max();

// Compact index over the tree; index 0 is Δ.
struct IndexedTree {
  std::vector<Vertex> id;
  std::vector<std::vector<std::size_t>> children;
  std::vector<Label> mark;       // kNoLabel if unmarked
  std::vector<Label> min_above;  // smallest marked label in the subtree

  IndexedTree(const RootedSpanningSubtree& tree, bool canonical_order) {
    const std::size_t n = tree.edges.size();
    std::unordered_map<Vertex, std::size_t> index;
    index.reserve(n + 1);
    index.emplace(kRoot, 0);
    id.reserve(n + 1);
    id.push_back(kRoot);
    for (const auto& [child, parent] : tree.edges) {
      (void)parent;
      if (child == kRoot) throw StructuralError("Δ cannot have a parent");
      if (!index.emplace(child, id.size()).second)
        throw StructuralError("vertex " + std::to_string(child) + " has two parents");
      id.push_back(child);
    }
    children.assign(n + 1, {});
    for (const auto& [child, parent] : tree.edges) {
      auto it = index.find(parent);
      if (it == index.end())
        throw StructuralError("parent " + std::to_string(parent) + " is not in the tree");
      children[it->second].push_back(index.at(child));
    }
    mark.assign(n + 1, kNoLabel);
    for (Label m : tree.marked) {
      auto it = index.find(m);
      if (it == index.end() || m == kRoot)
        throw StructuralError("marked vertex " + std::to_string(m) + " is not in the tree");
      mark[it->second] = m;
    }

    // Preorder from Δ; every vertex must be reached exactly once.
    std::vector<std::size_t> order;
    order.reserve(n + 1);
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (std::size_t c : children[v]) stack.push_back(c);
    }
    if (order.size() != n + 1) throw StructuralError("parent map contains a cycle");

    min_above = mark;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t v = *it;
      if (v != 0 && children[v].empty() && mark[v] == kNoLabel)
        throw StructuralError("leaf " + std::to_string(id[v]) + " is not marked");
      for (std::size_t c : children[v]) min_above[v] = std::min(min_above[v], min_above[c]);
    }
    if (canonical_order) {
      for (auto& ch : children)
        std::sort(ch.begin(), ch.end(),
                  [&](std::size_t a, std::size_t b) { return min_above[a] < min_above[b]; });
    }
  }

  std::size_t size() const { return id.size(); }
};

void render_reduced(const ReducedObservation& obs, int v, std::string& out) {
  const ReducedVertex& x = obs.vertices[static_cast<std::size_t>(v)];
  auto render_children = [&](char open, char close) {
    out += open;
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      if (i) out += ',';
      render_reduced(obs, x.children[i], out);
    }
    out += close;
  };
  if (!x.label) {
    render_children('(', ')');
  } else {
    out += std::to_string(*x.label);
    if (!x.children.empty()) render_children('[', ']');
  }
}

std::string render_shape_key(const ReducedObservation& obs) {
  std::string key;
  for (std::size_t j = 0; j < obs.root_children.size(); ++j) {
    if (j) key += '|';
    std::string inner;
    render_reduced(obs, obs.root_children[j], inner);
    if (inner.front() != '(') inner = '(' + inner + ')';
    key += '(' + inner + ')';
  }
  return key;
}

BinaryShape to_shape(const ReducedObservation& obs, int v) {
  const ReducedVertex& x = obs.vertices[static_cast<std::size_t>(v)];
  if (x.children.empty()) return BinaryShape::leaf(*x.label);
  return BinaryShape::join(to_shape(obs, x.children[0]), to_shape(obs, x.children[1]));
}

void finish_observation(ReducedObservation& obs) {
  // Leaf sets, children before parents (vertices are in preorder).
  for (auto it = obs.vertices.rbegin(); it != obs.vertices.rend(); ++it) {
    auto& x = *it;
    if (x.label) x.leaf_set.push_back(*x.label);
    for (int c : x.children) {
      const auto& cs = obs.vertices[static_cast<std::size_t>(c)].leaf_set;
      x.leaf_set.insert(x.leaf_set.end(), cs.begin(), cs.end());
    }
    std::sort(x.leaf_set.begin(), x.leaf_set.end());
  }
  obs.r = obs.root_children.size();

  bool binary = true;
  for (const auto& x : obs.vertices) {
    const bool ok = x.label ? x.children.empty() : x.children.size() == 2;
    binary = binary && ok;
  }
  obs.classification = binary ? Classification::kBinaryBouquet : Classification::kDegenerate;
  obs.shape_key = render_shape_key(obs);
  if (binary) {
    std::vector<BinaryShape> shapes;
    for (int c : obs.root_children) shapes.push_back(to_shape(obs, c));
    obs.bouquet.emplace(std::move(shapes));
  }
}

}  // namespace

std::string_view to_string(Classification c) {
  return c == Classification::kBinaryBouquet ? "binary" : "degenerate";
}

std::vector<std::uint64_t> ReducedObservation::extensions() const {
  std::vector<std::uint64_t> u;
  u.reserve(vertices.size());
  for (const auto& x : vertices) u.push_back(x.extension);
  return u;
}

std::uint64_t ReducedObservation::extension_sum() const {
  std::uint64_t s = 0;
  for (const auto& x : vertices) s += x.extension;
  return s;
}

std::string ReducedObservation::class_key() const {
  std::string key = shape_key + '#';
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(vertices[i].extension);
  }
  return key;
}

PartitionOfL ReducedObservation::partition() const {
  std::vector<std::vector<Label>> blocks;
  for (int c : root_children) blocks.push_back(vertices[static_cast<std::size_t>(c)].leaf_set);
  return make_partition(std::move(blocks));
}

ReducedObservation ReducedObservation::from_bouquet(const BouquetConfig& config,
                                                    std::span<const std::uint64_t> extensions) {
  ReducedObservation obs;
  obs.l = config.leaf_count();
  const std::size_t expected = 2 * obs.l - config.block_count();
  if (extensions.size() != expected)
    throw std::invalid_argument("from_bouquet: extension vector must have length 2l-r");

  std::size_t next_u = 0;
  auto add = [&](auto&& self, const BinaryShape& s, int parent) -> int {
    const int idx = static_cast<int>(obs.vertices.size());
    ReducedVertex x;
    x.parent = parent;
    x.extension = extensions[next_u++];
    if (s.is_leaf()) x.label = s.min_leaf();
    obs.vertices.push_back(std::move(x));
    if (!s.is_leaf()) {
      const int a = self(self, s.left(), idx);
      const int b = self(self, s.right(), idx);
      obs.vertices[static_cast<std::size_t>(idx)].children = {a, b};
    }
    return idx;
  };
  for (const auto& s : config.shapes()) obs.root_children.push_back(add(add, s, -1));

  obs.inner_count = obs.extension_sum() + (obs.l - config.block_count());
  obs.d = obs.l + obs.inner_count;
  finish_observation(obs);
  return obs;
}

ReducedObservation reduce_observation(const RootedSpanningSubtree& tree) {
  const IndexedTree t(tree, true);
  ReducedObservation obs;
  obs.l = tree.marked.size();
  obs.d = t.size() - 1;
  obs.inner_count = obs.d - obs.l;

  struct Frame {
    std::size_t v;
    int anchor;            // nearest reduced ancestor, -1 = Δ
    std::uint64_t skipped;  // unreduced vertices since the anchor
  };
  std::vector<Frame> stack;
  for (auto it = t.children[0].rbegin(); it != t.children[0].rend(); ++it)
    stack.push_back({*it, -1, 0});

  std::uint64_t unmarked_reduced = 0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const auto& ch = t.children[f.v];
    const bool marked = t.mark[f.v] != kNoLabel;
    int anchor = f.anchor;
    std::uint64_t skipped = f.skipped + 1;
    if (marked || ch.size() >= 2) {
      const int idx = static_cast<int>(obs.vertices.size());
      ReducedVertex x;
      if (marked) x.label = t.mark[f.v];
      else ++unmarked_reduced;
      x.parent = f.anchor;
      x.extension = f.skipped;
      obs.vertices.push_back(std::move(x));
      if (f.anchor < 0) obs.root_children.push_back(idx);
      else obs.vertices[static_cast<std::size_t>(f.anchor)].children.push_back(idx);
      anchor = idx;
      skipped = 0;
    }
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({*it, anchor, skipped});
  }

  if (obs.extension_sum() + unmarked_reduced != obs.inner_count)
    throw std::logic_error("reduce_observation: inner vertex count mismatch");
  finish_observation(obs);
  return obs;
}

std::vector<std::int64_t> DyckPath::heights() const {
  std::vector<std::int64_t> h(steps.size() + 1, 0);
  for (std::size_t k = 0; k < steps.size(); ++k) h[k + 1] = h[k] + steps[k];
  return h;
}

bool DyckPath::valid() const {
  std::int64_t h = 0;
  for (auto s : steps) {
    if (s != 1 && s != -1) return false;
    h += s;
    if (h < 0) return false;
  }
  if (h != 0 || marks.size() != marked.size()) return false;
  const auto hs = heights();
  for (std::size_t m : marks)
    if (m == 0 || m > steps.size() || steps[m - 1] != 1 || hs[m] <= 0) return false;
  return true;
}

DyckPath contour_encode(const RootedSpanningSubtree& tree) {
  const IndexedTree t(tree, true);
  DyckPath path;
  path.marked = tree.marked;
  path.marks.assign(tree.marked.size(), 0);
  path.steps.reserve(2 * (t.size() - 1));

  std::unordered_map<Label, std::size_t> slot;
  for (std::size_t i = 0; i < tree.marked.size(); ++i) slot.emplace(tree.marked[i], i);

  // (vertex, next child position)
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [v, pos] = stack.back();
    if (pos < t.children[v].size()) {
      const std::size_t c = t.children[v][pos++];
      path.steps.push_back(1);
      if (t.mark[c] != kNoLabel) path.marks[slot.at(t.mark[c])] = path.steps.size();
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) path.steps.push_back(-1);
    }
  }
  return path;
}

RootedSpanningSubtree contour_decode(const DyckPath& path) {
  if (!path.valid()) throw std::invalid_argument("contour_decode: not a marked Dyck path");
  RootedSpanningSubtree tree;
  tree.marked = path.marked;

  std::unordered_map<std::size_t, Label> label_at;
  Label fresh = 1;
  for (std::size_t i = 0; i < path.marks.size(); ++i) {
    label_at.emplace(path.marks[i], path.marked[i]);
    fresh = std::max<Label>(fresh, path.marked[i] + 1);
  }

  std::vector<Vertex> stack{kRoot};
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    if (path.steps[k] == 1) {
      auto it = label_at.find(k + 1);
      const Vertex v = it != label_at.end() ? it->second : fresh++;
      tree.edges.emplace_back(v, stack.back());
      stack.push_back(v);
    } else {
      stack.pop_back();
    }
  }
  return tree;
}

PartitionOfL excursion_partition(const DyckPath& path) {
  const auto h = path.heights();
  // excursion[k] = index of the excursion containing time k (for h[k] > 0)
  std::vector<int> excursion(h.size(), -1);
  int count = -1;
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (h[k - 1] == 0 && h[k] == 1) ++count;
    if (h[k] > 0) excursion[k] = count;
  }
  std::vector<std::vector<Label>> blocks(static_cast<std::size_t>(count + 1));
  for (std::size_t i = 0; i < path.marks.size(); ++i) {
    const int e = excursion.at(path.marks[i]);
    if (e < 0) throw std::invalid_argument("excursion_partition: mark at height 0");
    blocks[static_cast<std::size_t>(e)].push_back(path.marked[i]);
  }
  std::erase_if(blocks, [](const auto& b) { return b.empty(); });
  return make_partition(std::move(blocks));
}

std::string plane_shape_string(const RootedSpanningSubtree& tree, bool canonical_order) {
  const IndexedTree t(tree, canonical_order);
  std::string out;
  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == 0) out += 'D';
    else if (t.mark[v] != kNoLabel) out += std::to_string(t.mark[v]);
    else out += '*';
    if (t.children[v].empty()) return;
    out += '(';
    for (std::size_t i = 0; i < t.children[v].size(); ++i) {
      if (i) out += ',';
      self(self, t.children[v][i]);
    }
    out += ')';
  };
  rec(rec, 0);
  return out;
}

}  // namespace kforest
