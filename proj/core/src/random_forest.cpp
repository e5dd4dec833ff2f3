#include "igrf/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "igrf/csv.hpp"
#include "igrf/errors.hpp"
#include "igrf/rng.hpp"

namespace igrf {

double gini_impurity(std::span<const std::size_t> class_counts) {
  std::size_t total = 0;
  for (std::size_t c : class_counts) total += c;
  if (total == 0) throw DataError("gini of an empty count vector");
  double sum_sq = 0.0;
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t c : class_counts) {
    const double p = static_cast<double>(c) * inv;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

namespace {

// Gini from double counts, total > 0.
inline double gini_from(const std::vector<double>& counts, double total) {
  double sum_sq = 0.0;
  for (double c : counts) sum_sq += c * c;
  return 1.0 - sum_sq / (total * total);
}

struct NodeSearch {
  // scratch buffers reused across nodes
  std::vector<std::pair<double, std::int32_t>> sorted;  // (value, label)
  std::vector<double> left_counts;
  std::vector<double> right_counts;
};

std::optional<Split> search_best_split(const Matrix& x, std::span<const std::int32_t> y,
                                       std::span<const std::size_t> rows,
                                       std::span<const std::size_t> candidates,
                                       std::span<const std::size_t> node_counts,
                                       std::size_t n_classes, NodeSearch& scratch) {
  const auto n = static_cast<double>(rows.size());
  // Parent impurity through the same count-squared form as the children, so
  // mathematically tied splits compute to identical doubles and the tie
  // rules actually engage.
  double parent;
  {
    std::vector<double> counts(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) counts[c] = static_cast<double>(node_counts[c]);
    parent = gini_from(counts, n);
  }
  std::optional<Split> best;

  for (const std::size_t feature : candidates) {
    auto& sorted = scratch.sorted;
    sorted.clear();
    sorted.reserve(rows.size());
    for (const std::size_t r : rows) sorted.emplace_back(x(r, feature), y[r]);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (sorted.front().first == sorted.back().first) continue;  // constant within node

    auto& left = scratch.left_counts;
    auto& right = scratch.right_counts;
    left.assign(n_classes, 0.0);
    right.assign(n_classes, 0.0);
    for (std::size_t c = 0; c < n_classes; ++c) right[c] = static_cast<double>(node_counts[c]);

    double n_left = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      left[static_cast<std::size_t>(sorted[i].second)] += 1.0;
      right[static_cast<std::size_t>(sorted[i].second)] -= 1.0;
      n_left += 1.0;
      if (sorted[i].first == sorted[i + 1].first) continue;  // not a boundary
      const double n_right = n - n_left;
      const double decrease = parent - (n_left / n) * gini_from(left, n_left) -
                              (n_right / n) * gini_from(right, n_right);
      if (decrease <= 0.0) continue;
      if (!best || decrease > best->decrease) {
        const double threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2.0;
        best = Split{feature, threshold, decrease};
      }
    }
  }
  return best;
}

struct GrowContext {
  const Matrix& x;
  std::span<const std::int32_t> y;
  std::size_t n_classes;
  std::size_t min_samples_split;
  std::size_t max_depth;
  std::size_t features_per_split;
  Rng rng;
  std::vector<std::size_t> feature_scratch;
  NodeSearch search;
};

struct PendingNode {
  std::int32_t parent;  // -1 for the root
  bool is_left;
  std::vector<std::size_t> rows;
  std::size_t depth;
};

// Explicit-stack preorder growth; nodes land in the array in DFS order and
// the RNG stream is consumed in that same order, so results match any
// equivalent recursive formulation.
void grow(Tree& tree, GrowContext& ctx, std::vector<std::size_t> bootstrap) {
  std::vector<PendingNode> work;
  work.push_back({-1, false, std::move(bootstrap), 0});
  std::vector<std::size_t> counts(ctx.n_classes);

  while (!work.empty()) {
    PendingNode item = std::move(work.back());
    work.pop_back();

    const auto node_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node_id].samples = static_cast<std::uint32_t>(item.rows.size());
    if (item.parent >= 0) {
      auto& parent = tree.nodes[static_cast<std::size_t>(item.parent)];
      (item.is_left ? parent.left : parent.right) = node_id;
    }

    counts.assign(ctx.n_classes, 0);
    for (const std::size_t r : item.rows) ++counts[static_cast<std::size_t>(ctx.y[r])];

    const bool pure = std::count_if(counts.begin(), counts.end(),
                                    [](std::size_t c) { return c > 0; }) <= 1;
    const bool depth_capped = ctx.max_depth != 0 && item.depth >= ctx.max_depth;
    std::optional<Split> split;
    if (!pure && !depth_capped && item.rows.size() >= ctx.min_samples_split) {
      auto candidates = sample_without_replacement(
          ctx.rng, ctx.x.cols, std::min(ctx.features_per_split, ctx.x.cols), ctx.feature_scratch);
      // Ascending candidate order so equal decreases resolve to the lowest
      // feature index.
      std::sort(candidates.begin(), candidates.end());
      split = search_best_split(ctx.x, ctx.y, item.rows, candidates, counts, ctx.n_classes,
                                ctx.search);
    }

    if (!split) {
      tree.nodes[node_id].class_counts.assign(counts.begin(), counts.end());
      continue;
    }

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(item.rows.size());
    right_rows.reserve(item.rows.size());
    for (const std::size_t r : item.rows) {
      (ctx.x(r, split->feature) <= split->threshold ? left_rows : right_rows).push_back(r);
    }

    auto& node = tree.nodes[node_id];
    node.feature = static_cast<std::int32_t>(split->feature);
    node.threshold = split->threshold;
    node.impurity_decrease = split->decrease;

    // Push right first so the left child is processed (and numbered) first.
    work.push_back({node_id, false, std::move(right_rows), item.depth + 1});
    work.push_back({node_id, true, std::move(left_rows), item.depth + 1});
  }
}

Tree fit_tree(const Matrix& x, std::span<const std::int32_t> y, std::size_t n_classes,
              const ForestConfig& config, std::size_t tree_index) {
  GrowContext ctx{x,
                  y,
                  n_classes,
                  config.min_samples_split,
                  config.max_depth,
                  config.features_per_split,
                  Rng(config.seed + tree_index),
                  {},
                  {}};
  std::vector<std::size_t> bootstrap(x.rows);
  for (auto& r : bootstrap) r = static_cast<std::size_t>(uniform_index(ctx.rng, x.rows));

  Tree tree;
  grow(tree, ctx, std::move(bootstrap));
  return tree;
}

}  // namespace

std::optional<Split> best_split(const Matrix& x, std::span<const std::int32_t> y,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features,
                                std::size_t n_classes) {
  if (rows.empty()) return std::nullopt;
  std::vector<std::size_t> counts(n_classes, 0);
  for (const std::size_t r : rows) ++counts[static_cast<std::size_t>(y[r])];
  std::vector<std::size_t> ordered(candidate_features.begin(), candidate_features.end());
  std::sort(ordered.begin(), ordered.end());
  NodeSearch scratch;
  return search_best_split(x, y, rows, ordered, counts, n_classes, scratch);
}

Forest fit_forest(const Matrix& x, std::span<const std::int32_t> y, std::size_t n_classes,
                  ForestConfig config) {
  if (x.rows == 0) throw DataError("fit_forest: empty training set");
  if (x.cols == 0) throw DataError("fit_forest: no features");
  if (config.n_trees == 0) throw ConfigError("fit_forest: n_trees must be >= 1");
  if (y.size() != x.rows) throw DataError("fit_forest: label count mismatch");
  if (config.features_per_split == 0) {
    config.features_per_split =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols))));
  }

  Forest forest;
  forest.config = config;
  forest.n_features = x.cols;
  forest.n_classes = n_classes;
  forest.trees.resize(config.n_trees);

  std::size_t n_threads = config.n_threads != 0 ? config.n_threads
                                                : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, config.n_trees);

  if (n_threads <= 1) {
    for (std::size_t i = 0; i < config.n_trees; ++i) {
      forest.trees[i] = fit_tree(x, y, n_classes, config, i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < config.n_trees; i = next.fetch_add(1)) {
          forest.trees[i] = fit_tree(x, y, n_classes, config, i);
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  return forest;
}

std::size_t Tree::leaf_for(std::span<const double> row) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& n = nodes[node];
    node = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold
                                        ? n.left
                                        : n.right);
  }
  return node;
}

std::int32_t predict(const Forest& f, std::span<const double> row) {
  if (row.size() < f.n_features) throw DataError("predict: row is missing features");
  std::vector<std::size_t> votes(f.n_classes, 0);
  for (const auto& tree : f.trees) {
    const auto& counts = tree.nodes[tree.leaf_for(row)].class_counts;
    std::size_t leaf_class = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
      if (counts[c] > counts[leaf_class]) leaf_class = c;
    }
    ++votes[leaf_class];
  }
  std::size_t winner = 0;
  for (std::size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[winner]) winner = c;
  }
  return static_cast<std::int32_t>(winner);
}

std::vector<RfScore> importance(const Forest& f) {
  std::vector<double> raw(f.n_features, 0.0);
  for (const auto& tree : f.trees) {
    for (const auto& node : tree.nodes) {
      if (node.feature >= 0) {
        raw[static_cast<std::size_t>(node.feature)] +=
            node.impurity_decrease * static_cast<double>(node.samples);
      }
    }
  }
  double total = 0.0;
  for (double& v : raw) {
    v /= static_cast<double>(f.trees.size());
    total += v;
  }
  std::vector<RfScore> scores(f.n_features);
  for (std::size_t i = 0; i < f.n_features; ++i) {
    scores[i] = {i, total > 0.0 ? raw[i] / total : 0.0};
  }
  return scores;
}

std::string serialize_forest(const Forest& f) {
  std::ostringstream out;
  out << "forest trees=" << f.trees.size() << " features=" << f.n_features
      << " classes=" << f.n_classes << " seed=" << f.config.seed << "\n";
  for (std::size_t t = 0; t < f.trees.size(); ++t) {
    out << "tree " << t << "\n";
    for (const auto& n : f.trees[t].nodes) {
      if (n.feature >= 0) {
        out << "split f=" << n.feature << " thr=" << format_double(n.threshold)
            << " dec=" << format_double(n.impurity_decrease) << " n=" << n.samples
            << " l=" << n.left << " r=" << n.right << "\n";
      } else {
        out << "leaf n=" << n.samples << " counts=";
        for (std::size_t c = 0; c < n.class_counts.size(); ++c) {
          if (c > 0) out << ':';
          out << n.class_counts[c];
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace igrf
