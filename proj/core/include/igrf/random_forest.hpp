#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "igrf/matrix.hpp"

namespace igrf {

struct ForestConfig {
  std::size_t n_trees = 1000;
  std::size_t max_depth = 0;          // 0 = unbounded
  std::size_t min_samples_split = 2;
  std::size_t features_per_split = 0; // 0 = ceil(sqrt(n_features))
  std::uint64_t seed = 0;
  std::size_t n_threads = 0;          // 0 = hardware concurrency
};

/// Flat tree node. feature < 0 marks a leaf; split nodes send
/// value <= threshold left and value > threshold right.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double impurity_decrease = 0.0;  // parent gini minus weighted child gini
  std::uint32_t samples = 0;       // bootstrap rows reaching this node
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::vector<std::uint32_t> class_counts;  // populated at leaves
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t leaf_for(std::span<const double> row) const;
};

struct Forest {
  ForestConfig config;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::vector<Tree> trees;
};

struct RfScore {
  std::size_t feature;  // column index into the training matrix
  double mdi;           // fraction of the total impurity decrease
};

struct Split {
  std::size_t feature;
  double threshold;
  double decrease;
};

/// Gini impurity 1 - sum p_i^2 of a count vector with positive total.
double gini_impurity(std::span<const std::size_t> class_counts);

/// Exhaustive best split over the candidate features and the midpoints
/// between consecutive distinct sorted values. Ties go to the lower feature
/// index, then the lower threshold. Returns nullopt when no split has a
/// positive impurity decrease.
std::optional<Split> best_split(const Matrix& x, std::span<const std::int32_t> y,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features,
                                std::size_t n_classes);

/// Grows config.n_trees CART trees, each on its own bootstrap sample (drawn
/// from an mt19937_64 stream seeded with config.seed + tree index) with a
/// fresh random feature subset at every split. Deterministic for a given
/// seed under any thread count.
Forest fit_forest(const Matrix& x, std::span<const std::int32_t> y, std::size_t n_classes,
                  ForestConfig config);

/// Majority vote over per-tree leaf pluralities; ties break to the lower
/// class index at both levels.
std::int32_t predict(const Forest& f, std::span<const double> row);

/// Mean decrease in impurity: per feature, the sample-weighted impurity
/// decreases of its split nodes summed over all trees, averaged per tree,
/// then normalized to sum to 1.
std::vector<RfScore> importance(const Forest& f);

/// Debug dump: one node record per line, preorder per tree.
std::string serialize_forest(const Forest& f);

}  // namespace igrf
