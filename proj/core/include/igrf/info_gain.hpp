#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "igrf/table.hpp"

namespace igrf {

/// Equal-frequency binning recipe for continuous features. Interior edges
/// are order statistics of the fitting values with duplicate edges
/// collapsed; a value x falls in bin (number of edges <= x).
struct Discretizer {
  std::size_t bin_count = 10;

  std::vector<double> edges(std::span<const double> values) const;
};

std::size_t bin_index(const std::vector<double>& edges, double x);

/// Shannon entropy of a class-count vector, in bits. At least one count
/// must be positive.
double entropy_bits(std::span<const std::size_t> class_counts);

/// H(Y|X) from a joint bin-by-class count matrix, in bits. Empty bins
/// contribute nothing.
double conditional_entropy_bits(const std::vector<std::vector<std::size_t>>& joint_counts);

/// IG(Y, X) = H(Y) - H(Y|X) after discretizing the feature.
double information_gain(std::span<const double> feature, std::span<const std::int32_t> labels,
                        std::size_t n_classes, const Discretizer& d);

struct IgScore {
  std::size_t feature;  // schema column index
  std::string name;
  double raw_ig;        // bits
  double normalized;    // min-max rescaled over all scored features
};

/// Scores every numeric feature of the (deduplicated) table, min-max
/// normalizes and sorts descending; ties keep original column order. When
/// all raw scores are equal every normalized score is 1.
std::vector<IgScore> rank_ig(const Table& t, const Discretizer& d);

}  // namespace igrf
