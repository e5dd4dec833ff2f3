#pragma once

#include <string>
#include <utility>
#include <vector>

#include "igrf/table.hpp"

namespace igrf {

/// Output of the filter stage: the retained feature ids (schema order) plus
/// a full record of how they were chosen.
struct FeatureSubset {
  std::vector<std::size_t> retained;

  struct Provenance {
    double ig_threshold = 0.0;
    double rf_threshold = 0.0;
    std::vector<std::size_t> ig_survivors;
    std::vector<std::size_t> rf_survivors;
    std::size_t union_size = 0;  // numeric union, before categoricals
    std::vector<std::size_t> categorical_appended;
  } provenance;
};

/// Features whose score is strictly greater than tau, in input order.
std::vector<std::size_t> apply_threshold(
    const std::vector<std::pair<std::size_t, double>>& scores, double tau);

/// Union of the two numeric survivor sets plus every categorical feature of
/// the schema, ordered by schema position.
FeatureSubset union_with_categoricals(const std::vector<std::size_t>& ig_set,
                                      const std::vector<std::size_t>& rf_set,
                                      const Schema& schema, double ig_threshold,
                                      double rf_threshold);

/// Intersection variant (comparison mode), same categorical handling.
FeatureSubset intersection_with_categoricals(const std::vector<std::size_t>& ig_set,
                                             const std::vector<std::size_t>& rf_set,
                                             const Schema& schema, double ig_threshold,
                                             double rf_threshold);

/// Provenance report (thresholds, survivor lists, union) as a JSON string.
std::string subset_report_json(const FeatureSubset& subset, const Schema& schema);

}  // namespace igrf
