#include "igrf/ensemble_filter.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "igrf/errors.hpp"

namespace igrf {

std::vector<std::size_t> apply_threshold(
    const std::vector<std::pair<std::size_t, double>>& scores, double tau) {
  if (!std::isfinite(tau)) throw ConfigError("threshold must be finite");
  std::vector<std::size_t> out;
  for (const auto& [feature, score] : scores) {
    if (score > tau) out.push_back(feature);
  }
  return out;
}

namespace {

FeatureSubset combine(const std::vector<std::size_t>& ig_set,
                      const std::vector<std::size_t>& rf_set, const Schema& schema,
                      double ig_threshold, double rf_threshold, bool intersect) {
  const auto numeric = schema.numeric_columns();
  const std::set<std::size_t> numeric_set(numeric.begin(), numeric.end());
  for (std::size_t f : ig_set) {
    if (!numeric_set.count(f)) throw DataError("filter: IG survivor is not a numeric feature");
  }
  for (std::size_t f : rf_set) {
    if (!numeric_set.count(f)) throw DataError("filter: RF survivor is not a numeric feature");
  }

  const std::set<std::size_t> ig(ig_set.begin(), ig_set.end());
  const std::set<std::size_t> rf(rf_set.begin(), rf_set.end());
  std::set<std::size_t> numeric_kept;
  if (intersect) {
    for (std::size_t f : ig) {
      if (rf.count(f)) numeric_kept.insert(f);
    }
  } else {
    numeric_kept = ig;
    numeric_kept.insert(rf.begin(), rf.end());
  }

  FeatureSubset subset;
  subset.provenance.ig_threshold = ig_threshold;
  subset.provenance.rf_threshold = rf_threshold;
  subset.provenance.ig_survivors.assign(ig.begin(), ig.end());
  subset.provenance.rf_survivors.assign(rf.begin(), rf.end());
  subset.provenance.union_size = numeric_kept.size();
  subset.provenance.categorical_appended = schema.categorical_columns();

  for (std::size_t col = 0; col < schema.columns.size(); ++col) {
    if (schema.columns[col].kind == ColumnKind::categorical || numeric_kept.count(col)) {
      subset.retained.push_back(col);
    }
  }
  return subset;
}

}  // namespace

FeatureSubset union_with_categoricals(const std::vector<std::size_t>& ig_set,
                                      const std::vector<std::size_t>& rf_set,
                                      const Schema& schema, double ig_threshold,
                                      double rf_threshold) {
  return combine(ig_set, rf_set, schema, ig_threshold, rf_threshold, /*intersect=*/false);
}

FeatureSubset intersection_with_categoricals(const std::vector<std::size_t>& ig_set,
                                             const std::vector<std::size_t>& rf_set,
                                             const Schema& schema, double ig_threshold,
                                             double rf_threshold) {
  return combine(ig_set, rf_set, schema, ig_threshold, rf_threshold, /*intersect=*/true);
}

std::string subset_report_json(const FeatureSubset& subset, const Schema& schema) {
  const auto names = [&](const std::vector<std::size_t>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (std::size_t id : ids) out.push_back(schema.columns[id].name);
    return out;
  };
  nlohmann::json j;
  j["ig_threshold"] = subset.provenance.ig_threshold;
  j["rf_threshold"] = subset.provenance.rf_threshold;
  j["ig_survivors"] = names(subset.provenance.ig_survivors);
  j["rf_survivors"] = names(subset.provenance.rf_survivors);
  j["numeric_union_size"] = subset.provenance.union_size;
  j["categorical_appended"] = names(subset.provenance.categorical_appended);
  j["retained"] = names(subset.retained);
  j["retained_count"] = subset.retained.size();
  return j.dump(2);
}

}  // namespace igrf
