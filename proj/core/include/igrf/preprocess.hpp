#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>

#include "igrf/table.hpp"

namespace igrf {

/// Removes every row carrying a missing marker and, when present, drops the
/// redundant binary label column (the multiclass label column stays the
/// label). Cleaning an already-clean table is the identity.
Table clean(const Table& t, const std::string& binary_label_column = "label");

/// Removes all rows of the given classes and shrinks the class list,
/// re-mapping the remaining class indices to 0..k-1 in the original order.
/// Dropping a class that is not in the schema is an error.
Table remove_minority(const Table& t, const std::set<std::string>& drop);

/// Appends (factor-1) exact copies of every row of `class_name`: originals
/// first, then the duplicates in original order. The class must have at
/// least one row.
Table oversample(const Table& t, const std::string& class_name = "Normal",
                 std::size_t factor = 2);

/// Stratified split into (validation, test). Per class, validation gets
/// floor(count * ratio) rows; the remainder needed to reach
/// floor(row_count * ratio) in total goes to the classes with the largest
/// fractional parts, earliest class first on ties. Which rows land where is
/// decided by a seeded shuffle; both outputs keep original row order.
std::pair<Table, Table> split_holdout(const Table& t, double ratio, std::uint64_t seed);

/// Collapses rows identical across all feature columns and the label to
/// their first occurrence. Idempotent.
Table deduplicate(const Table& t);

}  // namespace igrf
