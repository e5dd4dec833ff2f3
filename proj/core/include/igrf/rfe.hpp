#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace igrf {

/// Scores a feature subset (sorted schema ids) under a seed. Implementations
/// must be deterministic per (subset, seed) and insensitive to subset order.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual double score(const std::vector<std::size_t>& subset, std::uint64_t seed) = 0;
};

/// Wraps another evaluator and counts score() calls (thread-safe).
class CountingEvaluator : public Evaluator {
 public:
  explicit CountingEvaluator(Evaluator& inner) : inner_(inner) {}
  double score(const std::vector<std::size_t>& subset, std::uint64_t seed) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.score(subset, seed);
  }
  std::size_t calls() const { return calls_.load(std::memory_order_relaxed); }

 private:
  Evaluator& inner_;
  std::atomic<std::size_t> calls_{0};
};

/// Same score for every subset and seed.
class ConstantEvaluator : public Evaluator {
 public:
  explicit ConstantEvaluator(double value) : value_(value) {}
  double score(const std::vector<std::size_t>&, std::uint64_t) override { return value_; }

 private:
  double value_;
};

/// 1 - 0.1 * |subset symmetric-difference peak|: maximal exactly at the peak
/// set, worsening with every feature added or removed.
class PeakedEvaluator : public Evaluator {
 public:
  explicit PeakedEvaluator(std::set<std::size_t> peak) : peak_(std::move(peak)) {}
  double score(const std::vector<std::size_t>& subset, std::uint64_t) override;

 private:
  std::set<std::size_t> peak_;
};

/// |subset| / denominator: every elimination strictly worsens the score.
class SubsetSizeEvaluator : public Evaluator {
 public:
  explicit SubsetSizeEvaluator(double denominator) : denominator_(denominator) {}
  double score(const std::vector<std::size_t>& subset, std::uint64_t) override {
    return static_cast<double>(subset.size()) / denominator_;
  }

 private:
  double denominator_;
};

/// Mean of ev.score over the seeds. Both subset and seeds must be nonempty.
double evaluate_elimination(Evaluator& ev, const std::vector<std::size_t>& subset,
                            const std::vector<std::uint64_t>& seeds);

struct RfeIteration {
  std::map<std::size_t, double> candidate_scores;  // feature removed -> score
  std::size_t removed = 0;
  double local_best = 0.0;
  double best_after = 0.0;
  std::size_t patience_after = 0;
  bool improved = false;
};

struct RfeTrace {
  std::vector<std::size_t> init_features;
  double init_score = 0.0;
  std::vector<RfeIteration> iterations;
  double best_performance = 0.0;
  std::vector<std::size_t> selected;
  std::vector<std::size_t> rm_list;
  std::size_t patience_remaining = 0;
};

struct RfeOptions {
  std::size_t patience = 5;
  std::vector<std::uint64_t> seeds = {2022, 2023, 2024, 2025, 2026,
                                      2027, 2028, 2029, 2030, 2031};
  std::size_t n_threads = 1;  // candidate evaluations per iteration
};

/// Greedy backward elimination. Each iteration scores every single-feature
/// elimination from the keep set, removes the one whose elimination scores
/// highest (ties to the earliest schema position), resets the patience
/// budget on a strict improvement over the global best and decrements it
/// otherwise; stops when the budget is spent or one feature remains. The
/// global best starts at the full init set's own score, so a run where every
/// elimination hurts returns init_features unchanged.
std::pair<std::vector<std::size_t>, RfeTrace> run_rfe(Evaluator& ev,
                                                      const std::vector<std::size_t>& init_features,
                                                      const RfeOptions& options);

/// Trace as JSON, with optional feature names (indexed by schema position).
std::string trace_to_json(const RfeTrace& trace, const std::vector<std::string>& feature_names);

/// Parses "stub:constant:<v>", "stub:peaked:<id,id,...>", "stub:size:<den>".
std::unique_ptr<Evaluator> make_stub_evaluator(const std::string& spec);

}  // namespace igrf
