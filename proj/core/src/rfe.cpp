#include "igrf/rfe.hpp"

#include <algorithm>
#include <thread>

#include <json.hpp>

#include "igrf/errors.hpp"

namespace igrf {

double PeakedEvaluator::score(const std::vector<std::size_t>& subset, std::uint64_t) {
  std::size_t sym_diff = 0;
  const std::set<std::size_t> s(subset.begin(), subset.end());
  for (std::size_t f : s) {
    if (!peak_.count(f)) ++sym_diff;
  }
  for (std::size_t f : peak_) {
    if (!s.count(f)) ++sym_diff;
  }
  return 1.0 - 0.1 * static_cast<double>(sym_diff);
}

double evaluate_elimination(Evaluator& ev, const std::vector<std::size_t>& subset,
                            const std::vector<std::uint64_t>& seeds) {
  if (subset.empty()) throw DataError("evaluate_elimination: empty subset");
  if (seeds.empty()) throw ConfigError("evaluate_elimination: no seeds");
  double total = 0.0;
  for (const std::uint64_t seed : seeds) total += ev.score(subset, seed);
  return total / static_cast<double>(seeds.size());
}

std::pair<std::vector<std::size_t>, RfeTrace> run_rfe(
    Evaluator& ev, const std::vector<std::size_t>& init_features, const RfeOptions& options) {
  if (init_features.empty()) throw DataError("rfe: no initial features");
  if (options.patience == 0) throw ConfigError("rfe: patience must be positive");

  std::vector<std::size_t> keep = init_features;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  RfeTrace trace;
  trace.init_features = keep;
  trace.init_score = evaluate_elimination(ev, keep, options.seeds);
  trace.best_performance = trace.init_score;
  trace.selected = keep;

  std::size_t patience = options.patience;

  while (keep.size() > 1 && patience > 0) {
    RfeIteration iter;

    // Score every single-feature elimination from the keep set.
    std::vector<double> scores(keep.size());
    const std::size_t n_threads =
        std::max<std::size_t>(1, std::min(options.n_threads, keep.size()));
    auto score_range = [&](std::size_t begin, std::size_t end) {
      std::vector<std::size_t> candidate;
      for (std::size_t j = begin; j < end; ++j) {
        candidate = keep;
        candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(j));
        scores[j] = evaluate_elimination(ev, candidate, options.seeds);
      }
    };
    if (n_threads <= 1) {
      score_range(0, keep.size());
    } else {
      std::vector<std::thread> workers;
      const std::size_t chunk = (keep.size() + n_threads - 1) / n_threads;
      for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(keep.size(), begin + chunk);
        if (begin < end) workers.emplace_back(score_range, begin, end);
      }
      for (auto& w : workers) w.join();
    }

    // max_key with ties to the earliest schema position; keep is sorted, so
    // the first strict maximum wins.
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) {
      iter.candidate_scores.emplace(keep[j], scores[j]);
      if (scores[j] > scores[best_j]) best_j = j;
    }
    iter.removed = keep[best_j];
    iter.local_best = scores[best_j];

    trace.rm_list.push_back(keep[best_j]);
    keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(best_j));

    if (iter.local_best > trace.best_performance) {
      trace.best_performance = iter.local_best;
      trace.selected = keep;
      patience = options.patience;
      iter.improved = true;
    } else {
      --patience;
    }
    iter.best_after = trace.best_performance;
    iter.patience_after = patience;
    trace.iterations.push_back(std::move(iter));
  }

  trace.patience_remaining = patience;
  return {trace.selected, trace};
}

std::string trace_to_json(const RfeTrace& trace, const std::vector<std::string>& feature_names) {
  const auto name_of = [&](std::size_t id) -> std::string {
    if (id < feature_names.size() && !feature_names[id].empty()) return feature_names[id];
    return "f" + std::to_string(id);
  };
  const auto names = [&](const std::vector<std::size_t>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (std::size_t id : ids) out.push_back(name_of(id));
    return out;
  };

  nlohmann::json j;
  j["init_features"] = names(trace.init_features);
  j["init_score"] = trace.init_score;
  j["best_performance"] = trace.best_performance;
  j["selected_features"] = names(trace.selected);
  j["rm_list"] = names(trace.rm_list);
  j["patience_remaining"] = trace.patience_remaining;
  j["iterations"] = nlohmann::json::array();
  for (const auto& iter : trace.iterations) {
    nlohmann::json it;
    nlohmann::json scores = nlohmann::json::object();
    for (const auto& [feature, score] : iter.candidate_scores) scores[name_of(feature)] = score;
    it["candidate_scores"] = std::move(scores);
    it["removed"] = name_of(iter.removed);
    it["local_best"] = iter.local_best;
    it["best_after"] = iter.best_after;
    it["patience_after"] = iter.patience_after;
    it["improved"] = iter.improved;
    j["iterations"].push_back(std::move(it));
  }
  return j.dump(2);
}

std::unique_ptr<Evaluator> make_stub_evaluator(const std::string& spec) {
  const std::string prefix = "stub:";
  if (spec.rfind(prefix, 0) != 0) throw ConfigError("not a stub evaluator spec: " + spec);
  const std::string body = spec.substr(prefix.size());
  const auto colon = body.find(':');
  const std::string kind = body.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : body.substr(colon + 1);

  if (kind == "constant") {
    if (arg.empty()) throw ConfigError("stub:constant needs a value");
    return std::make_unique<ConstantEvaluator>(std::stod(arg));
  }
  if (kind == "peaked") {
    std::set<std::size_t> peak;
    std::size_t pos = 0;
    while (pos < arg.size()) {
      const auto comma = arg.find(',', pos);
      const std::string tok = arg.substr(pos, comma == std::string::npos ? arg.size() - pos
                                                                         : comma - pos);
      if (!tok.empty()) peak.insert(std::stoul(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (peak.empty()) throw ConfigError("stub:peaked needs a comma-separated id list");
    return std::make_unique<PeakedEvaluator>(std::move(peak));
  }
  if (kind == "size") {
    if (arg.empty()) throw ConfigError("stub:size needs a denominator");
    return std::make_unique<SubsetSizeEvaluator>(std::stod(arg));
  }
  throw ConfigError("unknown stub evaluator kind: " + kind);
}

}  // namespace igrf
