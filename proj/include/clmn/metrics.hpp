#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "clmn/stance.hpp"

namespace clmn {

/// Classification measures plus optional evidence-ranking precision.
struct MetricReport {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double weighted_accuracy = 0.0;
    std::array<double, kNumStances> per_class_f1 = {0, 0, 0, 0};
    std::array<std::array<std::size_t, kNumStances>, kNumStances> confusion = {};  // [gold][pred]
    std::vector<double> precision_at_k;  // empty unless evidence was scored
    std::size_t example_count = 0;
};

double accuracy(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred);

/// Per-class F1 over the fixed four-class set (0 when the denominator is 0)
/// and their unweighted mean.
std::pair<double, std::array<double, kNumStances>> macro_f1(
    const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred);

/// Hierarchical score: 0.25 for the correct related/unrelated call, 0.75 more
/// for the exact related class, normalized by the maximum attainable points.
double weighted_accuracy(const std::vector<StanceLabel>& gold,
                         const std::vector<StanceLabel>& pred);

MetricReport compute_report(const std::vector<StanceLabel>& gold,
                            const std::vector<StanceLabel>& pred);

/// One example's evidence scores over its real paragraphs plus gold flags.
struct EvidenceRanking {
    std::vector<double> scores;
    std::vector<bool> gold;
};

enum class PrecisionMode {
    any_hit,   // example counts when any gold paragraph is in the top k
    fraction,  // fraction of the top k that is gold
};

/// P@1..P@max_k over examples that carry at least one gold flag; k is capped
/// at each example's paragraph count. Ties rank the lower index first.
std::vector<double> precision_at_k(const std::vector<EvidenceRanking>& rankings,
                                   std::size_t max_k,
                                   PrecisionMode mode = PrecisionMode::any_hit);

/// Closed-form expected P@k of a uniformly random ranking (any-hit mode).
double random_ranking_precision(const std::vector<EvidenceRanking>& rankings,
                                std::size_t k);

struct HeuristicReports {
    MetricReport all_unrelated;
    MetricReport all_agree;
};

HeuristicReports heuristic_baselines(const std::vector<StanceLabel>& gold);

nlohmann::ordered_json report_to_json(const MetricReport& report);

/// Rate rendered as a percentage with one decimal ("61.3").
std::string format_percent(double rate);

}  // namespace clmn
