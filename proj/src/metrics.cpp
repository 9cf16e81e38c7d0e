#include "clmn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace clmn {

namespace {

void require_usable(const std::vector<StanceLabel>& gold,
                    const std::vector<StanceLabel>& pred) {
    if (gold.empty()) throw std::invalid_argument("metrics: empty label sequence");
    if (gold.size() != pred.size())
        throw std::invalid_argument("metrics: gold has " + std::to_string(gold.size()) +
                                    " labels, predictions have " +
                                    std::to_string(pred.size()));
}

}  // namespace

double accuracy(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred) {
    require_usable(gold, pred);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < gold.size(); ++i)
        if (gold[i] == pred[i]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(gold.size());
}

std::pair<double, std::array<double, kNumStances>> macro_f1(
    const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred) {
    require_usable(gold, pred);
    std::array<double, kNumStances> f1 = {0, 0, 0, 0};
    double total = 0.0;
    for (std::size_t c = 0; c < kNumStances; ++c) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            const bool is_gold = stance_index(gold[i]) == c;
            const bool is_pred = stance_index(pred[i]) == c;
            if (is_gold && is_pred) ++tp;
            else if (is_pred) ++fp;
            else if (is_gold) ++fn;
        }
        const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
        const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
        f1[c] = precision + recall == 0.0 ? 0.0
                                          : 2.0 * precision * recall / (precision + recall);
        total += f1[c];
    }
    return {total / static_cast<double>(kNumStances), f1};
}

double weighted_accuracy(const std::vector<StanceLabel>& gold,
                         const std::vector<StanceLabel>& pred) {
    require_usable(gold, pred);
    double earned = 0.0, maximum = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        maximum += is_related(gold[i]) ? 1.0 : 0.25;
        if (is_related(gold[i]) == is_related(pred[i])) {
            earned += 0.25;
            if (is_related(gold[i]) && gold[i] == pred[i]) earned += 0.75;
        }
    }
    return earned / maximum;
}

MetricReport compute_report(const std::vector<StanceLabel>& gold,
                            const std::vector<StanceLabel>& pred) {
    MetricReport report;
    report.accuracy = accuracy(gold, pred);
    auto [macro, per_class] = macro_f1(gold, pred);
    report.macro_f1 = macro;
    report.per_class_f1 = per_class;
    report.weighted_accuracy = weighted_accuracy(gold, pred);
    report.example_count = gold.size();
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++report.confusion[stance_index(gold[i])][stance_index(pred[i])];
    return report;
}

namespace {

std::vector<std::size_t> rank_indices(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

}  // namespace

std::vector<double> precision_at_k(const std::vector<EvidenceRanking>& rankings,
                                   std::size_t max_k, PrecisionMode mode) {
    if (max_k < 1) throw std::invalid_argument("precision_at_k: k must be at least 1");
    std::vector<double> totals(max_k, 0.0);
    std::size_t counted = 0;
    for (const auto& entry : rankings) {
        if (entry.scores.size() != entry.gold.size())
            throw std::invalid_argument("precision_at_k: scores and gold flags differ");
        const bool has_gold =
            std::find(entry.gold.begin(), entry.gold.end(), true) != entry.gold.end();
        if (!has_gold) continue;  // only annotated examples participate
        ++counted;
        const auto order = rank_indices(entry.scores);
        for (std::size_t k = 1; k <= max_k; ++k) {
            const std::size_t depth = std::min(k, order.size());
            std::size_t hits = 0;
            for (std::size_t r = 0; r < depth; ++r)
                if (entry.gold[order[r]]) ++hits;
            if (mode == PrecisionMode::any_hit)
                totals[k - 1] += hits > 0 ? 1.0 : 0.0;
            else
                totals[k - 1] += static_cast<double>(hits) / static_cast<double>(depth);
        }
    }
    if (counted == 0)
        throw std::invalid_argument("precision_at_k: no examples carry rationale flags");
    for (auto& value : totals) value /= static_cast<double>(counted);
    return totals;
}

double random_ranking_precision(const std::vector<EvidenceRanking>& rankings,
                                std::size_t k) {
    if (k < 1) throw std::invalid_argument("random_ranking_precision: k must be at least 1");
    double total = 0.0;
    std::size_t counted = 0;
    for (const auto& entry : rankings) {
        const std::size_t n = entry.gold.size();
        std::size_t gold = 0;
        for (bool flag : entry.gold)
            if (flag) ++gold;
        if (gold == 0) continue;
        ++counted;
        const std::size_t depth = std::min(k, n);
        // P(at least one of `gold` in a random depth-subset) =
        // 1 - C(n-gold, depth) / C(n, depth)
        double miss = 1.0;
        for (std::size_t i = 0; i < depth; ++i) {
            const double remaining_non_gold = static_cast<double>(n - gold) - i;
            const double remaining = static_cast<double>(n) - i;
            miss *= remaining_non_gold > 0.0 ? remaining_non_gold / remaining : 0.0;
        }
        total += 1.0 - miss;
    }
    if (counted == 0)
        throw std::invalid_argument("random_ranking_precision: no annotated examples");
    return total / static_cast<double>(counted);
}

HeuristicReports heuristic_baselines(const std::vector<StanceLabel>& gold) {
    if (gold.empty()) throw std::invalid_argument("heuristic_baselines: empty gold labels");
    HeuristicReports reports;
    std::vector<StanceLabel> all_unrelated(gold.size(), StanceLabel::unrelated);
    std::vector<StanceLabel> all_agree(gold.size(), StanceLabel::agree);
    reports.all_unrelated = compute_report(gold, all_unrelated);
    reports.all_agree = compute_report(gold, all_agree);
    return reports;
}

nlohmann::ordered_json report_to_json(const MetricReport& report) {
    nlohmann::ordered_json out;
    out["accuracy"] = report.accuracy;
    out["macro_f1"] = report.macro_f1;
    out["weighted_accuracy"] = report.weighted_accuracy;
    nlohmann::ordered_json f1;
    for (std::size_t c = 0; c < kNumStances; ++c)
        f1[to_string(static_cast<StanceLabel>(c))] = report.per_class_f1[c];
    out["per_class_f1"] = std::move(f1);
    out["confusion"] = report.confusion;
    if (!report.precision_at_k.empty()) out["precision_at_k"] = report.precision_at_k;
    out["example_count"] = report.example_count;
    nlohmann::ordered_json pretty;
    pretty["accuracy"] = format_percent(report.accuracy);
    pretty["macro_f1"] = format_percent(report.macro_f1);
    pretty["weighted_accuracy"] = format_percent(report.weighted_accuracy);
    out["percent"] = std::move(pretty);
    return out;
}

std::string format_percent(double rate) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.1f", 100.0 * rate);
    return buffer;
}

}  // namespace clmn
