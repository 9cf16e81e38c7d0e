#include <doctest.h>

#include <cmath>
#include <map>

#include "clmn/metrics.hpp"
#include "clmn/rng.hpp"

using namespace clmn;

namespace {

// Gold multiset matching the benchmark's class mix: 68.1% unrelated and
// 15.6% agree (2072 / 474 / 87 / 409 over 3042 examples).
std::vector<StanceLabel> benchmark_gold() {
    std::vector<StanceLabel> gold;
    gold.insert(gold.end(), 2072, StanceLabel::unrelated);
    gold.insert(gold.end(), 474, StanceLabel::agree);
    gold.insert(gold.end(), 87, StanceLabel::disagree);
    gold.insert(gold.end(), 409, StanceLabel::discuss);
    return gold;
}

// Independent naive re-implementations used as oracles.
double brute_accuracy(const std::vector<StanceLabel>& gold,
                      const std::vector<StanceLabel>& pred) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) ok += gold[i] == pred[i] ? 1 : 0;
    return double(ok) / double(gold.size());
}

double brute_class_f1(const std::vector<StanceLabel>& gold,
                      const std::vector<StanceLabel>& pred, StanceLabel cls) {
    std::size_t tp = 0, pred_count = 0, gold_count = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (pred[i] == cls) ++pred_count;
        if (gold[i] == cls) ++gold_count;
        if (pred[i] == cls && gold[i] == cls) ++tp;
    }
    const double p = pred_count ? double(tp) / double(pred_count) : 0.0;
    const double r = gold_count ? double(tp) / double(gold_count) : 0.0;
    return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double brute_macro_f1(const std::vector<StanceLabel>& gold,
                      const std::vector<StanceLabel>& pred) {
    double total = 0.0;
    for (StanceLabel cls : kAllStances) total += brute_class_f1(gold, pred, cls);
    return total / 4.0;
}

double brute_weighted(const std::vector<StanceLabel>& gold,
                      const std::vector<StanceLabel>& pred) {
    double earned = 0.0, best = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const bool gold_related = gold[i] != StanceLabel::unrelated;
        const bool pred_related = pred[i] != StanceLabel::unrelated;
        best += gold_related ? 1.0 : 0.25;
        if (gold_related == pred_related) earned += 0.25;
        if (gold_related && gold[i] == pred[i]) earned += 0.75;
    }
    return earned / best;
}

}  // namespace

TEST_CASE("accuracy basics") {
    using L = StanceLabel;
    CHECK(accuracy({L::agree, L::discuss}, {L::agree, L::discuss}) == 1.0);
    CHECK(accuracy({L::agree, L::disagree}, {L::disagree, L::agree}) == 0.0);
    CHECK_THROWS_AS(accuracy({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(accuracy({L::agree}, {L::agree, L::agree}), std::invalid_argument);
}

TEST_CASE("heuristic baselines reproduce the benchmark rows") {
    const auto gold = benchmark_gold();
    auto reports = heuristic_baselines(gold);

    CHECK(std::abs(reports.all_unrelated.weighted_accuracy - 0.348) < 0.001);
    CHECK(std::abs(reports.all_unrelated.accuracy - 0.681) < 0.001);
    CHECK(std::abs(reports.all_unrelated.macro_f1 - 0.203) < 0.001);
    CHECK(std::abs(reports.all_unrelated.per_class_f1[3] - 0.810) < 0.001);
    CHECK(reports.all_unrelated.per_class_f1[0] == 0.0);

    CHECK(std::abs(reports.all_agree.weighted_accuracy - 0.402) < 0.001);
    CHECK(std::abs(reports.all_agree.accuracy - 0.156) < 0.001);
    CHECK(std::abs(reports.all_agree.macro_f1 - 0.067) < 0.001);
    CHECK(std::abs(reports.all_agree.per_class_f1[0] - 0.270) < 0.001);

    CHECK(format_percent(reports.all_unrelated.weighted_accuracy) == "34.8");
    CHECK(format_percent(reports.all_unrelated.accuracy) == "68.1");
    CHECK(format_percent(reports.all_unrelated.macro_f1) == "20.3");
    CHECK(format_percent(reports.all_agree.weighted_accuracy) == "40.2");
    CHECK(format_percent(reports.all_agree.accuracy) == "15.6");
    CHECK(format_percent(reports.all_agree.macro_f1) == "6.7");
}

TEST_CASE("degenerate all-unrelated gold") {
    std::vector<StanceLabel> gold(16, StanceLabel::unrelated);
    auto reports = heuristic_baselines(gold);
    CHECK(reports.all_unrelated.accuracy == 1.0);
    CHECK(reports.all_unrelated.weighted_accuracy == 1.0);
    CHECK(reports.all_unrelated.macro_f1 == 0.25);
}

TEST_CASE("weighted accuracy hand example and boundary predictors") {
    using L = StanceLabel;
    const std::vector<L> gold = {L::unrelated, L::agree, L::discuss};
    const std::vector<L> pred = {L::unrelated, L::disagree, L::discuss};
    CHECK(weighted_accuracy(gold, pred) == (0.25 + 0.25 + 1.0) / 2.25);

    CHECK(weighted_accuracy(gold, gold) == 1.0);
    const std::vector<L> inverted = {L::agree, L::unrelated, L::unrelated};
    CHECK(weighted_accuracy(gold, inverted) == 0.0);
}

TEST_CASE("metrics match a brute-force oracle on randomized sets") {
    Rng rng(123);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(40);
        std::vector<StanceLabel> gold(n), pred(n);
        for (auto& label : gold) label = static_cast<StanceLabel>(rng.below(4));
        for (auto& label : pred) label = static_cast<StanceLabel>(rng.below(4));

        auto report = compute_report(gold, pred);
        CHECK(report.accuracy == brute_accuracy(gold, pred));
        CHECK(report.macro_f1 == brute_macro_f1(gold, pred));
        CHECK(report.weighted_accuracy == brute_weighted(gold, pred));
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(report.per_class_f1[c] ==
                  brute_class_f1(gold, pred, static_cast<StanceLabel>(c)));

        // accuracy == micro-averaged F1: diagonal mass over the total
        std::size_t diagonal = 0, total = 0;
        for (std::size_t g = 0; g < 4; ++g)
            for (std::size_t p = 0; p < 4; ++p) {
                total += report.confusion[g][p];
                if (g == p) diagonal += report.confusion[g][p];
            }
        CHECK(total == n);
        CHECK(report.accuracy == double(diagonal) / double(total));
    }
}

TEST_CASE("precision at k rank arithmetic") {
    // Three real paragraphs; scores rank them [2, 0, 1].
    EvidenceRanking top_hit{{0.4, 0.1, 0.9}, {false, false, true}};
    auto p = precision_at_k({top_hit}, 3);
    CHECK(p[0] == 1.0);
    CHECK(p[2] == 1.0);

    EvidenceRanking deep_hit{{0.4, 0.1, 0.9}, {false, true, false}};
    p = precision_at_k({deep_hit}, 3);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.0);
    CHECK(p[2] == 1.0);

    // Ties prefer the lower paragraph index.
    EvidenceRanking tied{{0.5, 0.5, 0.3}, {false, true, false}};
    p = precision_at_k({tied}, 2);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 1.0);

    // k beyond the paragraph count is capped at the example's size.
    EvidenceRanking small{{0.2, 0.8}, {true, false}};
    CHECK(precision_at_k({small}, 5)[4] == 1.0);

    // Unannotated examples are excluded.
    EvidenceRanking blank{{0.2, 0.8}, {false, false}};
    CHECK(precision_at_k({top_hit, blank}, 1)[0] == 1.0);
    CHECK_THROWS_AS(precision_at_k({blank}, 3), std::invalid_argument);
}

TEST_CASE("precision at k is monotone and fraction mode stays within bounds") {
    Rng rng(9);
    std::vector<EvidenceRanking> rankings;
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 2 + rng.below(6);
        EvidenceRanking entry;
        for (std::size_t j = 0; j < n; ++j) {
            entry.scores.push_back(rng.uniform(-1, 1));
            entry.gold.push_back(rng.uniform() < 0.3);
        }
        if (std::find(entry.gold.begin(), entry.gold.end(), true) == entry.gold.end())
            entry.gold[rng.below(n)] = true;
        rankings.push_back(std::move(entry));
    }
    auto any_hit = precision_at_k(rankings, 6);
    for (std::size_t k = 1; k < any_hit.size(); ++k) CHECK(any_hit[k] >= any_hit[k - 1]);
    auto fraction = precision_at_k(rankings, 6, PrecisionMode::fraction);
    for (double value : fraction) {
        CHECK(value >= 0.0);
        CHECK(value <= 1.0);
    }
}

TEST_CASE("closed-form random baseline matches simulation") {
    std::vector<EvidenceRanking> rankings = {
        {{0, 0, 0}, {true, false, false}},
        {{0, 0, 0, 0}, {true, true, false, false}},
        {{0, 0}, {false, true}},
    };
    // k=1 closed form: mean of 1/3, 2/4, 1/2
    CHECK(random_ranking_precision(rankings, 1) ==
          doctest::Approx((1.0 / 3 + 0.5 + 0.5) / 3).epsilon(1e-12));

    Rng rng(31);
    for (std::size_t k = 1; k <= 3; ++k) {
        double simulated = 0.0;
        const int trials = 60000;
        for (int t = 0; t < trials; ++t) {
            const auto& entry = rankings[rng.below(rankings.size())];
            std::vector<std::size_t> order(entry.gold.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            rng.shuffle(order);
            bool hit = false;
            for (std::size_t r = 0; r < std::min(k, order.size()); ++r)
                if (entry.gold[order[r]]) hit = true;
            simulated += hit ? 1.0 : 0.0;
        }
        simulated /= trials;
        // each entry is equally likely, so compare against the mean formula
        CHECK(std::abs(random_ranking_precision(rankings, k) - simulated) < 0.01);
    }
}

TEST_CASE("report json carries rounded percentages") {
    using L = StanceLabel;
    auto report = compute_report({L::agree, L::unrelated}, {L::agree, L::unrelated});
    auto json = report_to_json(report);
    CHECK(json["accuracy"] == 1.0);
    CHECK(json["percent"]["accuracy"] == "100.0");
    CHECK(json["example_count"] == 2);
}
