#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clmn/adaptation.hpp"
#include "clmn/datasets.hpp"
#include "clmn/memory_net.hpp"
#include "clmn/metrics.hpp"
#include "clmn/optim.hpp"
#include "clmn/text.hpp"

namespace clmn {

enum class TrainMode {
    target_only,       // one network, target supervision
    source_only,       // one network, source supervision, target evaluation
    pretrain_finetune, // source pretraining, then target fine-tuning
    clmn,              // joint dual-pipeline training with alignment
    clmn_pretrained,   // source pretraining, then the joint phase
};

TrainMode parse_train_mode(const std::string& text);
std::string to_string(TrainMode mode);

struct TrainConfig {
    TrainMode mode = TrainMode::clmn;
    double alpha = 0.7;
    double margin = 1.0;
    PairPolicy pair_policy = PairPolicy::balanced;
    std::size_t epochs = 50;
    std::size_t pretrain_epochs = 30;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    std::uint64_t seed = 1;
    std::size_t patience = 10;
    std::size_t folds = 5;
    ModelConfig model;

    void validate() const;
};

/// Per-epoch training means and the development snapshot.
struct EpochLog {
    std::size_t epoch = 0;  // 1-based
    double mean_ca = 0.0;
    double mean_csa = 0.0;
    double mean_total = 0.0;
    double dev_accuracy = 0.0;
    double dev_macro_f1 = 0.0;
    double dev_weighted_accuracy = 0.0;
};

/// CSV with the fixed schema
/// epoch,l_ca,l_csa,l_total,dev_acc,dev_macro_f1,dev_weighted_acc.
std::string epoch_log_csv(const std::vector<EpochLog>& logs);

struct DataSplit {
    std::vector<StanceExample> train, dev, test;
};

/// Everything one language needs at the text boundary.
struct LanguageResources {
    Vocabulary vocab;
    EmbeddingTable embeddings;
    TfidfModel tfidf;
};

/// Vocabulary over every split text, embeddings from the shared vector file
/// content, TF.IDF fitted on the training fold (falling back to dev/test
/// text when a split has no training data).
LanguageResources build_resources(const DataSplit& split, const std::string& embedding_text,
                                  std::size_t expected_dim);

/// Assembled dual-network model plus its text resources; checkpoints carry
/// parameters under source.* / target.* / shared.* together with the frozen
/// embeddings, vocabularies, and TF.IDF state.
class Model {
public:
    Model(const ModelConfig& config, LanguageResources source, LanguageResources target,
          std::uint64_t seed);

    const ModelConfig& config() const { return config_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }
    NetworkParams& source_net() { return source_net_; }
    NetworkParams& target_net() { return target_net_; }
    ClassifierParams& classifier() { return classifier_; }
    const LanguageResources& resources(const std::string& language) const;

    EncodedExample prepare(const StanceExample& example) const;
    /// Runs a pre-encoded example through the given language's network.
    ForwardTrace forward_encoded(const EncodedExample& example,
                                 const std::string& language) const;
    /// Routes by the example's language tag to that side's network.
    ForwardTrace forward_example(const StanceExample& example) const;

    std::vector<StanceLabel> predict(const std::vector<StanceExample>& examples) const;
    MetricReport evaluate(const std::vector<StanceExample>& examples) const;
    /// CNN-similarity rankings plus gold flags for annotated examples.
    std::vector<EvidenceRanking> evidence_rankings(
        const std::vector<StanceExample>& examples) const;

    /// Bitwise copy of every source.* parameter onto its target.* twin.
    void copy_source_to_target();

    void save(const std::string& stem) const;
    static Model load(const std::string& stem);

private:
    ModelConfig config_;
    LanguageResources source_resources_, target_resources_;
    NetworkParams source_net_, target_net_;
    ClassifierParams classifier_;
    ParamSet params_;
};

struct FitResult {
    std::vector<EpochLog> logs;           // main phase
    std::vector<EpochLog> pretrain_logs;  // source pretraining, when it ran
    MetricReport test_report;             // target test at the best parameters
    double best_dev_macro_f1 = 0.0;
    std::size_t best_epoch = 0;  // 1-based within the main phase
};

/// Halts after `patience` consecutive epochs without a strict improvement.
class EarlyStopper {
public:
    explicit EarlyStopper(std::size_t patience) : patience_(patience) {}
    /// Records one epoch value; true when training should stop.
    bool record(double value);
    std::size_t best_index() const { return best_index_; }
    double best_value() const { return best_value_; }

private:
    std::size_t patience_;
    std::size_t since_best_ = 0;
    std::size_t best_index_ = 0;
    std::size_t count_ = 0;
    double best_value_ = -1.0;
};

class Trainer {
public:
    Trainer(TrainConfig config, DataSplit source, DataSplit target,
            const std::string& embedding_text);

    FitResult fit();

    Model& model() { return model_; }
    const TrainConfig& config() const { return config_; }
    const DataSplit& source_split() const { return source_; }
    const DataSplit& target_split() const { return target_; }

    /// The joint phase's pair stream for one 1-based epoch (reproducible).
    std::vector<CrossPair> epoch_pairs(std::size_t epoch) const;

private:
    struct PhaseStats;
    void run_supervised_phase(const std::string& net_prefix,
                              const std::vector<StanceExample>& train,
                              const std::vector<StanceExample>& dev, std::size_t epochs,
                              const char* phase_tag, std::vector<EpochLog>& logs);
    void run_joint_phase(std::size_t epochs, std::vector<EpochLog>& logs);
    EpochLog finish_epoch(std::size_t epoch, const PhaseStats& stats,
                          const std::vector<StanceExample>& dev) const;

    TrainConfig config_;
    DataSplit source_, target_;
    Model model_;
    std::vector<std::size_t> source_train_labels_, target_train_labels_;
};

/// Fold index partition: each fold is the test set once; the remainder is
/// split train/dev by the floor(0.8)-and-remainder rule, order seeded.
struct FoldIndices {
    std::vector<std::size_t> train, dev, test;
};
std::vector<FoldIndices> make_folds(std::size_t count, std::size_t folds, std::uint64_t seed);

struct CrossValidationResult {
    std::vector<MetricReport> fold_reports;
    double mean_accuracy = 0.0, std_accuracy = 0.0;
    double mean_macro_f1 = 0.0, std_macro_f1 = 0.0;
    double mean_weighted_accuracy = 0.0, std_weighted_accuracy = 0.0;
};

/// K-fold cross-validation over the target data; the source split stays
/// fixed across folds. Each fold trains a fresh model under a fold seed.
CrossValidationResult cross_validate(const TrainConfig& config,
                                     const std::vector<StanceExample>& target_data,
                                     const DataSplit& source_split,
                                     const std::string& embedding_text);

/// Best-development macro-F1 per alpha; the Figure-style sweep protocol.
struct AlphaSweepPoint {
    double alpha = 0.0;
    bool pretrained = false;
    double dev_macro_f1 = 0.0;
};
std::vector<AlphaSweepPoint> alpha_sweep(const TrainConfig& base,
                                         const std::vector<double>& alphas, bool pretrained,
                                         const DataSplit& source, const DataSplit& target,
                                         const std::string& embedding_text);

}  // namespace clmn
