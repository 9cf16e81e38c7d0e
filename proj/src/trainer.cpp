#include "clmn/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "clmn/checkpoint.hpp"
#include "clmn/errors.hpp"

namespace clmn {

TrainMode parse_train_mode(const std::string& text) {
    if (text == "target_only") return TrainMode::target_only;
    if (text == "source_only") return TrainMode::source_only;
    if (text == "pretrain_finetune") return TrainMode::pretrain_finetune;
    if (text == "clmn") return TrainMode::clmn;
    if (text == "clmn_pretrained") return TrainMode::clmn_pretrained;
    throw ConfigError("unknown training mode '" + text + "'");
}

std::string to_string(TrainMode mode) {
    switch (mode) {
        case TrainMode::target_only: return "target_only";
        case TrainMode::source_only: return "source_only";
        case TrainMode::pretrain_finetune: return "pretrain_finetune";
        case TrainMode::clmn: return "clmn";
        case TrainMode::clmn_pretrained: return "clmn_pretrained";
    }
    throw ConfigError("invalid training mode value");
}

void TrainConfig::validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0,1]");
    if (margin <= 0.0) throw ConfigError("margin must be positive");
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (batch_size < 1) throw ConfigError("batch size must be at least 1");
    if (learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
    if (model.embed_dim < 1 || model.lstm_hidden < 1 || model.cnn_filters < 1)
        throw ConfigError("model dimensions must be positive");
    if (model.max_paragraphs < 1) throw ConfigError("max_paragraphs must be at least 1");
}

namespace {

std::string format_double(double value) {
    char buffer[40];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

}  // namespace

std::string epoch_log_csv(const std::vector<EpochLog>& logs) {
    std::string out = "epoch,l_ca,l_csa,l_total,dev_acc,dev_macro_f1,dev_weighted_acc\n";
    for (const auto& log : logs) {
        out += std::to_string(log.epoch);
        out += ',';
        out += format_double(log.mean_ca);
        out += ',';
        out += format_double(log.mean_csa);
        out += ',';
        out += format_double(log.mean_total);
        out += ',';
        out += format_double(log.dev_accuracy);
        out += ',';
        out += format_double(log.dev_macro_f1);
        out += ',';
        out += format_double(log.dev_weighted_accuracy);
        out += '\n';
    }
    return out;
}

LanguageResources build_resources(const DataSplit& split, const std::string& embedding_text,
                                  std::size_t expected_dim) {
    std::vector<std::string> all_texts;
    std::vector<std::vector<std::string>> fit_corpus;
    auto collect = [&](const std::vector<StanceExample>& examples, bool for_fit) {
        for (const auto& ex : examples) {
            all_texts.push_back(ex.claim);
            all_texts.push_back(ex.document);
            if (for_fit) {
                fit_corpus.push_back(tokenize(ex.claim));
                fit_corpus.push_back(tokenize(ex.document));
            }
        }
    };
    collect(split.train, true);
    collect(split.dev, false);
    collect(split.test, false);
    if (fit_corpus.empty()) {
        // No training fold on this side; fall back to whatever text exists
        // (fitting is unsupervised), else a single empty document.
        for (const auto& ex : split.dev) {
            fit_corpus.push_back(tokenize(ex.claim));
            fit_corpus.push_back(tokenize(ex.document));
        }
        if (fit_corpus.empty())
            for (const auto& ex : split.test) {
                fit_corpus.push_back(tokenize(ex.claim));
                fit_corpus.push_back(tokenize(ex.document));
            }
        if (fit_corpus.empty()) fit_corpus.push_back({});
    }

    LanguageResources res{build_vocabulary(all_texts), EmbeddingTable(0, 0),
                          TfidfModel::from_state({}, 1)};
    std::istringstream stream(embedding_text);
    res.embeddings = load_embeddings(stream, "<embeddings>", res.vocab, expected_dim);
    res.tfidf = TfidfModel::fit(fit_corpus, res.vocab);
    return res;
}

Model::Model(const ModelConfig& config, LanguageResources source, LanguageResources target,
             std::uint64_t seed)
    : config_(config),
      source_resources_(std::move(source)),
      target_resources_(std::move(target)) {
    Rng source_rng(derive_seed(seed, "init.source"));
    Rng target_rng(derive_seed(seed, "init.target"));
    Rng classifier_rng(derive_seed(seed, "init.classifier"));
    source_net_ = NetworkParams::init(config_, source_rng);
    target_net_ = NetworkParams::init(config_, target_rng);
    classifier_ = ClassifierParams::init(config_, classifier_rng);
    source_net_.register_params(params_, "source");
    target_net_.register_params(params_, "target");
    classifier_.register_params(params_, "shared");
}

const LanguageResources& Model::resources(const std::string& language) const {
    if (language == kSourceLanguage) return source_resources_;
    if (language == kTargetLanguage) return target_resources_;
    throw ConfigError("unknown language tag '" + language + "'");
}

EncodedExample Model::prepare(const StanceExample& example) const {
    const LanguageResources& res = resources(example.language);
    EncodedExample enc;
    enc.id = example.id;
    enc.label = example.label;
    enc.rationale = example.rationale;

    auto claim_tokens = tokenize(example.claim);
    if (claim_tokens.size() > config_.token_cap) claim_tokens.resize(config_.token_cap);
    for (const auto& token : claim_tokens) enc.claim_tokens.push_back(res.vocab.lookup(token));

    const auto paragraphs = split_paragraphs(example.document, config_.max_paragraphs);
    for (const auto& paragraph : paragraphs) {
        if (paragraph.padding) {
            enc.slot_tokens.push_back({});
            enc.slot_padding.push_back(true);
            enc.tfidf_sim.push_back(0.0);
            continue;
        }
        auto tokens = tokenize(paragraph.text);
        if (tokens.size() > config_.token_cap) tokens.resize(config_.token_cap);
        std::vector<std::size_t> ids;
        ids.reserve(tokens.size());
        for (const auto& token : tokens) ids.push_back(res.vocab.lookup(token));
        enc.slot_tokens.push_back(std::move(ids));
        enc.slot_padding.push_back(false);
        enc.tfidf_sim.push_back(res.tfidf.cosine(res.vocab, claim_tokens, tokens));
    }
    return enc;
}

ForwardTrace Model::forward_encoded(const EncodedExample& example,
                                    const std::string& language) const {
    const bool source_side = language == kSourceLanguage;
    return forward(source_side ? source_net_ : target_net_, classifier_, example,
                   resources(language).embeddings, config_);
}

ForwardTrace Model::forward_example(const StanceExample& example) const {
    return forward_encoded(prepare(example), example.language);
}

std::vector<StanceLabel> Model::predict(const std::vector<StanceExample>& examples) const {
    NoGradGuard no_grad;
    std::vector<StanceLabel> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) out.push_back(forward_example(ex).predicted());
    return out;
}

MetricReport Model::evaluate(const std::vector<StanceExample>& examples) const {
    std::vector<StanceLabel> gold;
    gold.reserve(examples.size());
    for (const auto& ex : examples) gold.push_back(ex.label);
    return compute_report(gold, predict(examples));
}

std::vector<EvidenceRanking> Model::evidence_rankings(
    const std::vector<StanceExample>& examples) const {
    NoGradGuard no_grad;
    std::vector<EvidenceRanking> out;
    for (const auto& ex : examples) {
        if (std::find(ex.rationale.begin(), ex.rationale.end(), true) == ex.rationale.end())
            continue;
        auto trace = forward_example(ex);
        EvidenceRanking entry;
        for (std::size_t j = 0; j < trace.slot_padding.size(); ++j) {
            if (trace.slot_padding[j]) continue;
            entry.scores.push_back(trace.cnn_scores[j]->value());
            entry.gold.push_back(j < ex.rationale.size() && ex.rationale[j]);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

void Model::copy_source_to_target() {
    const std::string prefix = "source.";
    for (const auto& entry : params_.items()) {
        if (entry.name.rfind(prefix, 0) != 0) continue;
        const std::string twin = "target." + entry.name.substr(prefix.size());
        if (params_.contains(twin)) params_.at(twin)->data = entry.tensor->data;
    }
}

namespace {

nlohmann::ordered_json resources_to_json(const LanguageResources& res) {
    nlohmann::ordered_json out;
    std::vector<std::string> tokens;
    tokens.reserve(res.vocab.size());
    for (std::size_t i = 0; i < res.vocab.size(); ++i) tokens.push_back(res.vocab.token(i));
    out["vocab"] = std::move(tokens);
    out["tfidf_df"] = res.tfidf.document_frequencies();
    out["tfidf_corpus_size"] = res.tfidf.corpus_size();
    return out;
}

LanguageResources resources_from_json(const nlohmann::ordered_json& json,
                                      const TensorPtr& embedding, std::size_t dim) {
    Vocabulary vocab;
    const auto tokens = json.at("vocab").get<std::vector<std::string>>();
    for (std::size_t i = 2; i < tokens.size(); ++i) vocab.add(tokens[i]);
    EmbeddingTable table(vocab.size(), dim);
    table.assign_from_tensor(*embedding);
    auto tfidf = TfidfModel::from_state(json.at("tfidf_df").get<std::vector<std::int64_t>>(),
                                        json.at("tfidf_corpus_size").get<std::size_t>());
    return LanguageResources{std::move(vocab), std::move(table), std::move(tfidf)};
}

}  // namespace

void Model::save(const std::string& stem) const {
    ParamSet to_save;
    to_save.add_all("", params_);
    to_save.add("source.embedding", source_resources_.embeddings.as_tensor());
    to_save.add("target.embedding", target_resources_.embeddings.as_tensor());

    nlohmann::ordered_json extras;
    extras["model"] = {{"embed_dim", config_.embed_dim},
                       {"lstm_hidden", config_.lstm_hidden},
                       {"cnn_filters", config_.cnn_filters},
                       {"cnn_width", config_.cnn_width},
                       {"max_paragraphs", config_.max_paragraphs},
                       {"token_cap", config_.token_cap}};
    extras["resources"] = {{"source", resources_to_json(source_resources_)},
                           {"target", resources_to_json(target_resources_)}};
    save_checkpoint(stem, to_save, extras);
}

Model Model::load(const std::string& stem) {
    auto loaded = load_checkpoint(stem);
    const auto& meta = loaded.manifest.at("model");
    ModelConfig config;
    config.embed_dim = meta.at("embed_dim").get<std::size_t>();
    config.lstm_hidden = meta.at("lstm_hidden").get<std::size_t>();
    config.cnn_filters = meta.at("cnn_filters").get<std::size_t>();
    config.cnn_width = meta.at("cnn_width").get<std::size_t>();
    config.max_paragraphs = meta.at("max_paragraphs").get<std::size_t>();
    config.token_cap = meta.at("token_cap").get<std::size_t>();

    TensorPtr source_embedding, target_embedding;
    for (const auto& entry : loaded.params) {
        if (entry.name == "source.embedding") source_embedding = entry.tensor;
        if (entry.name == "target.embedding") target_embedding = entry.tensor;
    }
    if (!source_embedding || !target_embedding)
        throw ParseError("checkpoint " + stem + ": missing embedding tables");

    const auto& res_json = loaded.manifest.at("resources");
    Model model(config,
                resources_from_json(res_json.at("source"), source_embedding,
                                    config.embed_dim),
                resources_from_json(res_json.at("target"), target_embedding,
                                    config.embed_dim),
                /*seed=*/0);
    assign_checkpoint(loaded, model.params_);
    return model;
}

bool EarlyStopper::record(double value) {
    if (count_ == 0 || value > best_value_) {
        best_value_ = value;
        best_index_ = count_;
        since_best_ = 0;
    } else {
        ++since_best_;
    }
    ++count_;
    return since_best_ >= patience_;
}

Trainer::Trainer(TrainConfig config, DataSplit source, DataSplit target,
                 const std::string& embedding_text)
    : config_(std::move(config)),
      source_(std::move(source)),
      target_(std::move(target)),
      model_(config_.model,
             build_resources(source_, embedding_text, config_.model.embed_dim),
             build_resources(target_, embedding_text, config_.model.embed_dim),
             config_.seed) {
    config_.validate();
    const bool needs_source = config_.mode != TrainMode::target_only;
    const bool needs_target = config_.mode != TrainMode::source_only;
    if (needs_source && source_.train.empty())
        throw ConfigError(to_string(config_.mode) + " requires source training data");
    if (needs_target && target_.train.empty())
        throw ConfigError(to_string(config_.mode) + " requires target training data");
    for (const auto& ex : source_.train) source_train_labels_.push_back(stance_index(ex.label));
    for (const auto& ex : target_.train) target_train_labels_.push_back(stance_index(ex.label));
}

std::vector<CrossPair> Trainer::epoch_pairs(std::size_t epoch) const {
    return sample_pairs(source_train_labels_, target_train_labels_, config_.pair_policy,
                        derive_seed(config_.seed, "pairs." + std::to_string(epoch)));
}

struct Trainer::PhaseStats {
    double ca_sum = 0.0, csa_sum = 0.0, total_sum = 0.0, weight = 0.0;

    void add(double ca, double csa, double total, double batch_weight) {
        ca_sum += ca * batch_weight;
        csa_sum += csa * batch_weight;
        total_sum += total * batch_weight;
        weight += batch_weight;
    }
};

EpochLog Trainer::finish_epoch(std::size_t epoch, const PhaseStats& stats,
                               const std::vector<StanceExample>& dev) const {
    EpochLog log;
    log.epoch = epoch;
    if (stats.weight > 0.0) {
        log.mean_ca = stats.ca_sum / stats.weight;
        log.mean_csa = stats.csa_sum / stats.weight;
        log.mean_total = stats.total_sum / stats.weight;
    }
    if (!dev.empty()) {
        const MetricReport report = model_.evaluate(dev);
        log.dev_accuracy = report.accuracy;
        log.dev_macro_f1 = report.macro_f1;
        log.dev_weighted_accuracy = report.weighted_accuracy;
    }
    return log;
}

namespace {

void require_finite(double value, const char* term, std::size_t epoch, std::size_t batch) {
    if (std::isfinite(value)) return;
    throw std::runtime_error("training aborted: " + std::string(term) +
                             " loss is not finite at epoch " + std::to_string(epoch) +
                             ", batch " + std::to_string(batch));
}

}  // namespace

void Trainer::run_supervised_phase(const std::string& net_prefix,
                                   const std::vector<StanceExample>& train,
                                   const std::vector<StanceExample>& dev,
                                   std::size_t epochs, const char* phase_tag,
                                   std::vector<EpochLog>& logs) {
    std::vector<EncodedExample> encoded;
    encoded.reserve(train.size());
    const std::string language =
        net_prefix == "source" ? kSourceLanguage : kTargetLanguage;
    for (const auto& ex : train) encoded.push_back(model_.prepare(ex));

    ParamSet phase_params;
    (net_prefix == "source" ? model_.source_net() : model_.target_net())
        .register_params(phase_params, net_prefix);
    model_.classifier().register_params(phase_params, "shared");
    Adam optimizer(phase_params, {config_.learning_rate, 0.9, 0.999, 1e-8});

    EarlyStopper stopper(config_.patience);
    auto best = model_.params().snapshot();

    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(config_.seed, std::string(phase_tag) + ".order." +
                                                      std::to_string(epoch)));
        shuffle_rng.shuffle(order);

        PhaseStats stats;
        for (std::size_t start = 0, batch_no = 0; start < order.size();
             start += config_.batch_size, ++batch_no) {
            const std::size_t end = std::min(order.size(), start + config_.batch_size);
            phase_params.zero_grad();
            std::vector<TensorPtr> terms;
            terms.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                auto trace = model_.forward_encoded(encoded[order[i]], language);
                terms.push_back(cross_entropy_with_logits(
                    trace.logits, stance_index(encoded[order[i]].label)));
            }
            auto mean_ca = scale(add_n(terms), 1.0 / static_cast<double>(terms.size()));
            require_finite(mean_ca->value(), "classification", epoch, batch_no);
            backward(mean_ca);
            optimizer.step();
            stats.add(mean_ca->value(), 0.0, mean_ca->value(),
                      static_cast<double>(terms.size()));
        }

        logs.push_back(finish_epoch(epoch, stats, dev));
        if (dev.empty()) {
            best = model_.params().snapshot();
            continue;
        }
        const bool stop = stopper.record(logs.back().dev_macro_f1);
        if (stopper.best_index() == epoch - 1) best = model_.params().snapshot();
        if (stop) break;
    }
    model_.params().restore(best);
}

void Trainer::run_joint_phase(std::size_t epochs, std::vector<EpochLog>& logs) {
    std::vector<EncodedExample> source_encoded, target_encoded;
    source_encoded.reserve(source_.train.size());
    target_encoded.reserve(target_.train.size());
    for (const auto& ex : source_.train) source_encoded.push_back(model_.prepare(ex));
    for (const auto& ex : target_.train) target_encoded.push_back(model_.prepare(ex));

    Adam optimizer(model_.params(), {config_.learning_rate, 0.9, 0.999, 1e-8});
    EarlyStopper stopper(config_.patience);
    auto best = model_.params().snapshot();

    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        auto pairs = epoch_pairs(epoch);
        Rng shuffle_rng(
            derive_seed(config_.seed, "pair_order." + std::to_string(epoch)));
        shuffle_rng.shuffle(pairs);

        PhaseStats stats;
        for (std::size_t start = 0, batch_no = 0; start < pairs.size();
             start += config_.batch_size, ++batch_no) {
            const std::size_t end = std::min(pairs.size(), start + config_.batch_size);
            model_.params().zero_grad();
            std::vector<TensorPtr> ca_terms, csa_terms;
            ca_terms.reserve(2 * (end - start));
            csa_terms.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const CrossPair& pair = pairs[i];
                auto source_trace = model_.forward_encoded(
                    source_encoded[pair.source_index], kSourceLanguage);
                auto target_trace = model_.forward_encoded(
                    target_encoded[pair.target_index], kTargetLanguage);
                // Source-supervised pass, then the switched pass with the
                // target sample feeding the classifier.
                ca_terms.push_back(cross_entropy_with_logits(
                    source_trace.logits, source_train_labels_[pair.source_index]));
                ca_terms.push_back(cross_entropy_with_logits(
                    target_trace.logits, target_train_labels_[pair.target_index]));
                csa_terms.push_back(csa_loss(source_trace.joint, target_trace.joint,
                                             pair.same_label, config_.margin));
            }
            auto mean_ca = scale(add_n(ca_terms), 1.0 / static_cast<double>(ca_terms.size()));
            auto mean_csa =
                scale(add_n(csa_terms), 1.0 / static_cast<double>(csa_terms.size()));
            auto loss = total_loss(mean_ca, mean_csa, config_.alpha);
            require_finite(mean_ca->value(), "classification", epoch, batch_no);
            require_finite(mean_csa->value(), "stance alignment", epoch, batch_no);
            require_finite(loss->value(), "total", epoch, batch_no);
            backward(loss);
            optimizer.step();
            stats.add(mean_ca->value(), mean_csa->value(), loss->value(),
                      static_cast<double>(end - start));
        }

        logs.push_back(finish_epoch(epoch, stats, target_.dev));
        if (target_.dev.empty()) {
            best = model_.params().snapshot();
            continue;
        }
        const bool stop = stopper.record(logs.back().dev_macro_f1);
        if (stopper.best_index() == epoch - 1) best = model_.params().snapshot();
        if (stop) break;
    }
    model_.params().restore(best);
}

FitResult Trainer::fit() {
    FitResult result;
    if (config_.mode == TrainMode::clmn_pretrained ||
        config_.mode == TrainMode::pretrain_finetune) {
        run_supervised_phase("source", source_.train, source_.dev, config_.pretrain_epochs,
                             "pretrain", result.pretrain_logs);
        model_.copy_source_to_target();
    }

    switch (config_.mode) {
        case TrainMode::target_only:
            run_supervised_phase("target", target_.train, target_.dev, config_.epochs,
                                 "main", result.logs);
            break;
        case TrainMode::source_only:
            run_supervised_phase("source", source_.train, source_.dev, config_.epochs,
                                 "main", result.logs);
            model_.copy_source_to_target();
            break;
        case TrainMode::pretrain_finetune:
            run_supervised_phase("target", target_.train, target_.dev, config_.epochs,
                                 "main", result.logs);
            break;
        case TrainMode::clmn:
        case TrainMode::clmn_pretrained:
            run_joint_phase(config_.epochs, result.logs);
            break;
    }

    for (const auto& log : result.logs) {
        if (result.best_epoch == 0 || log.dev_macro_f1 > result.best_dev_macro_f1) {
            result.best_dev_macro_f1 = log.dev_macro_f1;
            result.best_epoch = log.epoch;
        }
    }
    if (!target_.test.empty()) result.test_report = model_.evaluate(target_.test);
    return result;
}

std::vector<FoldIndices> make_folds(std::size_t count, std::size_t folds,
                                    std::uint64_t seed) {
    if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (count < folds)
        throw ConfigError("dataset of " + std::to_string(count) +
                          " examples is smaller than the fold count " +
                          std::to_string(folds));
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    Rng rng(derive_seed(seed, "folds"));
    rng.shuffle(order);

    std::vector<std::vector<std::size_t>> fold_members(folds);
    const std::size_t base = count / folds;
    const std::size_t extra = count % folds;
    std::size_t cursor = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) fold_members[f].push_back(order[cursor++]);
    }

    std::vector<FoldIndices> out(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        out[f].test = fold_members[f];
        std::vector<std::size_t> remaining;
        for (std::size_t g = 0; g < folds; ++g)
            if (g != f)
                remaining.insert(remaining.end(), fold_members[g].begin(),
                                 fold_members[g].end());
        const std::size_t train_count =
            static_cast<std::size_t>(0.8 * static_cast<double>(remaining.size()));
        out[f].train.assign(remaining.begin(),
                            remaining.begin() + static_cast<std::ptrdiff_t>(train_count));
        out[f].dev.assign(remaining.begin() + static_cast<std::ptrdiff_t>(train_count),
                          remaining.end());
    }
    return out;
}

CrossValidationResult cross_validate(const TrainConfig& config,
                                     const std::vector<StanceExample>& target_data,
                                     const DataSplit& source_split,
                                     const std::string& embedding_text) {
    const auto folds = make_folds(target_data.size(), config.folds, config.seed);
    CrossValidationResult result;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        DataSplit target;
        for (auto i : folds[f].train) target.train.push_back(target_data[i]);
        for (auto i : folds[f].dev) target.dev.push_back(target_data[i]);
        for (auto i : folds[f].test) target.test.push_back(target_data[i]);
        TrainConfig fold_config = config;
        fold_config.seed = derive_seed(config.seed, "fold." + std::to_string(f));
        Trainer trainer(fold_config, source_split, target, embedding_text);
        result.fold_reports.push_back(trainer.fit().test_report);
    }

    auto aggregate = [&](auto getter, double& mean, double& std_dev) {
        double total = 0.0;
        for (const auto& report : result.fold_reports) total += getter(report);
        mean = total / static_cast<double>(result.fold_reports.size());
        double variance = 0.0;
        for (const auto& report : result.fold_reports) {
            const double diff = getter(report) - mean;
            variance += diff * diff;
        }
        std_dev = std::sqrt(variance / static_cast<double>(result.fold_reports.size()));
    };
    aggregate([](const MetricReport& r) { return r.accuracy; }, result.mean_accuracy,
              result.std_accuracy);
    aggregate([](const MetricReport& r) { return r.macro_f1; }, result.mean_macro_f1,
              result.std_macro_f1);
    aggregate([](const MetricReport& r) { return r.weighted_accuracy; },
              result.mean_weighted_accuracy, result.std_weighted_accuracy);
    return result;
}

std::vector<AlphaSweepPoint> alpha_sweep(const TrainConfig& base,
                                         const std::vector<double>& alphas, bool pretrained,
                                         const DataSplit& source, const DataSplit& target,
                                         const std::string& embedding_text) {
    std::vector<AlphaSweepPoint> points;
    for (double alpha : alphas) {
        TrainConfig config = base;
        config.alpha = alpha;
        config.mode = pretrained ? TrainMode::clmn_pretrained : TrainMode::clmn;
        Trainer trainer(config, source, target, embedding_text);
        const FitResult fit = trainer.fit();
        points.push_back({alpha, pretrained, fit.best_dev_macro_f1});
    }
    return points;
}

}  // namespace clmn
