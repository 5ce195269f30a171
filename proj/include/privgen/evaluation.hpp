#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "privgen/generator.hpp"
#include "privgen/mining.hpp"
#include "privgen/models.hpp"

namespace privgen {

struct FoldMetrics {
    double acc_source = 0, acc_synth = 0;
    double rmse_source = 0, rmse_synth = 0;
};

struct StatPair {
    std::string name;
    double source = 0;
    double synthetic = 0;
    bool synth_defined = true;
};

struct StateFreqRow {
    std::string state;
    double source_freq = 0;
    double synth_freq = 0;
};

struct TopkPrecisionRow {
    size_t k = 0;
    size_t max_len = 0;
    double precision = 0;
};

/// Train-on-synthetic-test-on-real utility report: accuracy/RMSE pairs are
/// fold means; the statistic and frequency tables compare one full fit's
/// synthetic output against the source.
struct UtilityReport {
    double acc_source = 0, acc_synth = 0;
    double rmse_source = 0, rmse_synth = 0;
    std::vector<FoldMetrics> folds;
    std::vector<StatPair> stat_pairs;
    std::vector<StateFreqRow> state_frequencies;
    std::vector<TopkPrecisionRow> topk;
};

struct EvalConfig {
    int window_size = 5;
    int bins = 100;
    ModelParams model;
    int folds = 10;
    double synthetic_fraction = 0.1;  // synthetic sequences per training sequence
    std::vector<size_t> ks = {20, 50, 100};
    size_t max_len = 5;
    int max_steps = 0;  // 0 = fitted default (80% length quantile)
    StateChoice state_choice = StateChoice::Sample;
    uint64_t seed = 1;
    unsigned threads = 0;
};

/// New dataset holding only the selected sequences (alphabet recollected).
inline Dataset subset_dataset(const Dataset& d, const std::vector<size_t>& seq_indices) {
    std::vector<RawRecord> raw;
    for (size_t s : seq_indices) {
        for (const auto& r : d.sequence(s)) {
            RawRecord rr;
            rr.object_id = r.object_id;
            rr.timestamp = r.timestamp;
            rr.state = d.alphabet.symbol(r.state);
            rr.attributes = r.attributes;
            raw.push_back(std::move(rr));
        }
    }
    return make_dataset(d.schema, std::move(raw));
}

namespace detail {

/// Re-keys a sequence from another dataset into the bundle's alphabet;
/// states the bundle never saw become -1 and flow through the all-zero
/// one-hot guard.
inline std::vector<Record> translate_sequence(std::span<const Record> seq,
                                              const StateAlphabet& from,
                                              const StateAlphabet& to) {
    std::vector<Record> out(seq.begin(), seq.end());
    for (auto& r : out) r.state = to.id_of(from.symbol(r.state));
    return out;
}

}  // namespace detail

struct BundleEval {
    double accuracy = 0;
    double rmse = 0;
    size_t rmse_rows = 0;
};

/// Argmax next-state accuracy and teacher-forced transition-time RMSE of a
/// fitted bundle on held-out data. Predictions and targets are compared by
/// state symbol, so the held-out data may use a different alphabet.
inline BundleEval evaluate_bundle(const ModelBundle& bundle, const Dataset& test) {
    BundleEval out;
    size_t rows = 0, correct = 0;
    double sq_err = 0;
    for (size_t s = 0; s < test.n_sequences(); ++s) {
        auto seq = test.sequence(s);
        auto translated =
            detail::translate_sequence(seq, test.alphabet, bundle.alphabet);
        for (size_t i = 0; i < seq.size(); ++i) {
            FeatureRow row = make_row(translated, i, static_cast<int>(s), bundle.feature_spec);
            auto dist = predict_state_distribution(bundle.state_model, row, bundle.feature_spec);
            auto pred = static_cast<int>(argmax_index(dist));
            bool is_last = i + 1 == seq.size();
            const std::string& actual = is_last ? bundle.alphabet.end_sentinel
                                                : test.alphabet.symbol(seq[i + 1].state);
            if (bundle.alphabet.symbol(pred) == actual) ++correct;
            ++rows;
            if (!is_last) {
                auto x = feature_vector(row, bundle.feature_spec);
                double predicted = bundle.time_model.predict(x, translated[i + 1].state);
                auto delta = static_cast<double>(seq[i + 1].timestamp - seq[i].timestamp);
                sq_err += (predicted - delta) * (predicted - delta);
                ++out.rmse_rows;
            }
        }
    }
    out.accuracy = rows ? static_cast<double>(correct) / static_cast<double>(rows) : 0.0;
    out.rmse = out.rmse_rows ? std::sqrt(sq_err / static_cast<double>(out.rmse_rows)) : 0.0;
    return out;
}

/// Deterministic by-object fold assignment: sequences are shuffled once with
/// the run seed and dealt into `folds` contiguous blocks.
inline std::vector<std::vector<size_t>> fold_partition(size_t n_sequences, int folds,
                                                       uint64_t seed) {
    if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (n_sequences < static_cast<size_t>(folds))
        throw Error("cross-validation needs at least " + std::to_string(folds) +
                    " objects, got " + std::to_string(n_sequences));
    std::vector<size_t> order(n_sequences);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, seed_salt::kFold, 0));
    rng.shuffle(order);
    std::vector<std::vector<size_t>> out(static_cast<size_t>(folds));
    for (size_t f = 0; f < out.size(); ++f) {
        size_t begin = n_sequences * f / out.size();
        size_t end = n_sequences * (f + 1) / out.size();
        out[f].assign(order.begin() + static_cast<long>(begin),
                      order.begin() + static_cast<long>(end));
    }
    return out;
}

/// Cross-validated TSTR comparison: per fold, fit on the training objects,
/// score on the held-out objects, then generate synthetic data from the fit,
/// refit on it, and score the refit on the same held-out objects.
inline UtilityReport tstr_evaluate(const Dataset& source, const EvalConfig& cfg) {
    UtilityReport report;
    auto folds = fold_partition(source.n_sequences(), cfg.folds, cfg.seed);
    for (size_t f = 0; f < folds.size(); ++f) {
        std::vector<size_t> train_idx;
        for (size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
        Dataset train = subset_dataset(source, train_idx);
        Dataset test = subset_dataset(source, folds[f]);

        FeatureSpec spec = make_feature_spec(train, cfg.window_size, cfg.bins);
        ModelBundle bundle = fit_bundle(train, spec, cfg.model,
                                        derive_seed(cfg.seed, seed_salt::kEval, 2 * f),
                                        cfg.threads);
        BundleEval src = evaluate_bundle(bundle, test);

        GenerationConfig gc;
        gc.n = std::max<int64_t>(
            1, std::llround(cfg.synthetic_fraction * static_cast<double>(train.n_sequences())));
        gc.seed = derive_seed(cfg.seed, seed_salt::kEval, 2 * f + 1);
        gc.max_steps = cfg.max_steps;
        gc.state_choice = cfg.state_choice;
        gc.threads = cfg.threads;
        Dataset synth = generate(bundle, gc);

        FeatureSpec synth_spec = make_feature_spec(synth, cfg.window_size, cfg.bins);
        ModelBundle bundle2 = fit_bundle(synth, synth_spec, cfg.model,
                                         derive_seed(cfg.seed, seed_salt::kEval, 2 * f),
                                         cfg.threads);
        BundleEval syn = evaluate_bundle(bundle2, test);

        report.folds.push_back({src.accuracy, syn.accuracy, src.rmse, syn.rmse});
    }
    for (const auto& m : report.folds) {
        report.acc_source += m.acc_source;
        report.acc_synth += m.acc_synth;
        report.rmse_source += m.rmse_source;
        report.rmse_synth += m.rmse_synth;
    }
    auto n = static_cast<double>(report.folds.size());
    report.acc_source /= n;
    report.acc_synth /= n;
    report.rmse_source /= n;
    report.rmse_synth /= n;
    return report;
}

struct StatComparison {
    std::vector<StatPair> stat_pairs;
    std::vector<StateFreqRow> state_frequencies;
};

/// Side-by-side summary statistics plus per-state relative record
/// frequencies. An empty synthetic dataset marks statistics undefined
/// instead of failing.
inline StatComparison compare_stats(const Dataset& source, const Dataset& synthetic) {
    StatComparison out;
    DatasetStats a = summarize(source);
    DatasetStats b = summarize(synthetic);
    bool defined = !synthetic.records.empty();
    auto add = [&](const std::string& name, double sv, double yv) {
        out.stat_pairs.push_back({name, sv, yv, defined});
    };
    add("sequence_count", static_cast<double>(a.sequence_count),
        static_cast<double>(b.sequence_count));
    add("unique_states", static_cast<double>(a.unique_states),
        static_cast<double>(b.unique_states));
    add("seq_size_mean", a.seq_size_mean, b.seq_size_mean);
    add("seq_size_std", a.seq_size_std, b.seq_size_std);
    add("seq_duration_mean", a.seq_duration_mean, b.seq_duration_mean);
    add("seq_duration_std", a.seq_duration_std, b.seq_duration_std);
    add("transfer_time_mean", a.transfer_time_mean, b.transfer_time_mean);
    add("transfer_time_std", a.transfer_time_std, b.transfer_time_std);

    std::map<std::string, StateFreqRow> freq;
    auto accumulate = [&](const Dataset& d, bool is_source) {
        if (d.records.empty()) return;
        double n = static_cast<double>(d.records.size());
        for (const auto& r : d.records) {
            auto& row = freq[d.alphabet.symbol(r.state)];
            (is_source ? row.source_freq : row.synth_freq) += 1.0 / n;
        }
    };
    accumulate(source, true);
    accumulate(synthetic, false);
    for (auto& [state, row] : freq) {
        row.state = state;
        out.state_frequencies.push_back(row);
    }
    return out;
}

/// Held-out estimate of the state model's generalization error: one minus the
/// mean argmax accuracy over by-object folds, fitting only the state model.
inline double estimate_epsilon_s(const Dataset& source, const EvalConfig& cfg) {
    auto folds = fold_partition(source.n_sequences(), cfg.folds, cfg.seed);
    double acc_sum = 0.0;
    for (size_t f = 0; f < folds.size(); ++f) {
        std::vector<size_t> train_idx;
        for (size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
        Dataset train = subset_dataset(source, train_idx);
        Dataset test = subset_dataset(source, folds[f]);
        FeatureSpec spec = make_feature_spec(train, cfg.window_size, cfg.bins);
        FeatureMatrix fm = extract_features(train, spec);
        StateTransitionModel sm = fit_state_model(
            fm, cfg.model, derive_seed(cfg.seed, seed_salt::kEval, 2 * f), cfg.threads);

        size_t rows = 0, correct = 0;
        for (size_t s = 0; s < test.n_sequences(); ++s) {
            auto seq = test.sequence(s);
            auto translated = detail::translate_sequence(seq, test.alphabet, train.alphabet);
            for (size_t i = 0; i < seq.size(); ++i) {
                FeatureRow row = make_row(translated, i, static_cast<int>(s), spec);
                auto dist = predict_state_distribution(sm, row, spec);
                auto pred = static_cast<int>(argmax_index(dist));
                const std::string& actual = i + 1 == seq.size()
                                                ? train.alphabet.end_sentinel
                                                : test.alphabet.symbol(seq[i + 1].state);
                if (train.alphabet.symbol(pred) == actual) ++correct;
                ++rows;
            }
        }
        acc_sum += rows ? static_cast<double>(correct) / static_cast<double>(rows) : 0.0;
    }
    return 1.0 - acc_sum / static_cast<double>(folds.size());
}

}  // namespace privgen
