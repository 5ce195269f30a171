#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "privgen/models.hpp"
#include "privgen/parallel.hpp"
#include "privgen/rng.hpp"

namespace privgen {

enum class StateChoice { Sample, Argmax };

inline std::string to_string(StateChoice c) {
    return c == StateChoice::Sample ? "sample" : "argmax";
}

inline StateChoice state_choice_from_string(const std::string& s) {
    if (s == "sample") return StateChoice::Sample;
    if (s == "argmax") return StateChoice::Argmax;
    throw ConfigError("unknown state choice '" + s + "' (expected sample or argmax)");
}

struct GenerationConfig {
    int64_t n = 0;          // objects to generate; 0 = source object count
    int window_size = 0;    // must match the bundle's spec; 0 = take it from the bundle
    int max_steps = 0;      // 0 = bundle default (80% length quantile of the source)
    uint64_t seed = 1;
    int64_t base_date = -1; // anchor for sampled start times; < 0 = bundle anchor
    StateChoice state_choice = StateChoice::Sample;
    unsigned threads = 0;   // 0 = hardware concurrency
};

struct StartSample {
    int64_t timestamp = 0;
    int state = 0;
    std::vector<AttrValue> attributes;
};

namespace detail {

inline int64_t week_start(int64_t ts) {
    int64_t days = ts / 86400;
    if (ts % 86400 < 0) days -= 1;
    int wd = weekday_from_days(days);
    return (days - wd) * 86400;
}

}  // namespace detail

/// Draws a start timestamp, start state, and owner attributes from the
/// bundle's empirical distributions. The timestamp is a (weekday, hour) bin
/// draw placed in the week containing `base_date`, plus a uniform offset
/// within the hour. Attributes are drawn independently; numeric ones as a bin
/// draw plus a uniform offset within the bin.
inline StartSample sample_start(const ModelBundle& bundle, Rng& rng, int64_t base_date) {
    StartSample out;
    out.state = static_cast<int>(rng.pick_weighted(bundle.start.start_state_frequencies));

    std::vector<double> bin_probs;
    bin_probs.reserve(bundle.start.start_time_bins.size());
    for (const auto& b : bundle.start.start_time_bins) bin_probs.push_back(b.prob);
    if (bin_probs.empty()) throw Error("sample_start: bundle has no start-time distribution");
    const auto& bin = bundle.start.start_time_bins[rng.pick_weighted(bin_probs)];
    int64_t anchor = base_date >= 0 ? base_date : bundle.start.anchor_time;
    out.timestamp = detail::week_start(anchor) + int64_t{bin.weekday} * 86400 +
                    int64_t{bin.hour} * 3600 + static_cast<int64_t>(rng.uniform_int(3600));

    for (const auto& dist : bundle.attribute_distributions) {
        size_t idx = rng.pick_weighted(dist.frequencies);
        if (dist.encoding.kind == AttrKind::Numeric) {
            double lo = dist.encoding.bin_edges[idx];
            double hi = dist.encoding.bin_edges[idx + 1];
            out.attributes.emplace_back(lo == hi ? lo : lo + rng.uniform01() * (hi - lo));
        } else {
            out.attributes.emplace_back(dist.encoding.categories[idx]);
        }
    }
    return out;
}

inline StartSample sample_start(const ModelBundle& bundle, Rng& rng) {
    return sample_start(bundle, rng, -1);
}

/// Synthesizes a dataset from a fitted bundle: every object gets a sampled
/// start record, then the state model and the time model extend it step by
/// step until END is drawn or max_steps is reached. Each object consumes its
/// own seed-derived RNG stream, so the output is independent of scheduling.
inline Dataset generate(const ModelBundle& bundle, const GenerationConfig& config) {
    if (config.window_size != 0 && config.window_size != bundle.feature_spec.window_size)
        throw ConfigError("generation window_size " + std::to_string(config.window_size) +
                          " does not match the model's window size " +
                          std::to_string(bundle.feature_spec.window_size));
    const int64_t n = config.n > 0 ? config.n : bundle.object_count;
    if (n < 1) throw ConfigError("generation needs n >= 1");
    const int max_steps = config.max_steps > 0 ? config.max_steps : bundle.default_max_steps;
    if (max_steps < 1) throw ConfigError("generation needs max_steps >= 1");

    std::vector<std::vector<Record>> sequences(static_cast<size_t>(n));
    parallel_for(static_cast<size_t>(n), config.threads, [&](size_t i) {
        Rng rng(derive_seed(config.seed, seed_salt::kObject, i));
        std::string object_id = std::to_string(i + 1);
        StartSample start = sample_start(bundle, rng, config.base_date);

        std::vector<Record>& seq = sequences[i];
        Record first;
        first.object_id = object_id;
        first.timestamp = start.timestamp;
        first.state = start.state;
        first.attributes = start.attributes;
        seq.push_back(std::move(first));

        while (static_cast<int>(seq.size()) < max_steps) {
            FeatureRow row = make_row(seq, seq.size() - 1, static_cast<int>(i),
                                      bundle.feature_spec);
            auto dist = predict_state_distribution(bundle.state_model, row, bundle.feature_spec);
            size_t next = config.state_choice == StateChoice::Sample
                              ? rng.pick_weighted(dist)
                              : argmax_index(dist);
            if (next == static_cast<size_t>(bundle.alphabet.end_index())) break;

            auto x = feature_vector(row, bundle.feature_spec);
            double delta = bundle.time_model.predict(x, static_cast<int>(next));
            Record rec;
            rec.object_id = object_id;
            rec.timestamp = seq.back().timestamp + std::llround(std::max(0.0, delta));
            rec.state = static_cast<int>(next);
            rec.attributes = seq.back().attributes;
            seq.push_back(std::move(rec));
        }
    });

    std::vector<RawRecord> raw;
    for (const auto& seq : sequences) {
        for (const auto& r : seq) {
            RawRecord rr;
            rr.object_id = r.object_id;
            rr.timestamp = r.timestamp;
            rr.state = bundle.alphabet.symbol(r.state);
            rr.attributes = r.attributes;
            raw.push_back(std::move(rr));
        }
    }
    return make_dataset(bundle.schema, std::move(raw));
}

}  // namespace privgen
