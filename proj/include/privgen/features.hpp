#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "privgen/dataset.hpp"

namespace privgen {

struct TimeFeatures {
    int weekday = 0;       // Monday = 0 .. Sunday = 6
    int hour = 0;          // 0..23
    int month = 1;         // 1..12
    int week_of_year = 1;  // ISO-8601, 1..53
    int quarter = 1;       // 1..4
    int year = 1970;

    bool operator==(const TimeFeatures&) const = default;
};

inline TimeFeatures extract_time_features(int64_t ts) {
    CivilTime c = from_epoch_seconds(ts);
    TimeFeatures f;
    f.weekday = weekday_from_days(days_from_civil(c.year, c.month, c.day));
    f.hour = c.hour;
    f.month = c.month;
    f.week_of_year = iso_week_of_year(c.year, c.month, c.day);
    f.quarter = (c.month - 1) / 3 + 1;
    f.year = c.year;
    return f;
}

/// Equal-width bin edges over [min, max]. A constant column degenerates to a
/// single bin whose two edges coincide.
inline std::vector<double> fit_discretization(const std::vector<double>& values, int bins = 100) {
    if (values.empty()) throw Error("fit_discretization: no values");
    if (bins < 1) throw ConfigError("fit_discretization: bins must be >= 1");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw Error("fit_discretization: non-finite value");
    if (lo == hi) return {lo, hi};
    std::vector<double> edges(static_cast<size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        edges[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / bins;
    edges.back() = hi;
    return edges;
}

/// One-hot encoding with an unseen-value guard: a value outside `categories`
/// yields an all-zero vector instead of an error.
inline std::vector<double> one_hot(const std::string& value,
                                   const std::vector<std::string>& categories) {
    std::vector<double> flags(categories.size(), 0.0);
    for (size_t i = 0; i < categories.size(); ++i) {
        if (categories[i] == value) {
            flags[i] = 1.0;
            break;
        }
    }
    return flags;
}

/// Per-attribute encoding: bin edges for numeric attributes, the category list
/// for nominal ones.
struct AttributeEncoding {
    std::string name;
    AttrKind kind = AttrKind::Nominal;
    std::vector<double> bin_edges;         // numeric: bins+1 edges
    std::vector<std::string> categories;   // nominal: sorted, duplicate-free

    size_t width() const {
        return kind == AttrKind::Numeric ? bin_edges.size() - 1 : categories.size();
    }

    /// Encoded index of a value, or -1 when the value was never seen (nominal
    /// category absent, or numeric value outside the fitted range).
    int index_of(const AttrValue& v) const {
        if (kind == AttrKind::Numeric) {
            double x = std::get<double>(v);
            double lo = bin_edges.front(), hi = bin_edges.back();
            if (x < lo || x > hi) return -1;
            if (lo == hi) return 0;
            size_t bins = bin_edges.size() - 1;
            auto bin = static_cast<size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
            return static_cast<int>(std::min(bin, bins - 1));
        }
        const std::string& s = std::get<std::string>(v);
        auto it = std::lower_bound(categories.begin(), categories.end(), s);
        if (it == categories.end() || *it != s) return -1;
        return static_cast<int>(it - categories.begin());
    }
};

struct FeatureSpec {
    int window_size = 5;  // |W|: prior steps visible to each prediction
    int state_count = 0;  // |E|
    int bins = 100;       // numeric attribute discretization
    std::vector<AttributeEncoding> attribute_encodings;

    size_t attribute_width() const {
        size_t w = 0;
        for (const auto& e : attribute_encodings) w += e.width();
        return w;
    }

    /// Width of the model-facing numeric vector (identifiers excluded).
    size_t feature_count() const {
        auto w = static_cast<size_t>(window_size);
        auto e = static_cast<size_t>(state_count);
        return 3 + w + w * e + e + 6 + attribute_width();
    }
};

/// Builds the feature spec for a dataset: collects attribute encodings from
/// owner-level values and fixes the window size and bin count.
inline FeatureSpec make_feature_spec(const Dataset& d, int window_size = 5, int bins = 100) {
    if (window_size < 1) throw ConfigError("window_size must be >= 1");
    FeatureSpec spec;
    spec.window_size = window_size;
    spec.state_count = static_cast<int>(d.alphabet.size());
    spec.bins = bins;
    for (size_t a = 0; a < d.schema.attributes.size(); ++a) {
        AttributeEncoding enc;
        enc.name = d.schema.attributes[a].column;
        enc.kind = d.schema.attributes[a].kind;
        if (enc.kind == AttrKind::Numeric) {
            std::vector<double> values;
            for (size_t s = 0; s < d.n_sequences(); ++s)
                values.push_back(std::get<double>(d.attributes_of(s)[a]));
            enc.bin_edges = values.empty() ? std::vector<double>{0.0, 0.0}
                                           : fit_discretization(values, bins);
        } else {
            std::vector<std::string> cats;
            for (size_t s = 0; s < d.n_sequences(); ++s)
                cats.push_back(std::get<std::string>(d.attributes_of(s)[a]));
            std::sort(cats.begin(), cats.end());
            cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
            enc.categories = std::move(cats);
        }
        spec.attribute_encodings.push_back(std::move(enc));
    }
    return spec;
}

/// One fully engineered row per record. The window covers the current state
/// (offset 0) and the window_size-1 states before it; positions without
/// history are padded with zeros / all-zero one-hots.
struct FeatureRow {
    std::string object_id;
    int seq_id = 0;
    int seq_start = 0;
    int state_order = 1;          // 1-based step index within the sequence
    int64_t cum_time = 0;         // seconds since sequence start
    std::vector<int64_t> tran_history;  // window_size entries; [w] = delta w transitions back
    std::vector<int> window_states;     // window_size entries; [w] = state w steps ago, -1 pad
    std::vector<int> last_state_counts; // per-state occurrences inside the window
    TimeFeatures time_features;
    std::vector<AttrValue> attributes;  // owner attributes (raw values)
    int target_next_state = -1;         // state id, or alphabet.end_index() for END
    int64_t target_tran_time = 0;       // valid only when has_tran_target
    bool has_tran_target = false;
};

struct FeatureMatrix {
    FeatureSpec spec;
    std::vector<FeatureRow> rows;
};

/// Engineers the row for position `idx` of a (possibly partial) sequence.
/// Only records [0, idx] are read, so the generator can call this with the
/// sequence built so far. Targets are filled only when a successor exists.
inline FeatureRow make_row(std::span<const Record> seq, size_t idx, int seq_id,
                           const FeatureSpec& spec) {
    const auto W = static_cast<size_t>(spec.window_size);
    FeatureRow row;
    row.object_id = seq[idx].object_id;
    row.seq_id = seq_id;
    row.seq_start = idx == 0 ? 1 : 0;
    row.state_order = static_cast<int>(idx) + 1;
    row.cum_time = seq[idx].timestamp - seq[0].timestamp;
    row.tran_history.assign(W, 0);
    row.window_states.assign(W, -1);
    row.last_state_counts.assign(static_cast<size_t>(spec.state_count), 0);
    for (size_t w = 0; w < W; ++w) {
        if (idx < w) break;
        size_t pos = idx - w;
        row.window_states[w] = seq[pos].state;
        if (seq[pos].state >= 0)
            row.last_state_counts[static_cast<size_t>(seq[pos].state)] += 1;
        if (pos >= 1)
            row.tran_history[w] = seq[pos].timestamp - seq[pos - 1].timestamp;
    }
    row.time_features = extract_time_features(seq[idx].timestamp);
    row.attributes = seq[idx].attributes;
    return row;
}

/// Table-style feature extraction: one row per record, in dataset order. The
/// last row of each sequence gets the END target and no transition-time target.
inline FeatureMatrix extract_features(const Dataset& d, const FeatureSpec& spec) {
    if (spec.state_count != static_cast<int>(d.alphabet.size()))
        throw ConfigError("feature spec state count does not match the dataset alphabet");
    FeatureMatrix fm;
    fm.spec = spec;
    fm.rows.reserve(d.records.size());
    for (size_t s = 0; s < d.n_sequences(); ++s) {
        auto seq = d.sequence(s);
        for (size_t i = 0; i < seq.size(); ++i) {
            FeatureRow row = make_row(seq, i, static_cast<int>(s), spec);
            if (i + 1 < seq.size()) {
                row.target_next_state = seq[i + 1].state;
                row.target_tran_time = seq[i + 1].timestamp - seq[i].timestamp;
                row.has_tran_target = true;
            } else {
                row.target_next_state = static_cast<int>(d.alphabet.size());
            }
            fm.rows.push_back(std::move(row));
        }
    }
    return fm;
}

/// Model-facing column names, in feature_vector order.
inline std::vector<std::string> feature_names(const FeatureSpec& spec) {
    std::vector<std::string> names{"seq_start", "state_order", "cum_time"};
    for (int w = 0; w < spec.window_size; ++w) names.push_back("tran" + std::to_string(w));
    for (int w = 0; w < spec.window_size; ++w)
        for (int e = 0; e < spec.state_count; ++e)
            names.push_back("prev_w" + std::to_string(w) + "_state" + std::to_string(e));
    for (int e = 0; e < spec.state_count; ++e) names.push_back("lastState" + std::to_string(e));
    for (const char* n : {"weekday", "hour", "month", "week_of_year", "quarter", "year"})
        names.emplace_back(n);
    for (const auto& enc : spec.attribute_encodings) {
        if (enc.kind == AttrKind::Numeric)
            for (size_t b = 0; b + 1 < enc.bin_edges.size(); ++b)
                names.push_back("attr_" + enc.name + "_bin" + std::to_string(b));
        else
            for (const auto& c : enc.categories) names.push_back("attr_" + enc.name + "_" + c);
    }
    return names;
}

/// Flattens a row into the numeric vector consumed by the tree models.
/// Identifiers (object id, sequence id) are intentionally not part of it.
inline std::vector<double> feature_vector(const FeatureRow& row, const FeatureSpec& spec) {
    const auto W = static_cast<size_t>(spec.window_size);
    const auto E = static_cast<size_t>(spec.state_count);
    std::vector<double> x;
    x.reserve(spec.feature_count());
    x.push_back(row.seq_start);
    x.push_back(row.state_order);
    x.push_back(static_cast<double>(row.cum_time));
    for (size_t w = 0; w < W; ++w) x.push_back(static_cast<double>(row.tran_history[w]));
    for (size_t w = 0; w < W; ++w)
        for (size_t e = 0; e < E; ++e)
            x.push_back(row.window_states[w] == static_cast<int>(e) ? 1.0 : 0.0);
    for (size_t e = 0; e < E; ++e) x.push_back(row.last_state_counts[e]);
    x.push_back(row.time_features.weekday);
    x.push_back(row.time_features.hour);
    x.push_back(row.time_features.month);
    x.push_back(row.time_features.week_of_year);
    x.push_back(row.time_features.quarter);
    x.push_back(row.time_features.year);
    for (size_t a = 0; a < spec.attribute_encodings.size(); ++a) {
        const auto& enc = spec.attribute_encodings[a];
        int idx = a < row.attributes.size() ? enc.index_of(row.attributes[a]) : -1;
        for (size_t i = 0; i < enc.width(); ++i)
            x.push_back(idx == static_cast<int>(i) ? 1.0 : 0.0);
    }
    return x;
}

/// Debug export: identifiers, engineered features, and targets as CSV.
inline void write_feature_matrix(const FeatureMatrix& fm, const StateAlphabet& alphabet,
                                 std::ostream& os) {
    std::vector<std::string> header{"object_id", "seq_id"};
    for (const auto& n : feature_names(fm.spec)) header.push_back(n);
    header.emplace_back("target_next_state");
    header.emplace_back("target_tran_time");
    write_csv_row(os, header);
    std::vector<std::string> fields;
    for (const auto& row : fm.rows) {
        fields.clear();
        fields.push_back(row.object_id);
        fields.push_back(std::to_string(row.seq_id));
        for (double v : feature_vector(row, fm.spec)) fields.push_back(format_double(v));
        fields.push_back(alphabet.symbol(row.target_next_state));
        fields.push_back(row.has_tran_target ? std::to_string(row.target_tran_time) : "");
        write_csv_row(os, fields);
    }
}

}  // namespace privgen
