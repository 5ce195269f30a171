#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "privgen/dataset.hpp"
#include "privgen/features.hpp"
#include "privgen/forest.hpp"
#include "privgen/markov.hpp"
#include "privgen/parallel.hpp"

namespace privgen {

enum class StateModelVariant { RandomSelection, Markov, DecisionTree, RandomForest, Xgboost };

inline std::string to_string(StateModelVariant v) {
    switch (v) {
        case StateModelVariant::RandomSelection: return "random_selection";
        case StateModelVariant::Markov: return "markov";
        case StateModelVariant::DecisionTree: return "decision_tree";
        case StateModelVariant::RandomForest: return "random_forest";
        case StateModelVariant::Xgboost: return "xgboost";
    }
    return "unknown";
}

inline StateModelVariant variant_from_string(const std::string& s) {
    if (s == "random_selection") return StateModelVariant::RandomSelection;
    if (s == "markov") return StateModelVariant::Markov;
    if (s == "decision_tree") return StateModelVariant::DecisionTree;
    if (s == "random_forest") return StateModelVariant::RandomForest;
    if (s == "xgboost") return StateModelVariant::Xgboost;
    throw ConfigError("unknown state model variant '" + s + "'");
}

/// Distribution of one owner attribute over its encoded bins/categories,
/// with frequencies counted per owner rather than per record.
struct AttributeDistribution {
    AttributeEncoding encoding;
    std::vector<double> frequencies;
};

struct StartDistributions {
    std::vector<double> start_state_frequencies;  // over states
    struct TimeBin {
        int weekday = 0;
        int hour = 0;
        double prob = 0.0;
    };
    std::vector<TimeBin> start_time_bins;  // empirical (weekday, hour) distribution
    int64_t anchor_time = 0;               // default week anchor for sampled starts
};

struct ModelParams {
    StateModelVariant variant = StateModelVariant::Markov;
    int markov_order = 2;
    ForestParams state_forest;
    ForestParams time_forest;
};

/// Next-state model. One type covers all variants so bundles stay plain
/// serializable values: the markov member is used by the markov variant, the
/// per-class scorer forests by the tree variants.
struct StateTransitionModel {
    StateModelVariant variant = StateModelVariant::RandomSelection;
    int state_count = 0;
    MarkovModel markov;
    std::vector<Forest> scorers;  // state_count+1 one-vs-rest scorers (END last)

    bool needs_features() const {
        return variant == StateModelVariant::DecisionTree ||
               variant == StateModelVariant::RandomForest;
    }
};

/// Collects the row's window states (newest at offset 0) into oldest-first
/// order for markov conditioning; stops at padded or unseen (-1) positions.
inline std::vector<int> markov_history(const FeatureRow& row) {
    std::vector<int> hist;
    for (int s : row.window_states) {
        if (s < 0) break;
        hist.push_back(s);
    }
    std::reverse(hist.begin(), hist.end());
    return hist;
}

/// Probability vector over states plus END (sums to 1).
inline std::vector<double> predict_state_distribution(const StateTransitionModel& m,
                                                      const FeatureRow& row,
                                                      const FeatureSpec& spec) {
    const size_t classes = static_cast<size_t>(m.state_count) + 1;
    switch (m.variant) {
        case StateModelVariant::RandomSelection:
            return std::vector<double>(classes, 1.0 / static_cast<double>(classes));
        case StateModelVariant::Markov: {
            auto hist = markov_history(row);
            return m.markov.predict(hist);
        }
        case StateModelVariant::DecisionTree:
        case StateModelVariant::RandomForest: {
            auto x = feature_vector(row, spec);
            std::vector<double> scores(classes, 0.0);
            double total = 0.0;
            for (size_t c = 0; c < classes; ++c) {
                scores[c] = std::max(0.0, m.scorers[c].predict(x));
                total += scores[c];
            }
            if (total <= 0.0)
                return std::vector<double>(classes, 1.0 / static_cast<double>(classes));
            for (auto& s : scores) s /= total;
            return scores;
        }
        case StateModelVariant::Xgboost:
            throw ConfigError("xgboost state models are not available in this build");
    }
    throw ConfigError("invalid state model variant");
}

inline size_t argmax_index(std::span<const double> v) {
    return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Regression forest over the engineered features plus a one-hot of the next
/// state; output clamped to nonnegative seconds.
struct TimeTransitionModel {
    Forest forest;
    int state_count = 0;

    double predict(std::span<const double> features, int next_state) const {
        std::vector<double> x(features.begin(), features.end());
        for (int e = 0; e < state_count; ++e)
            x.push_back(next_state == e ? 1.0 : 0.0);
        return std::max(0.0, forest.predict(x));
    }
};

/// Everything fitted from one source dataset; immutable after fit.
struct ModelBundle {
    SchemaConfig schema;
    StateAlphabet alphabet;
    FeatureSpec feature_spec;
    std::vector<AttributeDistribution> attribute_distributions;
    StartDistributions start;
    StateTransitionModel state_model;
    TimeTransitionModel time_model;
    int64_t object_count = 0;
    int default_max_steps = 1;  // 80% quantile of source sequence lengths
    uint64_t seed = 0;
    ModelParams params;
};

inline DesignMatrix build_design(const FeatureMatrix& fm, unsigned threads = 1) {
    DesignMatrix x(fm.rows.size(), fm.spec.feature_count());
    parallel_for(fm.rows.size(), threads, [&](size_t i) {
        auto v = feature_vector(fm.rows[i], fm.spec);
        std::copy(v.begin(), v.end(), x.data.begin() + static_cast<long>(i * x.n_cols));
    });
    return x;
}

/// Owner-level attribute distributions: each owner contributes once per
/// attribute, so duplicating records within an owner changes nothing.
inline std::vector<AttributeDistribution> fit_attribute_distributions(const Dataset& d,
                                                                      const FeatureSpec& spec) {
    std::vector<AttributeDistribution> out;
    const double owners = static_cast<double>(d.n_sequences());
    for (size_t a = 0; a < spec.attribute_encodings.size(); ++a) {
        AttributeDistribution dist;
        dist.encoding = spec.attribute_encodings[a];
        dist.frequencies.assign(dist.encoding.width(), 0.0);
        for (size_t s = 0; s < d.n_sequences(); ++s) {
            int idx = dist.encoding.index_of(d.attributes_of(s)[a]);
            if (idx >= 0) dist.frequencies[static_cast<size_t>(idx)] += 1.0;
        }
        if (owners > 0)
            for (auto& f : dist.frequencies) f /= owners;
        out.push_back(std::move(dist));
    }
    return out;
}

inline StartDistributions fit_start_distributions(const Dataset& d) {
    StartDistributions start;
    start.start_state_frequencies.assign(d.alphabet.size(), 0.0);
    std::map<std::pair<int, int>, double> bins;
    int64_t min_time = 0;
    for (size_t s = 0; s < d.n_sequences(); ++s) {
        const Record& first = d.sequence(s)[0];
        start.start_state_frequencies[static_cast<size_t>(first.state)] += 1.0;
        TimeFeatures tf = extract_time_features(first.timestamp);
        bins[{tf.weekday, tf.hour}] += 1.0;
        if (s == 0 || first.timestamp < min_time) min_time = first.timestamp;
    }
    const double n = static_cast<double>(d.n_sequences());
    for (auto& f : start.start_state_frequencies) f /= n;
    for (const auto& [key, count] : bins)
        start.start_time_bins.push_back({key.first, key.second, count / n});
    start.anchor_time = min_time;
    return start;
}

namespace detail {

inline void count_markov_from_rows(const FeatureMatrix& fm, int order, MarkovModel& m) {
    m.order = order;
    m.state_count = fm.spec.state_count;
    m.global_counts.assign(static_cast<size_t>(fm.spec.state_count) + 1, 0.0);
    m.start_state_frequencies.assign(static_cast<size_t>(fm.spec.state_count), 0.0);
    double starts = 0.0;
    for (const auto& row : fm.rows) {
        int next = row.target_next_state;
        m.global_counts[static_cast<size_t>(next)] += 1.0;
        if (row.seq_start) {
            m.start_state_frequencies[static_cast<size_t>(row.window_states[0])] += 1.0;
            starts += 1.0;
        }
        auto hist = markov_history(row);
        auto max_len = std::min<size_t>(static_cast<size_t>(order), hist.size());
        for (size_t len = 1; len <= max_len; ++len) {
            std::vector<int> ctx(hist.end() - static_cast<long>(len), hist.end());
            auto [it, ins] = m.context_counts.try_emplace(
                std::move(ctx),
                std::vector<double>(static_cast<size_t>(fm.spec.state_count) + 1, 0.0));
            it->second[static_cast<size_t>(next)] += 1.0;
        }
    }
    if (starts > 0)
        for (auto& f : m.start_state_frequencies) f /= starts;
}

}  // namespace detail

/// Fits the configured next-state model from an extracted feature matrix.
/// Tree variants train one binary scorer per class (states plus END); a class
/// never observed as a target keeps a constant zero scorer.
inline StateTransitionModel fit_state_model(const FeatureMatrix& fm, const ModelParams& params,
                                            uint64_t seed, unsigned threads = 1) {
    if (fm.rows.empty()) throw Error("fit_state_model: empty feature matrix");
    StateTransitionModel m;
    m.variant = params.variant;
    m.state_count = fm.spec.state_count;
    switch (params.variant) {
        case StateModelVariant::RandomSelection:
            return m;
        case StateModelVariant::Markov: {
            if (params.markov_order < 1) throw ConfigError("markov order must be >= 1");
            if (params.markov_order > fm.spec.window_size)
                throw ConfigError("markov order exceeds the feature window size");
            detail::count_markov_from_rows(fm, params.markov_order, m.markov);
            return m;
        }
        case StateModelVariant::DecisionTree:
        case StateModelVariant::RandomForest: {
            ForestParams fp = params.state_forest;
            if (params.variant == StateModelVariant::DecisionTree) {
                fp.trees = 1;
                fp.bootstrap = false;
                fp.feature_fraction = 1.0;
            }
            DesignMatrix x = build_design(fm, threads);
            const size_t classes = static_cast<size_t>(m.state_count) + 1;
            m.scorers.resize(classes);
            std::vector<std::vector<double>> targets(classes);
            for (size_t c = 0; c < classes; ++c) targets[c].assign(fm.rows.size(), 0.0);
            std::vector<bool> seen(classes, false);
            for (size_t i = 0; i < fm.rows.size(); ++i) {
                auto t = static_cast<size_t>(fm.rows[i].target_next_state);
                targets[t][i] = 1.0;
                seen[t] = true;
            }
            parallel_for(classes, threads, [&](size_t c) {
                if (!seen[c]) {
                    m.scorers[c].trees.push_back(Tree{{TreeNode{}}});
                    m.scorers[c].criterion = SplitCriterion::Gini;
                    return;
                }
                m.scorers[c] = fit_forest(x, targets[c], SplitCriterion::Gini, fp,
                                          derive_seed(seed, seed_salt::kScorer, c), 1);
            });
            return m;
        }
        case StateModelVariant::Xgboost:
            throw ConfigError("xgboost state models are not available in this build");
    }
    throw ConfigError("invalid state model variant");
}

/// Fits the transition-time regressor on the rows that have a successor.
inline TimeTransitionModel fit_time_model(const FeatureMatrix& fm, const ForestParams& params,
                                          uint64_t seed, unsigned threads = 1) {
    std::vector<size_t> rows;
    for (size_t i = 0; i < fm.rows.size(); ++i)
        if (fm.rows[i].has_tran_target) rows.push_back(i);
    if (rows.empty()) throw Error("fit_time_model: no rows with a transition-time target");

    const auto E = static_cast<size_t>(fm.spec.state_count);
    DesignMatrix x(rows.size(), fm.spec.feature_count() + E);
    std::vector<double> y(rows.size(), 0.0);
    parallel_for(rows.size(), threads, [&](size_t i) {
        const FeatureRow& row = fm.rows[rows[i]];
        auto v = feature_vector(row, fm.spec);
        auto base = static_cast<long>(i * x.n_cols);
        std::copy(v.begin(), v.end(), x.data.begin() + base);
        auto next = static_cast<size_t>(row.target_next_state);
        if (next < E) x.data[static_cast<size_t>(base) + v.size() + next] = 1.0;
        y[i] = static_cast<double>(row.target_tran_time);
    });
    TimeTransitionModel tm;
    tm.state_count = fm.spec.state_count;
    tm.forest = fit_forest(x, y, SplitCriterion::Variance, params, seed, threads);
    return tm;
}

/// Empirical 80% quantile of sequence lengths, the default generation cap.
inline int sequence_length_quantile80(const Dataset& d) {
    if (d.n_sequences() == 0) return 1;
    std::vector<size_t> lengths;
    for (size_t s = 0; s < d.n_sequences(); ++s) lengths.push_back(d.sequence(s).size());
    std::sort(lengths.begin(), lengths.end());
    auto idx = static_cast<size_t>(
        std::ceil(0.8 * static_cast<double>(lengths.size()))) - 1;
    return static_cast<int>(std::max<size_t>(1, lengths[std::min(idx, lengths.size() - 1)]));
}

inline ModelBundle fit_bundle(const Dataset& d, const FeatureSpec& spec,
                              const ModelParams& params, uint64_t seed,
                              unsigned threads = 1) {
    if (d.records.empty()) throw Error("fit_bundle: dataset is empty");
    ModelBundle b;
    b.schema = d.schema;
    b.alphabet = d.alphabet;
    b.feature_spec = spec;
    b.params = params;
    b.seed = seed;
    FeatureMatrix fm = extract_features(d, spec);
    b.attribute_distributions = fit_attribute_distributions(d, spec);
    b.start = fit_start_distributions(d);
    b.state_model = fit_state_model(fm, params, seed, threads);
    b.time_model = fit_time_model(fm, params.time_forest, derive_seed(seed, seed_salt::kTree, 1), threads);
    b.object_count = static_cast<int64_t>(d.n_sequences());
    b.default_max_steps = sequence_length_quantile80(d);
    return b;
}

// ---------------------------------------------------------------------------
// Bundle serialization: a single versioned JSON document with exact
// round-tripping of doubles (keys are emitted in sorted order, so identical
// bundles serialize to identical bytes).

namespace detail {

using nlohmann::json;

inline json tree_to_json(const Tree& t) {
    json j;
    auto& feature = j["feature"] = json::array();
    auto& threshold = j["threshold"] = json::array();
    auto& left = j["left"] = json::array();
    auto& right = j["right"] = json::array();
    auto& value = j["value"] = json::array();
    for (const auto& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
    }
    return j;
}

inline Tree tree_from_json(const json& j) {
    Tree t;
    size_t n = j.at("feature").size();
    t.nodes.resize(n);
    for (size_t i = 0; i < n; ++i) {
        t.nodes[i].feature = j.at("feature")[i].get<int32_t>();
        t.nodes[i].threshold = j.at("threshold")[i].get<double>();
        t.nodes[i].left = j.at("left")[i].get<int32_t>();
        t.nodes[i].right = j.at("right")[i].get<int32_t>();
        t.nodes[i].value = j.at("value")[i].get<double>();
    }
    return t;
}

inline json forest_to_json(const Forest& f) {
    json j;
    j["criterion"] = f.criterion == SplitCriterion::Gini ? "gini" : "variance";
    j["trees"] = json::array();
    for (const auto& t : f.trees) j["trees"].push_back(tree_to_json(t));
    return j;
}

inline Forest forest_from_json(const json& j) {
    Forest f;
    f.criterion = j.at("criterion") == "gini" ? SplitCriterion::Gini : SplitCriterion::Variance;
    for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
    return f;
}

inline json markov_to_json(const MarkovModel& m) {
    json j;
    j["order"] = m.order;
    j["state_count"] = m.state_count;
    j["global_counts"] = m.global_counts;
    j["start_state_frequencies"] = m.start_state_frequencies;
    j["contexts"] = json::array();
    for (const auto& [ctx, counts] : m.context_counts)
        j["contexts"].push_back(json::array({ctx, counts}));
    return j;
}

inline MarkovModel markov_from_json(const json& j) {
    MarkovModel m;
    m.order = j.at("order").get<int>();
    m.state_count = j.at("state_count").get<int>();
    m.global_counts = j.at("global_counts").get<std::vector<double>>();
    m.start_state_frequencies = j.at("start_state_frequencies").get<std::vector<double>>();
    for (const auto& pair : j.at("contexts"))
        m.context_counts.emplace(pair[0].get<std::vector<int>>(),
                                 pair[1].get<std::vector<double>>());
    return m;
}

inline json schema_to_json(const SchemaConfig& s) {
    json j;
    j["object_column"] = s.object_column;
    j["time_column"] = s.time_column;
    j["state_column"] = s.state_column;
    j["time_format"] = s.time_format;
    j["attributes"] = json::array();
    for (const auto& a : s.attributes)
        j["attributes"].push_back({{"column", a.column}, {"kind", to_string(a.kind)}});
    return j;
}

inline SchemaConfig schema_from_json(const json& j) {
    SchemaConfig s;
    s.object_column = j.at("object_column").get<std::string>();
    s.time_column = j.at("time_column").get<std::string>();
    s.state_column = j.at("state_column").get<std::string>();
    s.time_format = j.at("time_format").get<std::string>();
    for (const auto& a : j.at("attributes"))
        s.attributes.push_back({a.at("column").get<std::string>(),
                                attr_kind_from_string(a.at("kind").get<std::string>())});
    return s;
}

inline json encoding_to_json(const AttributeEncoding& e) {
    json j;
    j["name"] = e.name;
    j["kind"] = to_string(e.kind);
    if (e.kind == AttrKind::Numeric)
        j["bin_edges"] = e.bin_edges;
    else
        j["categories"] = e.categories;
    return j;
}

inline AttributeEncoding encoding_from_json(const json& j) {
    AttributeEncoding e;
    e.name = j.at("name").get<std::string>();
    e.kind = attr_kind_from_string(j.at("kind").get<std::string>());
    if (e.kind == AttrKind::Numeric)
        e.bin_edges = j.at("bin_edges").get<std::vector<double>>();
    else
        e.categories = j.at("categories").get<std::vector<std::string>>();
    return e;
}

inline json forest_params_to_json(const ForestParams& p) {
    return json{{"trees", p.trees},
                {"max_depth", p.max_depth},
                {"min_samples_leaf", p.min_samples_leaf},
                {"feature_fraction", p.feature_fraction},
                {"bootstrap", p.bootstrap},
                {"bagging_fraction", p.bagging_fraction}};
}

inline ForestParams forest_params_from_json(const json& j) {
    ForestParams p;
    p.trees = j.at("trees").get<int>();
    p.max_depth = j.at("max_depth").get<int>();
    p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    p.feature_fraction = j.at("feature_fraction").get<double>();
    p.bootstrap = j.at("bootstrap").get<bool>();
    p.bagging_fraction = j.at("bagging_fraction").get<double>();
    return p;
}

}  // namespace detail

inline nlohmann::json bundle_to_json(const ModelBundle& b) {
    using nlohmann::json;
    json j;
    j["format"] = "privgen-model";
    j["version"] = 1;
    j["schema"] = detail::schema_to_json(b.schema);
    j["alphabet"] = {{"states", b.alphabet.states}, {"end_sentinel", b.alphabet.end_sentinel}};
    json spec;
    spec["window_size"] = b.feature_spec.window_size;
    spec["state_count"] = b.feature_spec.state_count;
    spec["bins"] = b.feature_spec.bins;
    spec["attribute_encodings"] = json::array();
    for (const auto& e : b.feature_spec.attribute_encodings)
        spec["attribute_encodings"].push_back(detail::encoding_to_json(e));
    j["feature_spec"] = spec;
    j["attribute_distributions"] = json::array();
    for (const auto& d : b.attribute_distributions)
        j["attribute_distributions"].push_back(
            {{"encoding", detail::encoding_to_json(d.encoding)},
             {"frequencies", d.frequencies}});
    json start;
    start["start_state_frequencies"] = b.start.start_state_frequencies;
    start["anchor_time"] = b.start.anchor_time;
    start["time_bins"] = json::array();
    for (const auto& bin : b.start.start_time_bins)
        start["time_bins"].push_back(json::array({bin.weekday, bin.hour, bin.prob}));
    j["start"] = start;
    json sm;
    sm["variant"] = to_string(b.state_model.variant);
    sm["state_count"] = b.state_model.state_count;
    if (b.state_model.variant == StateModelVariant::Markov)
        sm["markov"] = detail::markov_to_json(b.state_model.markov);
    if (b.state_model.needs_features()) {
        sm["scorers"] = json::array();
        for (const auto& f : b.state_model.scorers)
            sm["scorers"].push_back(detail::forest_to_json(f));
    }
    j["state_model"] = sm;
    j["time_model"] = {{"state_count", b.time_model.state_count},
                       {"forest", detail::forest_to_json(b.time_model.forest)}};
    j["object_count"] = b.object_count;
    j["default_max_steps"] = b.default_max_steps;
    j["seed"] = b.seed;
    j["params"] = {{"variant", to_string(b.params.variant)},
                   {"markov_order", b.params.markov_order},
                   {"state_forest", detail::forest_params_to_json(b.params.state_forest)},
                   {"time_forest", detail::forest_params_to_json(b.params.time_forest)}};
    return j;
}

inline ModelBundle bundle_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j.at("format") != "privgen-model")
        throw Error("not a privgen model file");
    if (j.at("version").get<int>() != 1)
        throw Error("unsupported model file version");
    ModelBundle b;
    b.schema = detail::schema_from_json(j.at("schema"));
    b.alphabet.states = j.at("alphabet").at("states").get<std::vector<std::string>>();
    b.alphabet.end_sentinel = j.at("alphabet").at("end_sentinel").get<std::string>();
    const auto& spec = j.at("feature_spec");
    b.feature_spec.window_size = spec.at("window_size").get<int>();
    b.feature_spec.state_count = spec.at("state_count").get<int>();
    b.feature_spec.bins = spec.at("bins").get<int>();
    for (const auto& e : spec.at("attribute_encodings"))
        b.feature_spec.attribute_encodings.push_back(detail::encoding_from_json(e));
    for (const auto& d : j.at("attribute_distributions")) {
        AttributeDistribution dist;
        dist.encoding = detail::encoding_from_json(d.at("encoding"));
        dist.frequencies = d.at("frequencies").get<std::vector<double>>();
        b.attribute_distributions.push_back(std::move(dist));
    }
    const auto& start = j.at("start");
    b.start.start_state_frequencies =
        start.at("start_state_frequencies").get<std::vector<double>>();
    b.start.anchor_time = start.at("anchor_time").get<int64_t>();
    for (const auto& bin : start.at("time_bins"))
        b.start.start_time_bins.push_back(
            {bin[0].get<int>(), bin[1].get<int>(), bin[2].get<double>()});
    const auto& sm = j.at("state_model");
    b.state_model.variant = variant_from_string(sm.at("variant").get<std::string>());
    b.state_model.state_count = sm.at("state_count").get<int>();
    if (sm.contains("markov")) b.state_model.markov = detail::markov_from_json(sm.at("markov"));
    if (sm.contains("scorers"))
        for (const auto& f : sm.at("scorers"))
            b.state_model.scorers.push_back(detail::forest_from_json(f));
    b.time_model.state_count = j.at("time_model").at("state_count").get<int>();
    b.time_model.forest = detail::forest_from_json(j.at("time_model").at("forest"));
    b.object_count = j.at("object_count").get<int64_t>();
    b.default_max_steps = j.at("default_max_steps").get<int>();
    b.seed = j.at("seed").get<uint64_t>();
    const auto& params = j.at("params");
    b.params.variant = variant_from_string(params.at("variant").get<std::string>());
    b.params.markov_order = params.at("markov_order").get<int>();
    b.params.state_forest = detail::forest_params_from_json(params.at("state_forest"));
    b.params.time_forest = detail::forest_params_from_json(params.at("time_forest"));
    return b;
}

inline void save_bundle(const ModelBundle& b, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    os << bundle_to_json(b).dump() << '\n';
    if (!os.flush()) throw Error("failed writing '" + path + "'");
}

inline ModelBundle load_bundle(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("cannot parse model file '" + path + "': " + e.what());
    }
    return bundle_from_json(j);
}

}  // namespace privgen
