#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "privgen/dataset.hpp"
#include "privgen/features.hpp"
#include "privgen/markov.hpp"

namespace privgen {

/// Quasi-identifier selection for linkage-risk analysis. The simplified QID
/// is the owner attributes plus the first state of the sequence; extended
/// mode multiplies in per-step state-transition and transition-time-bin
/// probabilities over the whole sequence (experimental).
struct QidSpec {
    std::vector<size_t> attribute_indices;
    bool include_first_state = true;
    bool extended_mode = false;
    int bins = 100;        // numeric attribute / transition-time discretization
    int markov_order = 2;  // state model order used by extended mode

    static QidSpec all_attributes(const SchemaConfig& schema) {
        QidSpec q;
        for (size_t i = 0; i < schema.attributes.size(); ++i) q.attribute_indices.push_back(i);
        return q;
    }

    void validate() const {
        if (attribute_indices.empty() && !include_first_state && !extended_mode)
            throw ConfigError("QID must select at least one component");
    }
};

struct RiskRecord {
    size_t record_index = 0;
    std::string object_id;
    double reconstruction_probability = 0;
    double uniqueness = 0;
    double risk = 0;
    double adjusted_probability = 0;
    double adjusted_risk = 0;
};

struct RiskReport {
    std::vector<RiskRecord> records;
    double max_risk = 0;
    double mean_risk = 0;
    double epsilon_s = 0;
    double threshold = 0.25;
    size_t over_threshold = 0;  // records with risk >= threshold
    bool near_bound = false;    // any risk within 1e-12 of the 0.25 maximum
    // footnote: product of the per-record risks; underflows to 0 on large
    // datasets and carries no acceptance semantics
    double risk_product = 0;
};

/// Applies the state-model generalization error: p' = (1 - eps) * p.
inline double adjusted_reconstruction_probability(double p, double epsilon_s) {
    if (epsilon_s < 0.0 || epsilon_s > 1.0)
        throw std::domain_error("epsilon_s must lie in [0, 1]");
    return (1.0 - epsilon_s) * p;
}

/// risk = p * (1 - p); maximal at p = 0.5 and never above 0.25.
inline double reidentification_risk(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("reconstruction probability must lie in [0, 1]");
    return p * (1.0 - p);
}

/// Risk computed after rounding both factors to two decimals, matching
/// hand calculations like 0.44 * 0.56 = 0.2464.
inline double reidentification_risk_2dp(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("reconstruction probability must lie in [0, 1]");
    double pr = std::round(p * 100.0) / 100.0;
    double ur = std::round((1.0 - p) * 100.0) / 100.0;
    return pr * ur;
}

/// Precomputed owner tables for one dataset + QID; answers reconstruction
/// probabilities for arbitrary probes and for the dataset's own owners.
class RiskModel {
public:
    RiskModel(const Dataset& d, const QidSpec& qid) : dataset_(d), qid_(qid) {
        qid.validate();
        for (size_t a : qid.attribute_indices)
            if (a >= d.schema.attributes.size())
                throw ConfigError("QID attribute index out of range");
        encodings_ = make_feature_spec(d, 1, qid.bins).attribute_encodings;
        owner_codes_.resize(d.n_sequences());
        owner_first_state_.resize(d.n_sequences());
        for (size_t s = 0; s < d.n_sequences(); ++s) {
            const auto& attrs = d.attributes_of(s);
            owner_codes_[s].resize(attrs.size());
            for (size_t a = 0; a < attrs.size(); ++a)
                owner_codes_[s][a] = encodings_[a].index_of(attrs[a]);
            owner_first_state_[s] = d.sequence(s)[0].state;
        }
        if (qid.extended_mode && !d.records.empty()) {
            markov_ = fit_markov(d, qid.markov_order);
            std::vector<double> deltas;
            for (size_t s = 0; s < d.n_sequences(); ++s) {
                auto seq = d.sequence(s);
                for (size_t i = 0; i + 1 < seq.size(); ++i)
                    deltas.push_back(static_cast<double>(seq[i + 1].timestamp - seq[i].timestamp));
            }
            if (!deltas.empty()) {
                delta_edges_ = fit_discretization(deltas, qid.bins);
                delta_freqs_.assign(delta_edges_.size() - 1, 0.0);
                AttributeEncoding bin{"", AttrKind::Numeric, delta_edges_, {}};
                for (double v : deltas)
                    delta_freqs_[static_cast<size_t>(bin.index_of(v))] += 1.0;
                for (auto& f : delta_freqs_) f /= static_cast<double>(deltas.size());
            }
        }
    }

    /// Simplified-QID reconstruction probability for an arbitrary probe:
    /// the product of owner-level frequencies of the selected attributes and
    /// the first-state frequency conditioned on those attributes. Any factor
    /// of zero (unseen value, empty condition group) makes the whole product 0.
    double probability(const std::vector<AttrValue>& attrs,
                       const std::string& first_state) const {
        const double owners = static_cast<double>(owner_codes_.size());
        if (owners == 0) return 0.0;
        std::vector<int> probe(encodings_.size(), -1);
        for (size_t a : qid_.attribute_indices) {
            if (a >= attrs.size()) return 0.0;
            probe[a] = encodings_[a].index_of(attrs[a]);
        }
        double p = 1.0;
        for (size_t a : qid_.attribute_indices) {
            if (probe[a] < 0) return 0.0;
            double count = 0.0;
            for (const auto& codes : owner_codes_)
                if (codes[a] == probe[a]) count += 1.0;
            if (count == 0.0) return 0.0;
            p *= count / owners;
        }
        if (qid_.include_first_state) {
            int state = dataset_.alphabet.id_of(first_state);
            double matching = 0.0, with_state = 0.0;
            for (size_t s = 0; s < owner_codes_.size(); ++s) {
                bool match = true;
                for (size_t a : qid_.attribute_indices)
                    if (owner_codes_[s][a] != probe[a]) {
                        match = false;
                        break;
                    }
                if (!match) continue;
                matching += 1.0;
                if (state >= 0 && owner_first_state_[s] == state) with_state += 1.0;
            }
            if (matching == 0.0 || with_state == 0.0) return 0.0;
            p *= with_state / matching;
        }
        return p;
    }

    /// Probability for one of the dataset's own sequences; in extended mode
    /// the per-step transition and time-bin factors are multiplied in.
    double probability_for_owner(size_t seq_index) const {
        auto seq = dataset_.sequence(seq_index);
        double p = probability(dataset_.attributes_of(seq_index),
                               dataset_.alphabet.symbol(seq[0].state));
        if (!qid_.extended_mode) return p;
        std::vector<int> hist;
        for (size_t i = 0; i + 1 < seq.size() && p > 0.0; ++i) {
            hist.push_back(seq[i].state);
            auto dist = markov_.predict(hist);
            p *= dist[static_cast<size_t>(seq[i + 1].state)];
            if (!delta_freqs_.empty()) {
                AttributeEncoding bin{"", AttrKind::Numeric, delta_edges_, {}};
                int idx = bin.index_of(static_cast<double>(seq[i + 1].timestamp - seq[i].timestamp));
                p *= idx >= 0 ? delta_freqs_[static_cast<size_t>(idx)] : 0.0;
            }
        }
        return p;
    }

private:
    const Dataset& dataset_;
    QidSpec qid_;
    std::vector<AttributeEncoding> encodings_;
    std::vector<std::vector<int>> owner_codes_;
    std::vector<int> owner_first_state_;
    MarkovModel markov_;
    std::vector<double> delta_edges_;
    std::vector<double> delta_freqs_;
};

/// Probability that a probe record's QID would be reproduced when generating
/// from `d`. The probe's state is taken as its sequence-initial state.
inline double reconstruction_probability(const std::vector<AttrValue>& attrs,
                                         const std::string& first_state, const Dataset& d,
                                         const QidSpec& qid) {
    if (qid.extended_mode)
        throw ConfigError("extended QID mode needs a full sequence; use risk_report");
    return RiskModel(d, qid).probability(attrs, first_state);
}

inline double reconstruction_probability(const Record& probe, const Dataset& d,
                                         const QidSpec& qid) {
    return reconstruction_probability(probe.attributes, d.alphabet.symbol(probe.state), d, qid);
}

/// Per-record risk report over a dataset. All records of an owner share the
/// owner's QID and therefore its probability and risk.
inline RiskReport risk_report(const Dataset& d, const QidSpec& qid, double epsilon_s = 0.0,
                              double threshold = 0.25) {
    if (d.records.empty()) throw Error("risk_report: dataset is empty");
    RiskModel model(d, qid);
    RiskReport report;
    report.epsilon_s = epsilon_s;
    report.threshold = threshold;
    report.risk_product = 1.0;
    double risk_sum = 0.0;
    for (size_t s = 0; s < d.n_sequences(); ++s) {
        double p = model.probability_for_owner(s);
        double risk = reidentification_risk(p);
        double adj_p = adjusted_reconstruction_probability(p, epsilon_s);
        double adj_risk = reidentification_risk(adj_p);
        auto seq = d.sequence(s);
        for (size_t i = 0; i < seq.size(); ++i) {
            RiskRecord r;
            r.record_index = d.seq_offsets[s] + i;
            r.object_id = seq[i].object_id;
            r.reconstruction_probability = p;
            r.uniqueness = 1.0 - p;
            r.risk = risk;
            r.adjusted_probability = adj_p;
            r.adjusted_risk = adj_risk;
            report.records.push_back(std::move(r));
            risk_sum += risk;
            report.risk_product *= risk;
            if (risk >= threshold) ++report.over_threshold;
            if (std::abs(risk - 0.25) <= 1e-12) report.near_bound = true;
        }
        report.max_risk = std::max(report.max_risk, risk);
    }
    report.mean_risk = risk_sum / static_cast<double>(report.records.size());
    return report;
}

}  // namespace privgen
