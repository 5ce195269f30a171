#pragma once

#include <map>
#include <span>
#include <vector>

#include "privgen/dataset.hpp"

namespace privgen {

/// Order-k Markov chain over state ids with an END class at index
/// state_count. Transition counts are kept for every context length 1..k so
/// prediction can back off from the full context to shorter suffixes and
/// finally to the global next-state distribution.
struct MarkovModel {
    int order = 2;
    int state_count = 0;
    std::map<std::vector<int>, std::vector<double>> context_counts;
    std::vector<double> global_counts;          // over state_count+1
    std::vector<double> start_state_frequencies;  // over state_count

    /// Next-state distribution (states then END) given the most recent states;
    /// `history` is ordered oldest to newest and must end with the current state.
    std::vector<double> predict(std::span<const int> history) const {
        auto len = std::min<size_t>(static_cast<size_t>(order), history.size());
        for (; len >= 1; --len) {
            std::vector<int> ctx(history.end() - static_cast<long>(len), history.end());
            auto it = context_counts.find(ctx);
            if (it != context_counts.end()) return normalized(it->second);
        }
        return normalized(global_counts);
    }

private:
    std::vector<double> normalized(const std::vector<double>& counts) const {
        double total = 0.0;
        for (double c : counts) total += c;
        std::vector<double> p(static_cast<size_t>(state_count) + 1, 0.0);
        if (total <= 0.0) {
            double u = 1.0 / static_cast<double>(p.size());
            for (auto& v : p) v = u;
            return p;
        }
        for (size_t i = 0; i < counts.size(); ++i) p[i] = counts[i] / total;
        return p;
    }
};

/// Counts transitions (including into END) at every context length up to
/// `order`; sequence starts contribute whatever context prefix is available.
inline MarkovModel fit_markov(const Dataset& d, int order) {
    if (order < 1) throw ConfigError("markov order must be >= 1");
    if (d.records.empty()) throw Error("fit_markov: nothing to fit, dataset is empty");
    MarkovModel m;
    m.order = order;
    m.state_count = static_cast<int>(d.alphabet.size());
    m.global_counts.assign(d.alphabet.size() + 1, 0.0);
    m.start_state_frequencies.assign(d.alphabet.size(), 0.0);

    for (size_t s = 0; s < d.n_sequences(); ++s) {
        auto seq = d.sequence(s);
        m.start_state_frequencies[static_cast<size_t>(seq[0].state)] += 1.0;
        for (size_t i = 0; i < seq.size(); ++i) {
            int next = i + 1 < seq.size() ? seq[i + 1].state
                                          : static_cast<int>(d.alphabet.size());
            m.global_counts[static_cast<size_t>(next)] += 1.0;
            auto max_len = std::min<size_t>(static_cast<size_t>(order), i + 1);
            for (size_t len = 1; len <= max_len; ++len) {
                std::vector<int> ctx;
                ctx.reserve(len);
                for (size_t j = i + 1 - len; j <= i; ++j) ctx.push_back(seq[j].state);
                auto [it, inserted] = m.context_counts.try_emplace(
                    std::move(ctx), std::vector<double>(d.alphabet.size() + 1, 0.0));
                it->second[static_cast<size_t>(next)] += 1.0;
            }
        }
    }
    double n_seq = static_cast<double>(d.n_sequences());
    for (auto& f : m.start_state_frequencies) f /= n_seq;
    return m;
}

}  // namespace privgen
