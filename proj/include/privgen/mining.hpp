#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "privgen/dataset.hpp"

namespace privgen {

/// A contiguous run of states with its occurrence count. Occurrences are
/// counted at every sliding position, so overlapping matches all count.
struct Subsequence {
    std::vector<std::string> states;
    long long support = 0;

    bool operator==(const Subsequence&) const = default;
};

/// The k most frequent subsequences of length 1..max_len. Ranking is by
/// support descending, then length ascending, then lexicographic state order,
/// which makes the result deterministic under ties.
inline std::vector<Subsequence> mine_topk(const Dataset& d, size_t k, size_t max_len) {
    if (k < 1) throw ConfigError("mine_topk: k must be >= 1");
    if (max_len < 1) throw ConfigError("mine_topk: max_len must be >= 1");
    std::map<std::vector<int>, long long> counts;
    std::vector<int> key;
    for (size_t s = 0; s < d.n_sequences(); ++s) {
        auto seq = d.sequence(s);
        for (size_t i = 0; i < seq.size(); ++i) {
            key.clear();
            for (size_t len = 1; len <= max_len && i + len <= seq.size(); ++len) {
                key.push_back(seq[i + len - 1].state);
                ++counts[key];
            }
        }
    }
    std::vector<std::pair<std::vector<int>, long long>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;  // alphabet ids are in sorted symbol order
    });
    if (ranked.size() > k) ranked.resize(k);
    std::vector<Subsequence> out;
    out.reserve(ranked.size());
    for (const auto& [ids, support] : ranked) {
        Subsequence sub;
        sub.support = support;
        for (int id : ids) sub.states.push_back(d.alphabet.symbol(id));
        out.push_back(std::move(sub));
    }
    return out;
}

/// Fraction of the source's top-k subsequences that also rank in the
/// synthetic data's top-k; always divided by k.
inline double topk_precision(const Dataset& source, const Dataset& synthetic, size_t k,
                             size_t max_len) {
    auto top_source = mine_topk(source, k, max_len);
    auto top_synth = mine_topk(synthetic, k, max_len);
    std::set<std::vector<std::string>> synth_set;
    for (const auto& s : top_synth) synth_set.insert(s.states);
    size_t hits = 0;
    for (const auto& s : top_source)
        if (synth_set.count(s.states)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace privgen
