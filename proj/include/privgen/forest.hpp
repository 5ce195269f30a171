#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "privgen/parallel.hpp"
#include "privgen/rng.hpp"
#include "privgen/tree.hpp"

namespace privgen {

struct ForestParams {
    int trees = 100;
    int max_depth = 0;              // 0 = unlimited
    int min_samples_leaf = 5;
    double feature_fraction = 0.0;  // fraction of features per tree; 0 = auto
    bool bootstrap = true;          // sample rows with replacement
    double bagging_fraction = 1.0;  // bootstrap sample size as a fraction of n
};

/// Bagged CART ensemble; the prediction is the plain tree average.
struct Forest {
    std::vector<Tree> trees;
    SplitCriterion criterion = SplitCriterion::Variance;

    double predict(std::span<const double> x) const {
        if (trees.empty()) return 0.0;
        double acc = 0.0;
        for (const auto& t : trees) acc += t.predict(x);
        return acc / static_cast<double>(trees.size());
    }
};

namespace detail {

inline size_t features_per_tree(SplitCriterion criterion, double fraction, size_t v) {
    if (v == 0) return 0;
    double f = fraction;
    if (f <= 0.0)
        f = criterion == SplitCriterion::Gini ? std::sqrt(static_cast<double>(v)) / static_cast<double>(v)
                                              : 1.0 / 3.0;
    auto count = static_cast<size_t>(std::ceil(f * static_cast<double>(v)));
    return std::clamp<size_t>(count, 1, v);
}

}  // namespace detail

/// Fits `params.trees` trees in parallel. Tree i draws its rows and feature
/// subset from a seed derived as a fixed function of (seed, i), so the result
/// does not depend on the number of worker threads.
inline Forest fit_forest(const DesignMatrix& x, std::span<const double> y,
                         SplitCriterion criterion, const ForestParams& params,
                         uint64_t seed, unsigned threads) {
    if (x.n_rows == 0) throw Error("fit_forest: no rows");
    if (params.trees < 1) throw ConfigError("forest needs at least one tree");
    Forest forest;
    forest.criterion = criterion;
    forest.trees.resize(static_cast<size_t>(params.trees));

    const size_t mtry = detail::features_per_tree(criterion, params.feature_fraction, x.n_cols);
    const auto sample_n = std::max<size_t>(
        1, static_cast<size_t>(std::llround(params.bagging_fraction * static_cast<double>(x.n_rows))));

    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.min_samples_leaf = params.min_samples_leaf;
    tp.criterion = criterion;

    parallel_for(forest.trees.size(), threads, [&](size_t i) {
        Rng rng(derive_seed(seed, seed_salt::kTree, i));
        std::vector<int> all(x.n_cols);
        std::iota(all.begin(), all.end(), 0);
        std::vector<int> features;
        if (mtry == x.n_cols) {
            features = all;
        } else {
            rng.shuffle(all);
            features.assign(all.begin(), all.begin() + static_cast<long>(mtry));
            std::sort(features.begin(), features.end());
        }
        std::vector<size_t> rows;
        if (params.bootstrap) {
            rows.resize(sample_n);
            for (auto& r : rows) r = static_cast<size_t>(rng.uniform_int(x.n_rows));
        } else {
            rows.resize(x.n_rows);
            std::iota(rows.begin(), rows.end(), 0);
        }
        forest.trees[i] = fit_tree(x, y, std::move(rows), features, tp);
    });
    return forest;
}

}  // namespace privgen
