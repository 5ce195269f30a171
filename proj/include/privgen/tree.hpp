#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "privgen/error.hpp"

namespace privgen {

/// Dense row-major matrix of model inputs.
struct DesignMatrix {
    size_t n_rows = 0;
    size_t n_cols = 0;
    std::vector<double> data;

    DesignMatrix() = default;
    DesignMatrix(size_t rows, size_t cols) : n_rows(rows), n_cols(cols), data(rows * cols, 0.0) {}

    std::span<const double> row(size_t i) const { return {data.data() + i * n_cols, n_cols}; }
    double at(size_t i, size_t j) const { return data[i * n_cols + j]; }
    void set(size_t i, size_t j, double v) { data[i * n_cols + j] = v; }
};

enum class SplitCriterion { Gini, Variance };

struct TreeParams {
    int max_depth = 0;         // 0 = unlimited
    int min_samples_leaf = 5;
    SplitCriterion criterion = SplitCriterion::Variance;
};

/// CART node; feature < 0 marks a leaf holding the mean target of its rows.
/// Internal nodes route x[feature] <= threshold to the left child.
struct TreeNode {
    int32_t feature = -1;
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    double value = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x) const {
        int32_t i = 0;
        while (nodes[static_cast<size_t>(i)].feature >= 0) {
            const TreeNode& n = nodes[static_cast<size_t>(i)];
            i = x[static_cast<size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<size_t>(i)].value;
    }
};

namespace detail {

// Node impurity scaled by row count: Gini uses 2*p*(1-p)*n for binary {0,1}
// targets, Variance uses the sum of squared deviations. Both reduce to
// expressions in (n, sum, sumsq), so one scan serves either criterion.
inline double impurity_cost(SplitCriterion c, double n, double sum, double sumsq) {
    if (n <= 0) return 0.0;
    if (c == SplitCriterion::Gini) {
        double p = sum / n;
        return 2.0 * p * (1.0 - p) * n;
    }
    return sumsq - sum * sum / n;
}

struct SplitResult {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const DesignMatrix& x, std::span<const double> y,
                std::span<const int> features, const TreeParams& params)
        : x_(x), y_(y), features_(features), params_(params) {}

    Tree build(std::vector<size_t> rows) {
        Tree t;
        build_node(t, std::move(rows), 0);
        return t;
    }

private:
    int32_t build_node(Tree& t, std::vector<size_t> rows, int depth) {
        double n = static_cast<double>(rows.size());
        double sum = 0.0, sumsq = 0.0;
        for (size_t r : rows) {
            sum += y_[r];
            sumsq += y_[r] * y_[r];
        }
        auto make_leaf = [&] {
            TreeNode leaf;
            leaf.value = rows.empty() ? 0.0 : sum / n;
            t.nodes.push_back(leaf);
            return static_cast<int32_t>(t.nodes.size() - 1);
        };
        if (rows.size() < 2 * static_cast<size_t>(params_.min_samples_leaf)) return make_leaf();
        if (params_.max_depth > 0 && depth >= params_.max_depth) return make_leaf();
        double parent_cost = impurity_cost(params_.criterion, n, sum, sumsq);
        if (parent_cost <= 1e-12) return make_leaf();

        SplitResult best = find_best_split(rows, parent_cost);
        if (best.feature < 0) return make_leaf();

        std::vector<size_t> left, right;
        left.reserve(rows.size());
        right.reserve(rows.size());
        for (size_t r : rows) {
            if (x_.at(r, static_cast<size_t>(best.feature)) <= best.threshold)
                left.push_back(r);
            else
                right.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        auto idx = static_cast<int32_t>(t.nodes.size());
        TreeNode node;
        node.feature = best.feature;
        node.threshold = best.threshold;
        t.nodes.push_back(node);
        int32_t l = build_node(t, std::move(left), depth + 1);
        int32_t r = build_node(t, std::move(right), depth + 1);
        t.nodes[static_cast<size_t>(idx)].left = l;
        t.nodes[static_cast<size_t>(idx)].right = r;
        return idx;
    }

    // Exhaustive scan over the node's candidate features. Ties in gain keep
    // the lowest feature index, then the lowest threshold (features_ is
    // ascending and thresholds are scanned ascending, so a strict > suffices).
    SplitResult find_best_split(const std::vector<size_t>& rows, double parent_cost) {
        SplitResult best;
        const auto min_leaf = static_cast<size_t>(params_.min_samples_leaf);
        std::vector<std::pair<double, double>> vals;  // (x, y)
        vals.reserve(rows.size());
        for (int f : features_) {
            vals.clear();
            for (size_t r : rows)
                vals.emplace_back(x_.at(r, static_cast<size_t>(f)), y_[r]);
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (vals.front().first == vals.back().first) continue;

            double n = static_cast<double>(vals.size());
            double total_sum = 0.0, total_sq = 0.0;
            for (const auto& [xv, yv] : vals) {
                total_sum += yv;
                total_sq += yv * yv;
            }
            double left_n = 0.0, left_sum = 0.0, left_sq = 0.0;
            for (size_t i = 0; i + 1 < vals.size(); ++i) {
                left_n += 1.0;
                left_sum += vals[i].second;
                left_sq += vals[i].second * vals[i].second;
                if (vals[i].first == vals[i + 1].first) continue;
                size_t nl = i + 1, nr = vals.size() - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                double cost = impurity_cost(params_.criterion, left_n, left_sum, left_sq) +
                              impurity_cost(params_.criterion, n - left_n, total_sum - left_sum,
                                            total_sq - left_sq);
                double gain = parent_cost - cost;
                if (gain > best.gain + 1e-12) {
                    best.gain = gain;
                    best.feature = f;
                    best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
                }
            }
        }
        return best;
    }

    const DesignMatrix& x_;
    std::span<const double> y_;
    std::span<const int> features_;
    const TreeParams& params_;
};

}  // namespace detail

/// Fits a single CART tree on the given rows, considering only `features`.
inline Tree fit_tree(const DesignMatrix& x, std::span<const double> y,
                     std::vector<size_t> rows, std::span<const int> features,
                     const TreeParams& params) {
    if (rows.empty()) throw Error("fit_tree: no rows");
    if (params.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
    detail::TreeBuilder builder(x, y, features, params);
    return builder.build(std::move(rows));
}

}  // namespace privgen
