#include "triage/model.hpp"

#include "triage/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <thread>

namespace triage {

namespace {

struct ColumnEntry {
    double value;
    std::uint32_t sample;
};

// Column-major copy of the nonzero feature weights, each column sorted by
// (value, sample). Zeros stay implicit.
struct ColumnStore {
    std::size_t rows = 0;
    std::vector<std::vector<ColumnEntry>> columns;

    ColumnStore(std::span<const FeatureVector> features, std::size_t dimension)
        : rows(features.size()), columns(dimension) {
        for (std::size_t i = 0; i < features.size(); ++i) {
            for (const auto& e : features[i].entries) {
                if (e.index >= dimension) {
                    throw Error(ErrorKind::data, "feature index exceeds the vocabulary dimension");
                }
                if (e.weight != 0.0) {
                    columns[e.index].push_back({e.weight, static_cast<std::uint32_t>(i)});
                }
            }
        }
        for (auto& column : columns) {
            std::sort(column.begin(), column.end(), [](const ColumnEntry& a, const ColumnEntry& b) {
                return a.value != b.value ? a.value < b.value : a.sample < b.sample;
            });
        }
    }
};

struct GrownTree {
    RegressionTree tree;
    std::vector<int> leaf_of;  // node index of the leaf holding each sample
};

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

constexpr double kGainEpsilon = 1e-12;

GrownTree grow_tree(const ColumnStore& store, std::span<const double> targets, int max_depth, int min_samples_leaf) {
    const std::size_t n = store.rows;
    const auto min_leaf = static_cast<std::size_t>(std::max(1, min_samples_leaf));
    GrownTree grown;
    grown.tree.nodes.emplace_back();
    grown.leaf_of.assign(n, 0);
    auto& node_of = grown.leaf_of;
    auto& nodes = grown.tree.nodes;

    std::vector<int> active{0};
    for (int depth = 0; depth < max_depth && !active.empty(); ++depth) {
        const std::size_t node_count = nodes.size();
        std::vector<std::size_t> count(node_count, 0);
        std::vector<double> sum(node_count, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            ++count[static_cast<std::size_t>(node_of[s])];
            sum[static_cast<std::size_t>(node_of[s])] += targets[s];
        }
        std::vector<char> splittable(node_count, 0);
        for (int id : active) {
            splittable[static_cast<std::size_t>(id)] = count[static_cast<std::size_t>(id)] >= 2 * min_leaf;
        }

        std::vector<SplitCandidate> best(node_count);
        std::vector<char> touched_flag(node_count, 0);
        std::vector<std::size_t> touched;
        std::vector<std::size_t> nnz_count(node_count, 0);
        std::vector<double> nnz_sum(node_count, 0.0);
        std::vector<std::size_t> left_count(node_count, 0);
        std::vector<double> left_sum(node_count, 0.0);
        std::vector<double> last_value(node_count, 0.0);
        std::vector<char> has_last(node_count, 0);

        for (std::size_t f = 0; f < store.columns.size(); ++f) {
            const auto& column = store.columns[f];
            if (column.empty()) {
                continue;
            }
            touched.clear();
            for (const auto& entry : column) {
                const auto id = static_cast<std::size_t>(node_of[entry.sample]);
                if (!splittable[id]) {
                    continue;
                }
                if (!touched_flag[id]) {
                    touched_flag[id] = 1;
                    touched.push_back(id);
                    nnz_count[id] = 0;
                    nnz_sum[id] = 0.0;
                }
                ++nnz_count[id];
                nnz_sum[id] += targets[entry.sample];
            }
            for (std::size_t id : touched) {
                left_count[id] = count[id] - nnz_count[id];
                left_sum[id] = sum[id] - nnz_sum[id];
                last_value[id] = 0.0;
                has_last[id] = left_count[id] > 0;
            }
            for (const auto& entry : column) {
                const auto id = static_cast<std::size_t>(node_of[entry.sample]);
                if (!splittable[id]) {
                    continue;
                }
                if (has_last[id] && entry.value > last_value[id]) {
                    const std::size_t nl = left_count[id];
                    const std::size_t nr = count[id] - nl;
                    if (nl >= min_leaf && nr >= min_leaf) {
                        const double sl = left_sum[id];
                        const double sr = sum[id] - sl;
                        const double gain = sl * sl / static_cast<double>(nl) + sr * sr / static_cast<double>(nr) -
                                            sum[id] * sum[id] / static_cast<double>(count[id]);
                        if (gain > best[id].gain + kGainEpsilon) {
                            best[id] = {gain, static_cast<int>(f), 0.5 * (last_value[id] + entry.value)};
                        }
                    }
                }
                ++left_count[id];
                left_sum[id] += targets[entry.sample];
                last_value[id] = entry.value;
                has_last[id] = 1;
            }
            for (std::size_t id : touched) {
                touched_flag[id] = 0;
            }
        }

        std::vector<int> next;
        std::vector<int> left_child(node_count, -1);
        for (int id : active) {
            const auto& split = best[static_cast<std::size_t>(id)];
            if (split.feature < 0) {
                continue;
            }
            const int left = static_cast<int>(nodes.size());
            nodes.emplace_back();
            nodes.emplace_back();
            auto& node = nodes[static_cast<std::size_t>(id)];
            node.feature = split.feature;
            node.threshold = split.threshold;
            node.left = left;
            node.right = left + 1;
            left_child[static_cast<std::size_t>(id)] = left;
            next.push_back(left);
            next.push_back(left + 1);
        }
        if (next.empty()) {
            break;
        }
        for (std::size_t s = 0; s < n; ++s) {
            const int left = left_child[static_cast<std::size_t>(node_of[s])];
            if (left >= 0) {
                node_of[s] = left;
            }
        }
        for (int id : active) {
            const auto& node = nodes[static_cast<std::size_t>(id)];
            if (node.is_leaf()) {
                continue;
            }
            for (const auto& entry : store.columns[static_cast<std::size_t>(node.feature)]) {
                if (node_of[entry.sample] == node.left && entry.value > node.threshold) {
                    node_of[entry.sample] = node.right;
                }
            }
        }
        active = std::move(next);
    }
    return grown;
}

double mean_cross_entropy(const std::vector<double>& scores, const std::vector<std::size_t>& labels, std::size_t k) {
    double total = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto p = softmax(std::span<const double>(scores.data() + i * k, k));
        total -= std::log(std::max(p[labels[i]], std::numeric_limits<double>::min()));
    }
    return labels.empty() ? 0.0 : total / static_cast<double>(labels.size());
}

}  // namespace

std::size_t RegressionTree::leaf_for(const FeatureVector& x) const {
    std::size_t id = 0;
    while (!nodes[id].is_leaf()) {
        const auto& node = nodes[id];
        id = static_cast<std::size_t>(x.weight(static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left
                                                                                                        : node.right);
    }
    return id;
}

double RegressionTree::predict(const FeatureVector& x) const {
    return nodes[leaf_for(x)].value;
}

std::vector<double> GbtModel::raw_scores(const FeatureVector& x) const {
    std::vector<double> scores(classes, 0.0);
    for (std::size_t t = 0; t < trees.size(); ++t) {
        scores[t % classes] += learning_rate * trees[t].predict(x);
    }
    return scores;
}

RegressionTree fit_regression_tree(std::span<const FeatureVector> features, std::span<const double> targets,
                                   std::size_t dimension, int max_depth, int min_samples_leaf) {
    if (features.size() != targets.size() || features.empty()) {
        throw Error(ErrorKind::data, "regression tree needs one target per sample and at least one sample");
    }
    const ColumnStore store(features, dimension);
    auto grown = grow_tree(store, targets, max_depth, min_samples_leaf);
    std::vector<double> sum(grown.tree.nodes.size(), 0.0);
    std::vector<std::size_t> count(grown.tree.nodes.size(), 0);
    for (std::size_t s = 0; s < targets.size(); ++s) {
        sum[static_cast<std::size_t>(grown.leaf_of[s])] += targets[s];
        ++count[static_cast<std::size_t>(grown.leaf_of[s])];
    }
    for (std::size_t id = 0; id < grown.tree.nodes.size(); ++id) {
        if (grown.tree.nodes[id].is_leaf() && count[id] > 0) {
            grown.tree.nodes[id].value = sum[id] / static_cast<double>(count[id]);
        }
    }
    return std::move(grown.tree);
}

GbtModel train_gbt(const EncodedDataset& data, std::size_t classes, std::size_t dimension, const GbtParams& params) {
    const std::size_t n = data.features.size();
    if (n == 0) {
        throw Error(ErrorKind::data, "cannot train on an empty dataset");
    }
    const std::size_t k = classes;
    const ColumnStore store(data.features, dimension);

    GbtModel model;
    model.classes = k;
    model.learning_rate = params.learning_rate;
    model.trees.reserve(static_cast<std::size_t>(params.rounds) * k);

    std::vector<double> scores(n * k, 0.0);
    model.loss_history.push_back(mean_cross_entropy(scores, data.labels, k));
    const double newton_scale = static_cast<double>(k - 1) / static_cast<double>(k);

    for (int round = 0; round < params.rounds; ++round) {
        std::vector<double> prob(n * k);
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = softmax(std::span<const double>(scores.data() + i * k, k));
            std::copy(p.begin(), p.end(), prob.begin() + static_cast<std::ptrdiff_t>(i * k));
        }

        // Per-class trees within a round are independent given `prob`.
        auto fit_class = [&](std::size_t c) {
            std::vector<double> residual(n);
            for (std::size_t i = 0; i < n; ++i) {
                residual[i] = (data.labels[i] == c ? 1.0 : 0.0) - prob[i * k + c];
            }
            auto grown = grow_tree(store, residual, params.max_depth, params.min_samples_leaf);
            const std::size_t node_count = grown.tree.nodes.size();
            std::vector<double> numerator(node_count, 0.0);
            std::vector<double> denominator(node_count, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto leaf = static_cast<std::size_t>(grown.leaf_of[i]);
                const double r = residual[i];
                numerator[leaf] += r;
                denominator[leaf] += std::abs(r) * (1.0 - std::abs(r));
            }
            for (std::size_t id = 0; id < node_count; ++id) {
                auto& node = grown.tree.nodes[id];
                if (node.is_leaf()) {
                    node.value = std::abs(denominator[id]) < 1e-150 ? 0.0
                                                                    : newton_scale * numerator[id] / denominator[id];
                }
            }
            return grown;
        };

        std::vector<GrownTree> grown(k);
        if (k > 1 && n * dimension > 200000) {
            std::vector<std::future<GrownTree>> jobs;
            for (std::size_t c = 0; c < k; ++c) {
                jobs.push_back(std::async(std::launch::async, fit_class, c));
            }
            for (std::size_t c = 0; c < k; ++c) {
                grown[c] = jobs[c].get();
            }
        } else {
            for (std::size_t c = 0; c < k; ++c) {
                grown[c] = fit_class(c);
            }
        }

        for (std::size_t c = 0; c < k; ++c) {
            const auto& tree = grown[c].tree;
            for (std::size_t i = 0; i < n; ++i) {
                scores[i * k + c] +=
                    params.learning_rate * tree.nodes[static_cast<std::size_t>(grown[c].leaf_of[i])].value;
            }
            model.trees.push_back(std::move(grown[c].tree));
        }
        model.loss_history.push_back(mean_cross_entropy(scores, data.labels, k));
    }
    return model;
}

}  // namespace triage
