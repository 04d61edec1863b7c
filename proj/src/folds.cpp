#include "zeroml/folds.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "zeroml/errors.hpp"
#include "zeroml/rng.hpp"

namespace zeroml {

std::vector<std::size_t> FoldPlan::training_rows(std::size_t k) const {
    std::vector<std::size_t> rows;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        if (f != k) rows.insert(rows.end(), folds[f].begin(), folds[f].end());
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

FoldPlan kfold(std::size_t n, std::size_t k, std::optional<std::span<const int>> labels, std::int64_t seed) {
    if (k < 2 || k > n) {
        throw FoldError("need 2 <= folds <= rows, got folds=" + std::to_string(k) + " rows=" + std::to_string(n));
    }
    if (labels && labels->size() != n) throw FoldError("label vector length does not match row count");

    Rng rng = make_rng(seed);
    FoldPlan plan;
    std::vector<std::size_t> order;
    order.reserve(n);
    if (labels) {
        std::map<int, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < n; ++i) by_class[(*labels)[i]].push_back(i);
        for (auto& [label, members] : by_class) {
            shuffle(std::span<std::size_t>(members), rng);
            if (members.size() < k) plan.sparse_classes = true;
            order.insert(order.end(), members.begin(), members.end());
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) order.push_back(i);
        shuffle(std::span<std::size_t>(order), rng);
    }
    plan.folds.resize(k);
    for (std::size_t p = 0; p < n; ++p) plan.folds[p % k].push_back(order[p]);
    for (auto& f : plan.folds) std::sort(f.begin(), f.end());
    return plan;
}

}  // namespace zeroml
