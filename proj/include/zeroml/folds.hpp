#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace zeroml {

struct FoldPlan {
    std::vector<std::vector<std::size_t>> folds;  // each sorted ascending
    /// Set when stratification was requested but some class has fewer members
    /// than there are folds, so that class cannot appear in every fold.
    bool sparse_classes = false;

    /// All indices not in fold `k`, ascending.
    std::vector<std::size_t> training_rows(std::size_t k) const;
};

/// Shuffled k-fold partition of 0..n-1. With labels, rows are grouped by
/// class (ascending label), each group shuffled, and the concatenation dealt
/// round-robin so per-class counts differ by at most one across folds.
/// Throws FoldError unless 2 <= k <= n.
FoldPlan kfold(std::size_t n, std::size_t k, std::optional<std::span<const int>> labels, std::int64_t seed);

}  // namespace zeroml
