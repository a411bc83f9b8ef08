#pragma once

#include "lrsc/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lrsc {

using Labels = std::vector<int>;

/// Points stored column-wise (D x N) with optional ground-truth labels.
struct Dataset {
    Matrix points;
    std::optional<Labels> labels;
    /// Free-form key=value metadata, e.g. the generator configuration.
    std::map<std::string, std::string> meta;

    Index ambient_dim() const noexcept { return points.rows(); }
    Index size() const noexcept { return points.cols(); }
    /// Number of distinct classes in the labels (0 without labels).
    int num_classes() const;
    /// Throws InvalidInput unless labels (when present) have length N, lie in
    /// 0..k-1, and every class is non-empty.
    void validate() const;
};

} // namespace lrsc
