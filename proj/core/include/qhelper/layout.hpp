#pragma once

#include <string>
#include <vector>

namespace qhelper {

using Label = std::string;
using LabelList = std::vector<Label>;

// Ordered tensor factorization of a Hilbert space. The index convention
// is row-major over the label order: the leftmost label is the most
// significant index, i.e. for labels [X, Y] with dims [dx, dy] the basis
// state |x, y> sits at flat index x * dy + y. Partial trace, isometry
// application and serialization all rely on this convention.
class SystemLayout {
public:
  SystemLayout() = default;
  SystemLayout(LabelList labels, std::vector<int> dims);

  int size() const { return static_cast<int>(labels_.size()); }
  const LabelList& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }

  bool has(const Label& l) const;
  int index_of(const Label& l) const;  // throws LayoutError if missing
  int dim_of(const Label& l) const;

  /// Product of all dims; throws DimensionError on overflow past 2^24.
  long long total_dim() const { return total_; }

  /// Dims of a label subset, in layout order.
  long long dim_of_set(const LabelList& subset) const;

  /// Subset of this layout keeping only `keep`, in layout order.
  SystemLayout keep_only(const LabelList& keep) const;

  /// Validates that `set` is a subset with no duplicates; returns the
  /// members ordered as they appear in the layout.
  LabelList normalize_set(const LabelList& set) const;

  /// Labels not in `set`, in layout order.
  LabelList complement(const LabelList& set) const;

  /// Concatenation; throws LayoutError on label collision.
  static SystemLayout concat(const SystemLayout& a, const SystemLayout& b);

  /// Strides of each label under the row-major convention.
  std::vector<long long> strides() const;

  bool operator==(const SystemLayout& other) const {
    return labels_ == other.labels_ && dims_ == other.dims_;
  }

  std::string to_string() const;

private:
  LabelList labels_;
  std::vector<int> dims_;
  long long total_ = 1;
};

/// True if the label sets intersect.
bool sets_overlap(const LabelList& a, const LabelList& b);

/// Union of disjoint label sets (order: a then b's new members).
LabelList set_union(const LabelList& a, const LabelList& b);

}  // namespace qhelper
