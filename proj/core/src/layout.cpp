#include "qhelper/layout.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "qhelper/errors.hpp"

namespace qhelper {

namespace {
constexpr long long kMaxTotalDim = 1ll << 24;
}

SystemLayout::SystemLayout(LabelList labels, std::vector<int> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.size() != dims_.size())
    throw LayoutError("layout: labels and dims differ in length");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw LayoutError("layout: empty label");
    if (!seen.insert(l).second) throw LayoutError("layout: duplicate label '" + l + "'");
  }
  total_ = 1;
  for (int d : dims_) {
    if (d < 1) throw DimensionError("layout: dimension must be >= 1");
    total_ *= d;
    if (total_ > kMaxTotalDim) throw DimensionError("layout: total dimension overflow");
  }
}

bool SystemLayout::has(const Label& l) const {
  return std::find(labels_.begin(), labels_.end(), l) != labels_.end();
}

int SystemLayout::index_of(const Label& l) const {
  auto it = std::find(labels_.begin(), labels_.end(), l);
  if (it == labels_.end()) throw LayoutError("unknown label '" + l + "'");
  return static_cast<int>(it - labels_.begin());
}

int SystemLayout::dim_of(const Label& l) const { return dims_[index_of(l)]; }

long long SystemLayout::dim_of_set(const LabelList& subset) const {
  long long d = 1;
  for (const auto& l : subset) d *= dim_of(l);
  return d;
}

LabelList SystemLayout::normalize_set(const LabelList& set) const {
  std::unordered_set<std::string> want;
  for (const auto& l : set) {
    if (!has(l)) throw LayoutError("unknown label '" + l + "'");
    if (!want.insert(l).second) throw LayoutError("duplicate label '" + l + "' in set");
  }
  LabelList out;
  for (const auto& l : labels_)
    if (want.count(l)) out.push_back(l);
  return out;
}

LabelList SystemLayout::complement(const LabelList& set) const {
  LabelList norm = normalize_set(set);
  std::unordered_set<std::string> drop(norm.begin(), norm.end());
  LabelList out;
  for (const auto& l : labels_)
    if (!drop.count(l)) out.push_back(l);
  return out;
}

SystemLayout SystemLayout::keep_only(const LabelList& keep) const {
  LabelList norm = normalize_set(keep);
  std::vector<int> d;
  d.reserve(norm.size());
  for (const auto& l : norm) d.push_back(dim_of(l));
  return SystemLayout(norm, d);
}

SystemLayout SystemLayout::concat(const SystemLayout& a, const SystemLayout& b) {
  for (const auto& l : b.labels_)
    if (a.has(l)) throw LayoutError("label collision on '" + l + "'");
  LabelList labels = a.labels_;
  labels.insert(labels.end(), b.labels_.begin(), b.labels_.end());
  std::vector<int> dims = a.dims_;
  dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
  return SystemLayout(std::move(labels), std::move(dims));
}

std::vector<long long> SystemLayout::strides() const {
  std::vector<long long> s(labels_.size(), 1);
  for (int i = size() - 2; i >= 0; --i) s[i] = s[i + 1] * dims_[i + 1];
  return s;
}

std::string SystemLayout::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < size(); ++i) {
    if (i) os << ", ";
    os << labels_[i] << ":" << dims_[i];
  }
  os << "]";
  return os.str();
}

bool sets_overlap(const LabelList& a, const LabelList& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (x == y) return true;
  return false;
}

LabelList set_union(const LabelList& a, const LabelList& b) {
  LabelList out = a;
  for (const auto& y : b)
    if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
  return out;
}

}  // namespace qhelper
