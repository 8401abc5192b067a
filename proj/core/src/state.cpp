#include "qhelper/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qhelper/errors.hpp"
#include "qhelper/tolerances.hpp"

namespace qhelper {

namespace {

// Flat offsets contributed by every multi-index over `labels`, expanded
// left to right so the first label is the most significant digit.
std::vector<long long> subindex_offsets(const SystemLayout& layout,
                                        const LabelList& labels) {
  auto strides = layout.strides();
  std::vector<long long> out{0};
  for (const auto& l : labels) {
    const int i = layout.index_of(l);
    std::vector<long long> next;
    next.reserve(out.size() * layout.dims()[i]);
    for (long long base : out)
      for (int k = 0; k < layout.dims()[i]; ++k) next.push_back(base + k * strides[i]);
    out = std::move(next);
  }
  return out;
}

LabelList replace_labels(const LabelList& labels, const LabelList& from,
                         const LabelList& to) {
  if (from.size() != to.size())
    throw LayoutError("relabel: from/to lists differ in length");
  LabelList out = labels;
  for (std::size_t k = 0; k < from.size(); ++k) {
    bool found = false;
    for (auto& l : out) {
      if (l == from[k]) {
        l = to[k];
        found = true;
        break;
      }
    }
    if (!found) throw LayoutError("relabel: unknown label '" + from[k] + "'");
  }
  return out;
}

}  // namespace

namespace detail {

Matrix reduced_from_vector(const SystemLayout& layout, const Vector& v,
                           const LabelList& keep) {
  const LabelList kept = layout.normalize_set(keep);
  const LabelList traced = layout.complement(kept);
  const auto keep_off = subindex_offsets(layout, kept);
  const auto trace_off = subindex_offsets(layout, traced);
  const long long dk = static_cast<long long>(keep_off.size());

  Matrix out = Matrix::Zero(dk, dk);
  for (long long a = 0; a < dk; ++a)
    for (long long b = 0; b <= a; ++b) {
      Complex acc = 0.0;
      for (long long t : trace_off)
        acc += v[keep_off[a] + t] * std::conj(v[keep_off[b] + t]);
      out(a, b) = acc;
      if (a != b) out(b, a) = std::conj(acc);
    }
  return out;
}

Matrix reduced_from_matrix(const SystemLayout& layout, const Matrix& m,
                           const LabelList& keep) {
  const LabelList kept = layout.normalize_set(keep);
  const LabelList traced = layout.complement(kept);
  const auto keep_off = subindex_offsets(layout, kept);
  const auto trace_off = subindex_offsets(layout, traced);
  const long long dk = static_cast<long long>(keep_off.size());

  Matrix out = Matrix::Zero(dk, dk);
  for (long long a = 0; a < dk; ++a)
    for (long long b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (long long t : trace_off) acc += m(keep_off[a] + t, keep_off[b] + t);
      out(a, b) = acc;
    }
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace detail

// --- DensityOperator ----------------------------------------------------

DensityOperator::DensityOperator(SystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), mat_(std::move(matrix)) {
  validate();
}

DensityOperator DensityOperator::unchecked(SystemLayout layout, Matrix matrix) {
  DensityOperator rho;
  rho.layout_ = std::move(layout);
  rho.mat_ = std::move(matrix);
  return rho;
}

void DensityOperator::validate() const {
  const long long d = layout_.total_dim();
  if (mat_.rows() != d || mat_.cols() != d)
    throw ValidationError("density operator: matrix side " + std::to_string(mat_.rows()) +
                          " does not match layout dimension " + std::to_string(d));
  const double herm_dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol::herm)
    throw ValidationError("density operator: not Hermitian (deviation " +
                          std::to_string(herm_dev) + ")");
  const double tr_dev = std::abs(mat_.trace() - Complex(1.0, 0.0));
  if (tr_dev > tol::tr)
    throw ValidationError("density operator: trace deviates from 1 by " +
                          std::to_string(tr_dev));
  const auto eigs = detail::hermitian_eigenvalues(mat_);
  if (eigs.minCoeff() < -tol::psd)
    throw ValidationError("density operator: negative eigenvalue " +
                          std::to_string(eigs.minCoeff()));
}

DensityOperator DensityOperator::relabeled(const LabelList& from,
                                           const LabelList& to) const {
  return unchecked(SystemLayout(replace_labels(layout_.labels(), from, to),
                                layout_.dims()),
                   mat_);
}

// --- PureState -----------------------------------------------------------

PureState::PureState(SystemLayout layout, Vector vector)
    : layout_(std::move(layout)), vec_(std::move(vector)) {
  validate();
}

PureState PureState::unchecked(SystemLayout layout, Vector vector) {
  PureState psi;
  psi.layout_ = std::move(layout);
  psi.vec_ = std::move(vector);
  return psi;
}

void PureState::validate() const {
  if (vec_.size() != layout_.total_dim())
    throw ValidationError("pure state: vector length does not match layout");
  const double n2 = vec_.squaredNorm();
  if (std::abs(n2 - 1.0) > tol::tr)
    throw ValidationError("pure state: squared norm deviates from 1 by " +
                          std::to_string(std::abs(n2 - 1.0)));
}

DensityOperator PureState::to_density() const {
  return DensityOperator::unchecked(layout_, vec_ * vec_.adjoint());
}

PureState PureState::relabeled(const LabelList& from, const LabelList& to) const {
  return unchecked(SystemLayout(replace_labels(layout_.labels(), from, to),
                                layout_.dims()),
                   vec_);
}

// --- operations ----------------------------------------------------------

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  SystemLayout layout = SystemLayout::concat(a.layout(), b.layout());
  const long long da = a.layout().total_dim(), db = b.layout().total_dim();
  Matrix out(da * db, da * db);
  for (long long i = 0; i < da; ++i)
    for (long long j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return DensityOperator::unchecked(std::move(layout), std::move(out));
}

PureState tensor(const PureState& a, const PureState& b) {
  SystemLayout layout = SystemLayout::concat(a.layout(), b.layout());
  const long long da = a.layout().total_dim(), db = b.layout().total_dim();
  Vector out(da * db);
  for (long long i = 0; i < da; ++i) out.segment(i * db, db) = a.vector()[i] * b.vector();
  return PureState::unchecked(std::move(layout), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, const LabelList& keep) {
  const LabelList kept = rho.layout().normalize_set(keep);
  Matrix red = detail::reduced_from_matrix(rho.layout(), rho.matrix(), kept);
  return DensityOperator::unchecked(rho.layout().keep_only(kept), std::move(red));
}

DensityOperator partial_trace(const PureState& psi, const LabelList& keep) {
  const LabelList kept = psi.layout().normalize_set(keep);
  Matrix red = detail::reduced_from_vector(psi.layout(), psi.vector(), kept);
  return DensityOperator::unchecked(psi.layout().keep_only(kept), std::move(red));
}

PureState purify(const DensityOperator& rho, const Label& ref_label) {
  if (rho.layout().has(ref_label))
    throw LayoutError("purify: reference label '" + ref_label + "' already in layout");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
  if (solver.info() != Eigen::Success)
    throw ValidationError("purify: eigendecomposition failed");
  const auto& eigs = solver.eigenvalues();
  if (eigs.minCoeff() < -tol::psd)
    throw ValidationError("purify: input not PSD (eigenvalue " +
                          std::to_string(eigs.minCoeff()) + ")");

  const long long d = rho.layout().total_dim();
  // Eigenvalues ascending; take the significant ones largest-first.
  std::vector<int> kept;
  for (int k = static_cast<int>(d) - 1; k >= 0; --k)
    if (eigs[k] > tol::rank) kept.push_back(k);
  const int rank = std::max<int>(1, static_cast<int>(kept.size()));

  Vector v = Vector::Zero(d * rank);
  for (int r = 0; r < static_cast<int>(kept.size()); ++r) {
    const double w = std::sqrt(eigs[kept[r]]);
    for (long long i = 0; i < d; ++i)
      v[i * rank + r] = w * solver.eigenvectors()(i, kept[r]);
  }
  v /= v.norm();

  SystemLayout ref({ref_label}, {rank});
  return PureState::unchecked(SystemLayout::concat(rho.layout(), ref), std::move(v));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (!(rho.layout() == sigma.layout()))
    throw LayoutError("trace_distance: layouts differ: " + rho.layout().to_string() +
                      " vs " + sigma.layout().to_string());
  const auto eigs = detail::hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  return 0.5 * eigs.cwiseAbs().sum();
}

namespace {

std::vector<long long> permutation_map(const SystemLayout& old_layout,
                                       const SystemLayout& new_layout) {
  const int n = old_layout.size();
  const auto old_strides = old_layout.strides();
  const auto new_strides = new_layout.strides();
  std::vector<int> new_pos(n);
  for (int i = 0; i < n; ++i) new_pos[i] = new_layout.index_of(old_layout.labels()[i]);

  const long long total = old_layout.total_dim();
  std::vector<long long> map(total);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx, out = 0;
    for (int i = 0; i < n; ++i) {
      const long long digit = rem / old_strides[i];
      rem %= old_strides[i];
      out += digit * new_strides[new_pos[i]];
    }
    map[idx] = out;
  }
  return map;
}

}  // namespace

PureState permuted(const PureState& psi, const LabelList& new_order) {
  if (new_order.size() != static_cast<std::size_t>(psi.layout().size()))
    throw LayoutError("permute: new order must list every label");
  std::vector<int> dims;
  for (const auto& l : new_order) dims.push_back(psi.layout().dim_of(l));
  SystemLayout new_layout(new_order, dims);

  const auto map = permutation_map(psi.layout(), new_layout);
  Vector out(psi.vector().size());
  for (long long i = 0; i < psi.vector().size(); ++i) out[map[i]] = psi.vector()[i];
  return PureState::unchecked(std::move(new_layout), std::move(out));
}

DensityOperator permuted(const DensityOperator& rho, const LabelList& new_order) {
  if (new_order.size() != static_cast<std::size_t>(rho.layout().size()))
    throw LayoutError("permute: new order must list every label");
  std::vector<int> dims;
  for (const auto& l : new_order) dims.push_back(rho.layout().dim_of(l));
  SystemLayout new_layout(new_order, dims);

  const auto map = permutation_map(rho.layout(), new_layout);
  const long long d = rho.layout().total_dim();
  Matrix out(d, d);
  for (long long i = 0; i < d; ++i)
    for (long long j = 0; j < d; ++j) out(map[i], map[j]) = rho.matrix()(i, j);
  return DensityOperator::unchecked(std::move(new_layout), std::move(out));
}

PureState merge_labels(const PureState& psi, const LabelList& group, const Label& merged) {
  if (group.empty()) throw LayoutError("merge_labels: empty group");
  const auto& labels = psi.layout().labels();
  const int start = psi.layout().index_of(group.front());
  for (std::size_t k = 0; k < group.size(); ++k) {
    const std::size_t pos = start + k;
    if (pos >= labels.size() || labels[pos] != group[k])
      throw LayoutError("merge_labels: group must be contiguous in layout order");
  }
  // Contiguous digits already concatenate, so only the layout changes.
  LabelList new_labels(labels.begin(), labels.begin() + start);
  std::vector<int> new_dims(psi.layout().dims().begin(),
                            psi.layout().dims().begin() + start);
  int fused = 1;
  for (std::size_t k = 0; k < group.size(); ++k)
    fused *= psi.layout().dims()[start + k];
  new_labels.push_back(merged);
  new_dims.push_back(fused);
  for (std::size_t k = start + group.size(); k < labels.size(); ++k) {
    new_labels.push_back(labels[k]);
    new_dims.push_back(psi.layout().dims()[k]);
  }
  return PureState::unchecked(SystemLayout(std::move(new_labels), std::move(new_dims)),
                              psi.vector());
}

// --- stock states ---------------------------------------------------------

PureState bell_pair(const Label& a, const Label& b) {
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return PureState::unchecked(SystemLayout({a, b}, {2, 2}), std::move(v));
}

DensityOperator isotropic_state(double p, const Label& a, const Label& b) {
  if (p < 0.0 || p > 1.0) throw ValidationError("isotropic: p must be in [0, 1]");
  const PureState phi = bell_pair(a, b);
  Matrix m = p * (phi.vector() * phi.vector().adjoint()) +
             (1.0 - p) * 0.25 * Matrix::Identity(4, 4);
  return DensityOperator::unchecked(phi.layout(), std::move(m));
}

DensityOperator diagonal_state(const std::vector<double>& spectrum, const Label& l) {
  const int d = static_cast<int>(spectrum.size());
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = spectrum[i];
  return DensityOperator(SystemLayout({l}, {d}), std::move(m));
}

double binary_entropy_inverse(double h) {
  if (h < 0.0 || h > 1.0)
    throw ValidationError("binary entropy inverse: h must be in [0, 1]");
  auto h2 = [](double q) {
    double s = 0.0;
    if (q > 0.0) s -= q * std::log2(q);
    if (q < 1.0) s -= (1.0 - q) * std::log2(1.0 - q);
    return s;
  };
  double lo = 0.0, hi = 0.5;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (h2(mid) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DensityOperator product_state(double h1, double h2, const Label& a, const Label& b) {
  const double q1 = binary_entropy_inverse(h1);
  const double q2 = binary_entropy_inverse(h2);
  return tensor(diagonal_state({1.0 - q1, q1}, a), diagonal_state({1.0 - q2, q2}, b));
}

DensityOperator random_density(const SystemLayout& layout, Rng& rng) {
  const long long d = layout.total_dim();
  Matrix g(d, d);
  for (long long i = 0; i < d; ++i)
    for (long long j = 0; j < d; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator::unchecked(layout, std::move(m));
}

PureState random_pure(const SystemLayout& layout, Rng& rng) {
  const long long d = layout.total_dim();
  Vector v(d);
  for (long long i = 0; i < d; ++i) v[i] = Complex(rng.gaussian(), rng.gaussian());
  v /= v.norm();
  return PureState::unchecked(layout, std::move(v));
}

DensityOperator random_source(int dim_a, int dim_b, int rank, Rng& rng,
                              const Label& a, const Label& b) {
  if (rank < 1) throw DimensionError("random_source: rank must be >= 1");
  PureState psi = random_pure(SystemLayout({a, b, "_ref"}, {dim_a, dim_b, rank}), rng);
  return partial_trace(psi, {a, b});
}

}  // namespace qhelper
