#pragma once

#include <Eigen/Dense>

#include "qhelper/layout.hpp"
#include "qhelper/rng.hpp"

namespace qhelper {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Positive unit-trace operator over a labeled tensor factorization.
// Validation enforces Hermiticity within tol::herm, trace within tol::tr
// of one and eigenvalues >= -tol::psd. Use `unchecked` for results that
// are valid by construction (partial traces, isometry images, ...).
class DensityOperator {
public:
  DensityOperator(SystemLayout layout, Matrix matrix);

  static DensityOperator unchecked(SystemLayout layout, Matrix matrix);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return mat_; }

  DensityOperator relabeled(const LabelList& from, const LabelList& to) const;

  void validate() const;

private:
  DensityOperator() = default;
  SystemLayout layout_;
  Matrix mat_;
};

// Unit vector over a labeled tensor factorization.
class PureState {
public:
  PureState(SystemLayout layout, Vector vector);

  static PureState unchecked(SystemLayout layout, Vector vector);

  const SystemLayout& layout() const { return layout_; }
  const Vector& vector() const { return vec_; }

  /// Projector |psi><psi| as a DensityOperator.
  DensityOperator to_density() const;

  PureState relabeled(const LabelList& from, const LabelList& to) const;

  void validate() const;

private:
  PureState() = default;
  SystemLayout layout_;
  Vector vec_;
};

/// Kronecker product with concatenated layout.
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureState tensor(const PureState& a, const PureState& b);

/// Reduced state on `keep` (layout order preserved).
DensityOperator partial_trace(const DensityOperator& rho, const LabelList& keep);

/// Reduced density matrix of a pure state on `keep`.
DensityOperator partial_trace(const PureState& psi, const LabelList& keep);

/// Purification with reference system `ref_label` appended rightmost;
/// reference dimension = rank of rho (eigenvalues above tol::rank).
PureState purify(const DensityOperator& rho, const Label& ref_label);

/// Half the trace norm of rho - sigma; layouts must match.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Reorders the tensor factors; the state itself is unchanged.
PureState permuted(const PureState& psi, const LabelList& new_order);
DensityOperator permuted(const DensityOperator& rho, const LabelList& new_order);

/// Fuses adjacent labels into one (dims multiply, indices concatenate).
/// `group` must appear contiguously, in order, in the layout.
PureState merge_labels(const PureState& psi, const LabelList& group, const Label& merged);

// --- stock states ------------------------------------------------------

/// Maximally entangled pair (|00> + |11>)/sqrt(2) on labels a, b.
PureState bell_pair(const Label& a = "A", const Label& b = "B");

/// p * Phi + (1 - p) * I/4 on two qubits, p in [0, 1].
DensityOperator isotropic_state(double p, const Label& a = "A", const Label& b = "B");

/// Product of two qubit states diag(q, 1-q) whose binary entropies are
/// h1 and h2 (bits, in [0, 1]).
DensityOperator product_state(double h1, double h2, const Label& a = "A",
                              const Label& b = "B");

/// diag state with the given spectrum (normalized spectrum required).
DensityOperator diagonal_state(const std::vector<double>& spectrum, const Label& l);

/// Wishart-distributed random full-rank density operator.
DensityOperator random_density(const SystemLayout& layout, Rng& rng);

/// Haar-ish random unit vector.
PureState random_pure(const SystemLayout& layout, Rng& rng);

/// Random rank-limited bipartite source on labels a, b: the reduction of
/// a random pure state with a rank-dim reference.
DensityOperator random_source(int dim_a, int dim_b, int rank, Rng& rng,
                              const Label& a = "A", const Label& b = "B");

/// Inverse of the binary entropy on [0, 1/2]; h in [0, 1] bits.
double binary_entropy_inverse(double h);

namespace detail {

/// Reduced density matrix of a raw vector over `layout`, keeping `keep`
/// (must be normalized against the layout).
Matrix reduced_from_vector(const SystemLayout& layout, const Vector& v,
                           const LabelList& keep);

/// Reduced density matrix of a raw matrix over `layout`.
Matrix reduced_from_matrix(const SystemLayout& layout, const Matrix& m,
                           const LabelList& keep);

/// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

}  // namespace detail

}  // namespace qhelper
