#pragma once

#include "qhelper/state.hpp"

namespace qhelper {

enum class EntropyQuantity { H, H_cond, I, I_cond };

struct EntropyReport {
  EntropyQuantity quantity;
  std::vector<LabelList> systems;  // 1, 2 or 3 label sets depending on quantity
  double value = 0.0;              // bits

  std::string to_string() const;  // e.g. "I(A;B|C) = 1.5"
};

std::string quantity_name(EntropyQuantity q);

/// Evaluates one entropic quantity and wraps it in a validated report
/// (finite value, plain entropies nonnegative up to tolerance).
EntropyReport compute_report(const DensityOperator& rho, EntropyQuantity quantity,
                             const std::vector<LabelList>& systems);

// All logarithms are base 2; every value is in bits. Entropies of a pure
// state's subsystem are computed on the smaller side of the bipartition
// (the spectra agree), which keeps the cost of large global states down.

/// Von Neumann entropy of the reduction onto `systems`.
double entropy(const DensityOperator& rho, const LabelList& systems);
double entropy(const PureState& psi, const LabelList& systems);

/// Entropy of the full state.
double entropy(const DensityOperator& rho);

/// H(X|Y) = H(XY) - H(Y).
double cond_entropy(const DensityOperator& rho, const LabelList& x, const LabelList& y);
double cond_entropy(const PureState& psi, const LabelList& x, const LabelList& y);

/// I(X;Y) = H(X) + H(Y) - H(XY).
double mutual_info(const DensityOperator& rho, const LabelList& x, const LabelList& y);
double mutual_info(const PureState& psi, const LabelList& x, const LabelList& y);

/// I(X;Y|Z) = I(X;YZ) - I(X;Z).
double cond_mutual_info(const DensityOperator& rho, const LabelList& x,
                        const LabelList& y, const LabelList& z);
double cond_mutual_info(const PureState& psi, const LabelList& x, const LabelList& y,
                        const LabelList& z);

namespace detail {

/// -sum lambda log2 lambda with 0 log 0 = 0; eigenvalues in (-tol::psd, 0]
/// are clipped to zero, more negative ones raise ValidationError.
double entropy_of_spectrum(const Eigen::VectorXd& eigs);

}  // namespace detail

}  // namespace qhelper
