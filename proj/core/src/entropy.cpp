#include "qhelper/entropy.hpp"

#include <cmath>

#include "qhelper/errors.hpp"
#include "qhelper/tolerances.hpp"

namespace qhelper {

namespace detail {

double entropy_of_spectrum(const Eigen::VectorXd& eigs) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const double lambda = eigs[i];
    if (lambda < -tol::psd)
      throw ValidationError("entropy: negative eigenvalue " + std::to_string(lambda));
    if (lambda > 0.0) h -= lambda * std::log2(lambda);
  }
  return h < 0.0 && h > -tol::ent ? 0.0 : h;
}

}  // namespace detail

std::string quantity_name(EntropyQuantity q) {
  switch (q) {
    case EntropyQuantity::H: return "H";
    case EntropyQuantity::H_cond: return "H_cond";
    case EntropyQuantity::I: return "I";
    case EntropyQuantity::I_cond: return "I_cond";
  }
  return "?";
}

namespace {

std::size_t expected_arity(EntropyQuantity q) {
  switch (q) {
    case EntropyQuantity::H: return 1;
    case EntropyQuantity::H_cond:
    case EntropyQuantity::I: return 2;
    case EntropyQuantity::I_cond: return 3;
  }
  return 0;
}

std::string group_string(const LabelList& g) {
  std::string out;
  for (const auto& l : g) out += l;
  return out;
}

}  // namespace

std::string EntropyReport::to_string() const {
  std::string args;
  switch (quantity) {
    case EntropyQuantity::H: args = group_string(systems[0]); break;
    case EntropyQuantity::H_cond:
      args = group_string(systems[0]) + "|" + group_string(systems[1]);
      break;
    case EntropyQuantity::I:
      args = group_string(systems[0]) + ";" + group_string(systems[1]);
      break;
    case EntropyQuantity::I_cond:
      args = group_string(systems[0]) + ";" + group_string(systems[1]) + "|" +
             group_string(systems[2]);
      break;
  }
  const bool plain_h =
      quantity == EntropyQuantity::H || quantity == EntropyQuantity::H_cond;
  return std::string(plain_h ? "H" : "I") + "(" + args + ") = " + std::to_string(value);
}

EntropyReport compute_report(const DensityOperator& rho, EntropyQuantity quantity,
                             const std::vector<LabelList>& systems) {
  if (systems.size() != expected_arity(quantity))
    throw LayoutError("entropy report: " + quantity_name(quantity) + " takes " +
                      std::to_string(expected_arity(quantity)) + " label sets");
  EntropyReport rep{quantity, systems, 0.0};
  switch (quantity) {
    case EntropyQuantity::H: rep.value = entropy(rho, systems[0]); break;
    case EntropyQuantity::H_cond:
      rep.value = cond_entropy(rho, systems[0], systems[1]);
      break;
    case EntropyQuantity::I: rep.value = mutual_info(rho, systems[0], systems[1]); break;
    case EntropyQuantity::I_cond:
      rep.value = cond_mutual_info(rho, systems[0], systems[1], systems[2]);
      break;
  }
  if (!std::isfinite(rep.value))
    throw ValidationError("entropy report: non-finite value");
  if (quantity == EntropyQuantity::H && rep.value < -tol::ent)
    throw ValidationError("entropy report: negative entropy " +
                          std::to_string(rep.value));
  return rep;
}

namespace {

void check_disjoint(const LabelList& x, const LabelList& y, const char* op) {
  if (sets_overlap(x, y))
    throw LayoutError(std::string(op) + ": label sets overlap");
}

}  // namespace

double entropy(const DensityOperator& rho, const LabelList& systems) {
  const LabelList kept = rho.layout().normalize_set(systems);
  if (kept.size() == static_cast<std::size_t>(rho.layout().size()))
    return detail::entropy_of_spectrum(detail::hermitian_eigenvalues(rho.matrix()));
  const Matrix red = detail::reduced_from_matrix(rho.layout(), rho.matrix(), kept);
  return detail::entropy_of_spectrum(detail::hermitian_eigenvalues(red));
}

double entropy(const DensityOperator& rho) { return entropy(rho, rho.layout().labels()); }

double entropy(const PureState& psi, const LabelList& systems) {
  const LabelList kept = psi.layout().normalize_set(systems);
  const LabelList rest = psi.layout().complement(kept);
  // Reduce on the smaller side of the bipartition; spectra coincide.
  const LabelList& side =
      psi.layout().dim_of_set(kept) <= psi.layout().dim_of_set(rest) ? kept : rest;
  if (side.empty()) return 0.0;
  const Matrix red = detail::reduced_from_vector(psi.layout(), psi.vector(), side);
  return detail::entropy_of_spectrum(detail::hermitian_eigenvalues(red));
}

template <typename State>
static double cond_entropy_impl(const State& s, const LabelList& x, const LabelList& y) {
  check_disjoint(x, y, "cond_entropy");
  return entropy(s, set_union(x, y)) - entropy(s, y);
}

template <typename State>
static double mutual_info_impl(const State& s, const LabelList& x, const LabelList& y) {
  check_disjoint(x, y, "mutual_info");
  return entropy(s, x) + entropy(s, y) - entropy(s, set_union(x, y));
}

template <typename State>
static double cond_mutual_info_impl(const State& s, const LabelList& x,
                                    const LabelList& y, const LabelList& z) {
  check_disjoint(x, y, "cond_mutual_info");
  check_disjoint(x, z, "cond_mutual_info");
  check_disjoint(y, z, "cond_mutual_info");
  return mutual_info_impl(s, x, set_union(y, z)) - mutual_info_impl(s, x, z);
}

double cond_entropy(const DensityOperator& rho, const LabelList& x, const LabelList& y) {
  return cond_entropy_impl(rho, x, y);
}
double cond_entropy(const PureState& psi, const LabelList& x, const LabelList& y) {
  return cond_entropy_impl(psi, x, y);
}
double mutual_info(const DensityOperator& rho, const LabelList& x, const LabelList& y) {
  return mutual_info_impl(rho, x, y);
}
double mutual_info(const PureState& psi, const LabelList& x, const LabelList& y) {
  return mutual_info_impl(psi, x, y);
}
double cond_mutual_info(const DensityOperator& rho, const LabelList& x,
                        const LabelList& y, const LabelList& z) {
  return cond_mutual_info_impl(rho, x, y, z);
}
double cond_mutual_info(const PureState& psi, const LabelList& x, const LabelList& y,
                        const LabelList& z) {
  return cond_mutual_info_impl(psi, x, y, z);
}

}  // namespace qhelper
