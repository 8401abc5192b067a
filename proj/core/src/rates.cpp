#include "qhelper/rates.hpp"

#include <cmath>

#include "qhelper/errors.hpp"
#include "qhelper/tolerances.hpp"

namespace qhelper::rates {

HelperInstance::HelperInstance(DensityOperator rho, StinespringIsometry iso)
    : rho_ab(std::move(rho)), helper(std::move(iso)) {
  if (rho_ab.layout().size() != 2 || !rho_ab.layout().has("A") || !rho_ab.layout().has("B"))
    throw LayoutError("helper instance: source must live on labels A, B");
  if (rho_ab.layout().dim_of("B") != helper.dim_in())
    throw DimensionError("helper instance: helper input dim " +
                         std::to_string(helper.dim_in()) + " != dim(B) " +
                         std::to_string(rho_ab.layout().dim_of("B")));
}

GlobalPureState::GlobalPureState(PureState phi) : phi_(std::move(phi)) {
  for (const char* l : {"A", "C", "E", "R"})
    if (!phi_.layout().has(l))
      throw LayoutError(std::string("global state: missing label '") + l + "'");
}

RatePoint::RatePoint(double r1_, double r2_, std::optional<ChannelParams> p)
    : r1(r1_), r2(r2_), params(std::move(p)) {
  if (r2 < -tol::ent)
    throw ValidationError("rate point: r2 = " + std::to_string(r2) + " below 0");
}

GlobalPureState build_phi(const HelperInstance& inst) {
  const PureState psi_abr = purify(inst.rho_ab, "R");
  PureState phi = apply_isometry(psi_abr, inst.helper, "B", "C", "E");

  const Matrix marg_phi = detail::reduced_from_vector(phi.layout(), phi.vector(), {"A"});
  const Matrix marg_rho =
      detail::reduced_from_matrix(inst.rho_ab.layout(), inst.rho_ab.matrix(), {"A"});
  const double dev = (marg_phi - marg_rho).cwiseAbs().maxCoeff();
  if (dev > tol::num)
    throw ValidationError("build_phi: marginal on A changed by " + std::to_string(dev));
  return GlobalPureState(std::move(phi));
}

RatePoint rate_pair(const GlobalPureState& g) {
  const PureState& phi = g.phi();
  const double r1 = cond_entropy(phi, {"A"}, {"C"});
  const double r2 = 0.5 * mutual_info(phi, {"R", "A"}, {"C"});
  return RatePoint(r1, r2);
}

double naive_rate(const GlobalPureState& g) { return entropy(g.phi(), {"C"}); }

double decomposition_check(const GlobalPureState& g) {
  const PureState& phi = g.phi();
  const double h_c = entropy(phi, {"C"});
  const double i_ce = mutual_info(phi, {"C"}, {"E"});
  const double i_cra = mutual_info(phi, {"C"}, {"R", "A"});
  return std::abs(h_c - 0.5 * i_ce - 0.5 * i_cra);
}

MergingRates merging_rates(const PureState& psi, const Label& a, const Label& b,
                           const Label& r) {
  return {cond_entropy(psi, {a}, {b}), mutual_info(psi, {a}, {r})};
}

FqswRates fqsw_rates(const PureState& psi, const Label& a, const Label& b,
                     const Label& r) {
  return {0.5 * mutual_info(psi, {a}, {r}), 0.5 * mutual_info(psi, {a}, {b})};
}

QrstRates qrst_rates(const PureState& psi, const Label& r, const Label& b,
                     const Label& e) {
  return {0.5 * mutual_info(psi, {r}, {b}), 0.5 * mutual_info(psi, {e}, {b})};
}

DirectPartTotal direct_part_total(const GlobalPureState& g) {
  const PureState& phi = g.phi();
  return {0.5 * mutual_info(phi, {"R", "A"}, {"C"}),
          0.5 * mutual_info(phi, {"E"}, {"C"}),
          cond_entropy(phi, {"A"}, {"C"})};
}

DirectPartTotal direct_part_total(const HelperInstance& inst) {
  return direct_part_total(build_phi(inst));
}

// --- converse audit --------------------------------------------------------

namespace {

std::string idx_label(const char* base, int i) { return base + std::to_string(i); }

LabelList labels_below(const char* base, int i) {
  LabelList out;
  for (int k = 1; k < i; ++k) out.push_back(idx_label(base, k));
  return out;
}

}  // namespace

std::vector<AuditCheck> converse_audit(const DensityOperator& rho_ab, int n,
                                       const StinespringIsometry& aux,
                                       double tolerance) {
  if (n < 1 || n > 2) throw ValidationError("converse audit: n must be 1 or 2");
  const int dim_b = rho_ab.layout().dim_of("B");
  long long dim_bn = 1;
  for (int i = 0; i < n; ++i) dim_bn *= dim_b;
  if (aux.dim_in() != dim_bn)
    throw DimensionError("converse audit: aux isometry input dim " +
                         std::to_string(aux.dim_in()) + " != dim(B)^n = " +
                         std::to_string(dim_bn));

  // Copy i of the source, purified with its own reference R_i.
  std::optional<PureState> joint;
  for (int i = 1; i <= n; ++i) {
    const DensityOperator copy =
        rho_ab.relabeled({"A", "B"}, {idx_label("A", i), idx_label("B", i)});
    const PureState psi = purify(copy, idx_label("R", i));
    joint = joint ? tensor(*joint, psi) : psi;
  }

  // Rearrange so the B block is contiguous, fuse it and feed it to aux.
  LabelList order;
  for (int i = 1; i <= n; ++i) {
    order.push_back(idx_label("A", i));
    order.push_back(idx_label("R", i));
  }
  for (int i = 1; i <= n; ++i) order.push_back(idx_label("B", i));
  PureState arranged = permuted(*joint, order);
  LabelList b_group;
  for (int i = 1; i <= n; ++i) b_group.push_back(idx_label("B", i));
  arranged = merge_labels(arranged, b_group, "Bn");
  const PureState global = apply_isometry(arranged, aux, "Bn", "X", "W");

  const LabelList x = {"X"};
  LabelList all_a, all_ra;
  for (int i = 1; i <= n; ++i) {
    all_a.push_back(idx_label("A", i));
    all_ra.push_back(idx_label("R", i));
    all_ra.push_back(idx_label("A", i));
  }

  std::vector<AuditCheck> checks;
  auto push = [&](std::string name, double residual, bool inequality) {
    checks.push_back({std::move(name), residual, inequality,
                      residual <= tolerance});
  };

  // (a) H(A^n | X) = sum_i H(A_i | X A_{<i})
  {
    const double lhs = cond_entropy(global, all_a, x);
    double rhs = 0.0;
    for (int i = 1; i <= n; ++i)
      rhs += cond_entropy(global, {idx_label("A", i)},
                          set_union(x, labels_below("A", i)));
    push("chain_rule_cond_entropy", std::abs(lhs - rhs), false);
  }

  // (b) I(X ; R^n A^n) = sum_i I(X ; R_i A_i | R_{<i} A_{<i})
  {
    const double lhs = mutual_info(global, x, all_ra);
    double rhs = 0.0;
    for (int i = 1; i <= n; ++i) {
      const LabelList cur = {idx_label("R", i), idx_label("A", i)};
      const LabelList prev = set_union(labels_below("R", i), labels_below("A", i));
      rhs += cond_mutual_info(global, x, cur, prev);
    }
    push("chain_rule_mutual_info", std::abs(lhs - rhs), false);
  }

  // (c) I(R_{<i} A_{<i} ; R_i A_i) = 0 across independent copies
  {
    double worst = 0.0;
    for (int i = 2; i <= n; ++i) {
      const LabelList cur = {idx_label("R", i), idx_label("A", i)};
      const LabelList prev = set_union(labels_below("R", i), labels_below("A", i));
      worst = std::max(worst, std::abs(mutual_info(global, prev, cur)));
    }
    push("copy_independence", worst, false);
  }

  // (d) I(X R_{<i} A_{<i} ; R_i A_i) >= I(X A_{<i} ; R_i A_i)
  {
    double worst = 0.0;
    for (int i = 1; i <= n; ++i) {
      const LabelList cur = {idx_label("R", i), idx_label("A", i)};
      const LabelList with_r =
          set_union(x, set_union(labels_below("R", i), labels_below("A", i)));
      const LabelList without_r = set_union(x, labels_below("A", i));
      const double violation =
          mutual_info(global, without_r, cur) - mutual_info(global, with_r, cur);
      worst = std::max(worst, violation);
    }
    push("conditioning_monotonicity", std::max(0.0, worst), true);
  }

  return checks;
}

std::vector<AuditCheck> converse_audit(const DensityOperator& rho_ab, int n,
                                       std::uint64_t seed, int dim_x, int dim_anc,
                                       double tolerance) {
  const int dim_b = rho_ab.layout().dim_of("B");
  long long dim_bn = 1;
  for (int i = 0; i < n; ++i) dim_bn *= dim_b;
  if (dim_x <= 0) dim_x = static_cast<int>(dim_bn);
  if (dim_anc <= 0) dim_anc = static_cast<int>(dim_bn);
  const StinespringIsometry aux = random_isometry(
      static_cast<int>(dim_bn), dim_x, dim_anc, mix_seed(seed, 0xa0d17));
  return converse_audit(rho_ab, n, aux, tolerance);
}

}  // namespace qhelper::rates
