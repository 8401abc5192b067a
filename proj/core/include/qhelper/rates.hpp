#pragma once

#include <optional>

#include "qhelper/channel.hpp"
#include "qhelper/entropy.hpp"

namespace qhelper::rates {

// Bipartite source on labels A, B plus the helper's isometry B -> C (x) E.
struct HelperInstance {
  HelperInstance(DensityOperator rho_ab, StinespringIsometry helper);

  DensityOperator rho_ab;
  StinespringIsometry helper;
};

// Four-party pure state on labels A, C, E, R; every rate functional reads
// from it. R is the purification reference of the source, C/E the helper
// channel output and environment.
class GlobalPureState {
public:
  explicit GlobalPureState(PureState phi);

  const PureState& phi() const { return phi_; }
  const SystemLayout& layout() const { return phi_.layout(); }

private:
  PureState phi_;
};

// (R1, R2) in ebits / qubits per source copy. R1 may be negative
// (entanglement gain); R2 is nonnegative up to tolerance.
struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;
  std::optional<ChannelParams> params;

  RatePoint() = default;
  RatePoint(double r1, double r2, std::optional<ChannelParams> params = {});
};

/// Purifies the source with reference R and applies the helper to B,
/// producing C and E; the marginal on A is checked to be preserved.
GlobalPureState build_phi(const HelperInstance& inst);

/// r1 = H(A|C), r2 = I(RA;C) / 2.
RatePoint rate_pair(const GlobalPureState& phi);

/// H(C): the rate of naively compressing the helper output.
double naive_rate(const GlobalPureState& phi);

/// Residual of H(C) = I(C;E)/2 + I(C;RA)/2.
double decomposition_check(const GlobalPureState& phi);

struct MergingRates {
  double ebit_cost;  // H(A|B), negative = gain
  double cbit_cost;  // I(A;R)
};
MergingRates merging_rates(const PureState& psi, const Label& a = "A",
                           const Label& b = "B", const Label& r = "R");

struct FqswRates {
  double qubit_cost;  // I(A;R) / 2
  double ebit_gain;   // I(A;B) / 2
};
FqswRates fqsw_rates(const PureState& psi, const Label& a = "A", const Label& b = "B",
                     const Label& r = "R");

struct QrstRates {
  double qubit_cost;  // I(R;B) / 2
  double ebit_cost;   // I(E;B) / 2
};
QrstRates qrst_rates(const PureState& psi, const Label& r = "R", const Label& b = "B",
                     const Label& e = "E");

// Resource totals of the channel-simulation + merging protocol; matches
// rate_pair with helper_qubits = r2 and alice_ebits = r1.
struct DirectPartTotal {
  double helper_qubits;  // I(RA;C) / 2
  double helper_ebits;   // I(E;C) / 2
  double alice_ebits;    // H(A|C)
};
DirectPartTotal direct_part_total(const HelperInstance& inst);
DirectPartTotal direct_part_total(const GlobalPureState& phi);

// --- converse audit -------------------------------------------------------

struct AuditCheck {
  std::string name;
  double residual = 0.0;   // |lhs - rhs|, or inequality violation
  bool inequality = false;
  bool pass = false;
};

/// Numerically verifies the entropy identities used by the converse on
/// rho_AB^(x)n with `aux` playing the decoder-side systems: the isometry
/// consumes the joined B^n and its output marginal X is the auxiliary.
/// n must be 1 or 2 at desk-scale dims.
std::vector<AuditCheck> converse_audit(const DensityOperator& rho_ab, int n,
                                       const StinespringIsometry& aux,
                                       double tolerance = 1e-8);

/// Convenience overload: seeds a random auxiliary isometry with output
/// dims (dim_x, dim_anc), both defaulting to dim(B)^n.
std::vector<AuditCheck> converse_audit(const DensityOperator& rho_ab, int n,
                                       std::uint64_t seed, int dim_x = 0,
                                       int dim_anc = 0, double tolerance = 1e-8);

}  // namespace qhelper::rates
