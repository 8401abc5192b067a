#pragma once

#include <optional>

#include "qhelper/state.hpp"

namespace qhelper {

// CPTP map as a Kraus family; sum K^dag K = I within tol::num.
class KrausChannel {
public:
  KrausChannel(int dim_in, int dim_out, std::vector<Matrix> kraus);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

private:
  int dim_in_, dim_out_;
  std::vector<Matrix> kraus_;
};

// Inner-product-preserving map B -> C (x) E realizing a channel as
// isometry-then-discard-E. Rows are indexed c * dim_env + e.
class StinespringIsometry {
public:
  StinespringIsometry(int dim_in, int dim_out, int dim_env, Matrix v);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  int dim_env() const { return dim_env_; }
  const Matrix& v() const { return v_; }

private:
  int dim_in_, dim_out_, dim_env_;
  Matrix v_;
};

// Point on the isometry manifold: theta parameterizes an anti-Hermitian
// generator G of side D = dim_out * dim_env (D diagonal imaginary parts,
// then re/im pairs for each i < j); the isometry is the first dim_in
// columns of exp(G).
struct ChannelParams {
  int dim_in = 0;
  int dim_out = 0;
  int dim_env = 0;
  std::vector<double> theta;

  int generator_side() const { return dim_out * dim_env; }
  static ChannelParams zeros(int dim_in, int dim_out, int dim_env);
};

StinespringIsometry kraus_to_stinespring(const KrausChannel& ch);

StinespringIsometry params_to_isometry(const ChannelParams& p);

StinespringIsometry random_isometry(int dim_in, int dim_out, int dim_env,
                                    std::uint64_t seed);

/// Applies V to `on`, replacing it by the two labels out_label (dim_out,
/// more significant) and env_label (dim_env) in place.
PureState apply_isometry(const PureState& psi, const StinespringIsometry& v,
                         const Label& on, const Label& out_label = "C",
                         const Label& env_label = "E");
DensityOperator apply_isometry(const DensityOperator& rho, const StinespringIsometry& v,
                               const Label& on, const Label& out_label = "C",
                               const Label& env_label = "E");

/// Kraus-sum action on `on`; the label keeps its position and is renamed
/// to out_label (defaults to keeping the name).
DensityOperator apply_kraus(const DensityOperator& rho, const KrausChannel& ch,
                            const Label& on, std::optional<Label> out_label = {});

// --- presets -------------------------------------------------------------

KrausChannel identity_channel(int dim);

/// Outputs the fixed state sigma regardless of input.
KrausChannel replace_channel(int dim_in, const DensityOperator& sigma);

/// trace-and-replace with a 1-dim output.
KrausChannel discard_channel(int dim_in);

/// {sqrt(1-p) I, sqrt(p) Z_d} with Z_d the clock matrix.
KrausChannel dephasing_channel(double p, int dim = 2);

/// rho -> (1-p) rho + p I/d, Weyl-operator Kraus form.
KrausChannel depolarizing_channel(double p, int dim = 2);

/// Qubit amplitude damping with decay gamma.
KrausChannel amplitude_damping_channel(double gamma);

/// Parses preset strings: "identity", "discard", "dephasing:P",
/// "depolarizing:P", "amplitude_damping:G". dim_in comes from the state
/// the channel will act on.
KrausChannel preset_channel(const std::string& spec, int dim_in);

/// Names accepted by preset_channel, for help output.
std::vector<std::string> preset_channel_names();

}  // namespace qhelper
