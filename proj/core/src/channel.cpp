#include "qhelper/channel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "qhelper/errors.hpp"
#include "qhelper/tolerances.hpp"

namespace qhelper {

KrausChannel::KrausChannel(int dim_in, int dim_out, std::vector<Matrix> kraus)
    : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
  if (dim_in_ < 1 || dim_out_ < 1) throw DimensionError("kraus channel: dims must be >= 1");
  if (kraus_.empty()) throw ValidationError("kraus channel: empty Kraus family");
  Matrix sum = Matrix::Zero(dim_in_, dim_in_);
  for (const auto& k : kraus_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_)
      throw DimensionError("kraus channel: operator shape mismatch");
    sum += k.adjoint() * k;
  }
  const double dev = (sum - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
  if (dev > tol::num)
    throw ValidationError("kraus channel: completeness violated by " + std::to_string(dev));
}

StinespringIsometry::StinespringIsometry(int dim_in, int dim_out, int dim_env, Matrix v)
    : dim_in_(dim_in), dim_out_(dim_out), dim_env_(dim_env), v_(std::move(v)) {
  if (dim_in_ < 1 || dim_out_ < 1 || dim_env_ < 1)
    throw DimensionError("isometry: dims must be >= 1");
  if (v_.rows() != static_cast<long long>(dim_out_) * dim_env_ || v_.cols() != dim_in_)
    throw DimensionError("isometry: matrix shape mismatch");
  const double dev =
      (v_.adjoint() * v_ - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
  if (dev > tol::num)
    throw ValidationError("isometry: V^dag V deviates from I by " + std::to_string(dev));
}

ChannelParams ChannelParams::zeros(int dim_in, int dim_out, int dim_env) {
  ChannelParams p;
  p.dim_in = dim_in;
  p.dim_out = dim_out;
  p.dim_env = dim_env;
  p.theta.assign(static_cast<std::size_t>(p.generator_side()) * p.generator_side(), 0.0);
  return p;
}

StinespringIsometry kraus_to_stinespring(const KrausChannel& ch) {
  const int n = static_cast<int>(ch.kraus().size());
  Matrix v = Matrix::Zero(static_cast<long long>(ch.dim_out()) * n, ch.dim_in());
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < ch.dim_out(); ++c)
      v.row(static_cast<long long>(c) * n + k) = ch.kraus()[k].row(c);
  return StinespringIsometry(ch.dim_in(), ch.dim_out(), n, std::move(v));
}

StinespringIsometry params_to_isometry(const ChannelParams& p) {
  const int d = p.generator_side();
  if (d < p.dim_in)
    throw DimensionError("params_to_isometry: dim_out * dim_env < dim_in");
  if (p.theta.size() != static_cast<std::size_t>(d) * d)
    throw ValidationError("params_to_isometry: theta length must be D^2");
  for (double t : p.theta)
    if (!std::isfinite(t)) throw ValidationError("params_to_isometry: non-finite theta");

  Matrix g = Matrix::Zero(d, d);
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) g(i, i) = Complex(0.0, p.theta[idx++]);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double re = p.theta[idx++];
      const double im = p.theta[idx++];
      g(i, j) = Complex(re, im);
      g(j, i) = Complex(-re, im);
    }
  const Matrix u = g.exp();
  return StinespringIsometry(p.dim_in, p.dim_out, p.dim_env, u.leftCols(p.dim_in));
}

StinespringIsometry random_isometry(int dim_in, int dim_out, int dim_env,
                                    std::uint64_t seed) {
  const long long d = static_cast<long long>(dim_out) * dim_env;
  if (d < dim_in) throw DimensionError("random_isometry: dim_out * dim_env < dim_in");
  Rng rng(seed);
  Matrix g(d, dim_in);
  for (long long i = 0; i < d; ++i)
    for (int j = 0; j < dim_in; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, dim_in);
  const Matrix r = qr.matrixQR().topRows(dim_in).triangularView<Eigen::Upper>();
  for (int j = 0; j < dim_in; ++j) {
    const Complex rj = r(j, j);
    if (std::abs(rj) > 0.0) q.col(j) *= rj / std::abs(rj);
  }
  return StinespringIsometry(dim_in, dim_out, dim_env, std::move(q));
}

namespace {

struct SplitDims {
  long long left, mid, right;
  int pos;
};

SplitDims split_around(const SystemLayout& layout, const Label& on) {
  SplitDims s{1, 1, 1, layout.index_of(on)};
  for (int i = 0; i < layout.size(); ++i) {
    if (i < s.pos)
      s.left *= layout.dims()[i];
    else if (i == s.pos)
      s.mid = layout.dims()[i];
    else
      s.right *= layout.dims()[i];
  }
  return s;
}

// y = (I_left (x) M (x) I_right) x for an arbitrary rectangular M.
Vector apply_middle(const Vector& x, const Matrix& m, long long left, long long right) {
  const long long din = m.cols(), dout = m.rows();
  Vector y = Vector::Zero(left * dout * right);
  Vector block(din);
  for (long long l = 0; l < left; ++l)
    for (long long r = 0; r < right; ++r) {
      for (long long k = 0; k < din; ++k) block[k] = x[(l * din + k) * right + r];
      const Vector out = m * block;
      for (long long k = 0; k < dout; ++k) y[(l * dout + k) * right + r] = out[k];
    }
  return y;
}

Matrix conjugate_middle(const Matrix& rho, const Matrix& m, long long left,
                        long long right) {
  const long long dout = m.rows();
  Matrix half(left * dout * right, rho.cols());
  for (long long c = 0; c < rho.cols(); ++c)
    half.col(c) = apply_middle(rho.col(c), m, left, right);
  Matrix full(left * dout * right, left * dout * right);
  const Matrix half_adj = half.adjoint();
  for (long long c = 0; c < half_adj.cols(); ++c)
    full.col(c) = apply_middle(half_adj.col(c), m, left, right);
  return full.adjoint();
}

SystemLayout replaced_layout(const SystemLayout& layout, const Label& on,
                             const std::vector<std::pair<Label, int>>& repl) {
  const int pos = layout.index_of(on);
  LabelList labels;
  std::vector<int> dims;
  for (int i = 0; i < layout.size(); ++i) {
    if (i == pos) {
      for (const auto& [l, d] : repl) {
        labels.push_back(l);
        dims.push_back(d);
      }
    } else {
      labels.push_back(layout.labels()[i]);
      dims.push_back(layout.dims()[i]);
    }
  }
  return SystemLayout(std::move(labels), std::move(dims));
}

}  // namespace

PureState apply_isometry(const PureState& psi, const StinespringIsometry& iso,
                         const Label& on, const Label& out_label,
                         const Label& env_label) {
  const auto s = split_around(psi.layout(), on);
  if (s.mid != iso.dim_in())
    throw DimensionError("apply_isometry: label '" + on + "' has dim " +
                         std::to_string(s.mid) + ", isometry expects " +
                         std::to_string(iso.dim_in()));
  SystemLayout layout = replaced_layout(
      psi.layout(), on, {{out_label, iso.dim_out()}, {env_label, iso.dim_env()}});
  Vector v = apply_middle(psi.vector(), iso.v(), s.left, s.right);
  return PureState::unchecked(std::move(layout), std::move(v));
}

DensityOperator apply_isometry(const DensityOperator& rho, const StinespringIsometry& iso,
                               const Label& on, const Label& out_label,
                               const Label& env_label) {
  const auto s = split_around(rho.layout(), on);
  if (s.mid != iso.dim_in())
    throw DimensionError("apply_isometry: label '" + on + "' has dim " +
                         std::to_string(s.mid) + ", isometry expects " +
                         std::to_string(iso.dim_in()));
  SystemLayout layout = replaced_layout(
      rho.layout(), on, {{out_label, iso.dim_out()}, {env_label, iso.dim_env()}});
  Matrix m = conjugate_middle(rho.matrix(), iso.v(), s.left, s.right);
  return DensityOperator::unchecked(std::move(layout), std::move(m));
}

DensityOperator apply_kraus(const DensityOperator& rho, const KrausChannel& ch,
                            const Label& on, std::optional<Label> out_label) {
  const auto s = split_around(rho.layout(), on);
  if (s.mid != ch.dim_in())
    throw DimensionError("apply_kraus: label '" + on + "' has dim " +
                         std::to_string(s.mid) + ", channel expects " +
                         std::to_string(ch.dim_in()));
  SystemLayout layout = replaced_layout(
      rho.layout(), on, {{out_label.value_or(on), ch.dim_out()}});
  const long long d = s.left * ch.dim_out() * s.right;
  Matrix m = Matrix::Zero(d, d);
  for (const auto& k : ch.kraus()) m += conjugate_middle(rho.matrix(), k, s.left, s.right);
  return DensityOperator::unchecked(std::move(layout), std::move(m));
}

// --- presets ---------------------------------------------------------------

KrausChannel identity_channel(int dim) {
  return KrausChannel(dim, dim, {Matrix::Identity(dim, dim)});
}

KrausChannel replace_channel(int dim_in, const DensityOperator& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sigma.matrix());
  const long long ds = sigma.layout().total_dim();
  std::vector<Matrix> kraus;
  for (long long j = 0; j < ds; ++j) {
    const double lambda = solver.eigenvalues()[j];
    if (lambda <= tol::rank) continue;
    for (int k = 0; k < dim_in; ++k) {
      Matrix op = Matrix::Zero(ds, dim_in);
      op.col(k) = std::sqrt(lambda) * solver.eigenvectors().col(j);
      kraus.push_back(std::move(op));
    }
  }
  return KrausChannel(dim_in, static_cast<int>(ds), std::move(kraus));
}

KrausChannel discard_channel(int dim_in) {
  std::vector<Matrix> kraus;
  for (int k = 0; k < dim_in; ++k) {
    Matrix op = Matrix::Zero(1, dim_in);
    op(0, k) = 1.0;
    kraus.push_back(std::move(op));
  }
  return KrausChannel(dim_in, 1, std::move(kraus));
}

namespace {

Matrix clock_matrix(int d) {
  Matrix z = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double a = 2.0 * M_PI * k / d;
    z(k, k) = Complex(std::cos(a), std::sin(a));
  }
  return z;
}

Matrix shift_matrix(int d) {
  Matrix x = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

}  // namespace

KrausChannel dephasing_channel(double p, int dim) {
  if (p < 0.0 || p > 1.0) throw ValidationError("dephasing: p must be in [0, 1]");
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(dim, dim));
  kraus.push_back(std::sqrt(p) * clock_matrix(dim));
  return KrausChannel(dim, dim, std::move(kraus));
}

KrausChannel depolarizing_channel(double p, int dim) {
  if (p < 0.0 || p > 1.0) throw ValidationError("depolarizing: p must be in [0, 1]");
  const double d2 = static_cast<double>(dim) * dim;
  const Matrix x = shift_matrix(dim), z = clock_matrix(dim);
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p + p / d2) * Matrix::Identity(dim, dim));
  Matrix xa = Matrix::Identity(dim, dim);
  for (int a = 0; a < dim; ++a) {
    Matrix w = xa;
    for (int b = 0; b < dim; ++b) {
      if (a != 0 || b != 0) kraus.push_back(std::sqrt(p / d2) * w);
      w = w * z;
    }
    xa = x * xa;
  }
  return KrausChannel(dim, dim, std::move(kraus));
}

KrausChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw ValidationError("amplitude_damping: gamma must be in [0, 1]");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel(2, 2, {std::move(k0), std::move(k1)});
}

KrausChannel preset_channel(const std::string& spec, int dim_in) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need_arg = [&]() {
    if (arg.empty())
      throw ValidationError("preset '" + name + "' needs a numeric argument");
    try {
      return std::stod(arg);
    } catch (const std::exception&) {
      throw ValidationError("preset '" + name + "': bad argument '" + arg + "'");
    }
  };
  if (name == "identity") return identity_channel(dim_in);
  if (name == "discard") return discard_channel(dim_in);
  if (name == "dephasing") return dephasing_channel(need_arg(), dim_in);
  if (name == "depolarizing") return depolarizing_channel(need_arg(), dim_in);
  if (name == "amplitude_damping") {
    if (dim_in != 2)
      throw DimensionError("amplitude_damping preset is qubit-only");
    return amplitude_damping_channel(need_arg());
  }
  throw ValidationError("unknown channel preset '" + name + "'");
}

std::vector<std::string> preset_channel_names() {
  return {"identity", "discard", "dephasing:P", "depolarizing:P", "amplitude_damping:G"};
}

}  // namespace qhelper
