#pragma once

#include <map>
#include <string_view>

#include "qhelper/entropy.hpp"

namespace qhelper::ri {

// Exact rational coefficient. Parsing accepts integers, decimals and
// "p/q" fractions; printing emits an exact decimal when one exists.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational of(long long num, long long den = 1);
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational reciprocal() const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool is_zero() const { return num == 0; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

// One entropic symbol: H(X), H(X|Y), I(X;Y) or I(X;Y|Z) over RI label
// groups. Groups are kept sorted, and the two arguments of I are ordered,
// so semantically equal atoms compare equal.
struct EntropicAtom {
  EntropyQuantity kind = EntropyQuantity::H;
  std::vector<std::string> x, y, z;

  static EntropicAtom h(std::vector<std::string> x);
  static EntropicAtom h_cond(std::vector<std::string> x, std::vector<std::string> y);
  static EntropicAtom i(std::vector<std::string> x, std::vector<std::string> y);
  static EntropicAtom i_cond(std::vector<std::string> x, std::vector<std::string> y,
                             std::vector<std::string> z);
  std::string key() const;
};

// Maps RI labels to layout labels; unmapped labels resolve to themselves.
struct Binding {
  std::map<std::string, LabelList> map;

  LabelList resolve(const std::vector<std::string>& group,
                    const SystemLayout& layout) const;
};

// Coefficient in canonical linear form: constant + rational multiples of
// entropic/symbolic atoms. All grammar operations (+, -, x rational)
// stay inside this form; products of two non-constant expressions are
// rejected. Symbolic atoms ("inf", "Q(N)") parse but do not evaluate.
class EntropicExpr {
public:
  EntropicExpr() = default;

  static EntropicExpr constant(Rational c);
  static EntropicExpr one() { return constant(Rational::of(1)); }
  static EntropicExpr atom(const EntropicAtom& a, Rational scale = Rational::of(1));
  static EntropicExpr symbol(const std::string& key, Rational scale = Rational::of(1));

  EntropicExpr operator+(const EntropicExpr& o) const;
  EntropicExpr operator-(const EntropicExpr& o) const;
  EntropicExpr scaled(const Rational& r) const;
  static EntropicExpr product(const EntropicExpr& a, const EntropicExpr& b);

  bool operator==(const EntropicExpr& o) const;
  bool is_constant() const;
  bool is_zero() const;
  bool is_one() const;
  const Rational& constant_part() const { return const_; }

  double evaluate(const DensityOperator& state, const Binding& binding) const;
  double evaluate(const PureState& state, const Binding& binding) const;

  std::string str() const;
  bool needs_parens() const;  // more than one additive piece

private:
  Rational const_{0, 1};
  std::map<std::string, std::pair<Rational, EntropicAtom>> atoms_;  // key -> term
  std::map<std::string, Rational> symbols_;                         // "inf", "Q(N)"

  template <typename State>
  double evaluate_impl(const State& state, const Binding& binding) const;
};

enum class ResourceKind { Ebit, QubitChannel, CbitChannel, Noisy, Relative, State };

// Resource token: [qq], [q->q], [c->c], <Name>, <Name:State> or <psi_...>.
struct Resource {
  ResourceKind kind = ResourceKind::Ebit;
  std::string name;   // channel/state identifier for <...> forms
  std::string state;  // relative form only

  std::string key() const;
  bool operator==(const Resource& o) const { return key() == o.key(); }
  static Resource from_angle_name(const std::string& contents);
};

struct Term {
  EntropicExpr coeff;
  Resource resource;
};

struct RIStatement {
  std::vector<Term> lhs, rhs;
};

/// Parses one statement `sum >= sum`; ParseError carries the byte offset.
RIStatement parse(std::string_view text);

/// Parses a bare entropic expression such as "H(A|B)" or "0.5 I(A;R) - H(B)".
EntropicExpr parse_expression(std::string_view text);

/// Canonical text; parse(print(s)) is structurally equal to s.
std::string print(const RIStatement& s);

bool structurally_equal(const RIStatement& a, const RIStatement& b);

/// Named statements the calculus ships with: teleportation,
/// superdense_coding, entanglement_distribution, schumacher, ea_capacity,
/// merging, fqsw, qrst.
RIStatement builtin(const std::string& name);
std::vector<std::string> builtin_names();

struct SideEval {
  std::map<std::string, double> by_resource;  // resource key -> coefficient
};

struct EvalReport {
  SideEval lhs, rhs;
  std::map<std::string, double> net;  // lhs - rhs per resource
};

EvalReport evaluate(const RIStatement& s, const DensityOperator& state,
                    const Binding& binding = {});
EvalReport evaluate(const RIStatement& s, const PureState& state,
                    const Binding& binding = {});

/// Feeds a's rhs into b's lhs. The matched resources must agree after
/// scaling a: when a supplies the resource with a constant coefficient,
/// a is scaled by demand/supply; matched terms with syntactically equal
/// coefficients cancel, anything else is carried to be folded numerically
/// at evaluation time. Throws EvalError when no resource matches.
RIStatement chain(const RIStatement& a, const RIStatement& b);

/// Removes identical (coefficient, resource) pairs across sides.
RIStatement cancel(const RIStatement& s);

struct CertifyOptions {
  bool classical_free = true;  // [c->c] reported but excluded from pass/fail
  double tolerance = 1e-8;
};

struct CertifyReport {
  bool pass = false;
  double max_residual = 0.0;                       // over checked resources/samples
  std::map<std::string, double> residuals;         // resource key -> max residual
  std::string derived;                             // printed chained statement
  int samples = 0;
};

/// Chains `steps` left to right, then compares the net resource balance
/// of the result against `target` on every sample state.
CertifyReport certify(const RIStatement& target, const std::vector<RIStatement>& steps,
                      const std::vector<PureState>& states, const Binding& binding = {},
                      const CertifyOptions& opts = {});

}  // namespace qhelper::ri
