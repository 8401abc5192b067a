#include "qhelper/ri.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "qhelper/errors.hpp"

namespace qhelper::ri {

// --- Rational ---------------------------------------------------------------

Rational Rational::of(long long num, long long den) {
  if (den == 0) throw ValidationError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Rational Rational::operator+(const Rational& o) const {
  return of(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return of(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return of(num * o.num, den * o.den);
}
Rational Rational::reciprocal() const {
  if (num == 0) throw ValidationError("rational: reciprocal of zero");
  return of(den, num);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  // Exact decimal when the denominator divides a power of ten.
  long long d = den, pow10 = 1;
  int digits = 0;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  if (d == 1) {
    long long scaled = num;
    long long rem = den;
    while (rem != 1 && digits < 18) {
      scaled *= 10;
      pow10 *= 10;
      ++digits;
      const long long g = std::gcd(pow10, den);
      rem = den / g;
    }
    if (rem == 1) {
      const long long q = scaled / den;
      std::string s = std::to_string(q < 0 ? -q : q);
      while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
      s.insert(s.end() - digits, '.');
      return (q < 0 ? "-" : "") + s;
    }
  }
  return std::to_string(num) + "/" + std::to_string(den);
}

// --- EntropicAtom -----------------------------------------------------------

namespace {

std::vector<std::string> sorted_group(std::vector<std::string> g) {
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::string group_text(const std::vector<std::string>& g) {
  std::string out;
  for (const auto& l : g) out += l;
  return out;
}

}  // namespace

EntropicAtom EntropicAtom::h(std::vector<std::string> x) {
  return {EntropyQuantity::H, sorted_group(std::move(x)), {}, {}};
}
EntropicAtom EntropicAtom::h_cond(std::vector<std::string> x,
                                  std::vector<std::string> y) {
  return {EntropyQuantity::H_cond, sorted_group(std::move(x)), sorted_group(std::move(y)),
          {}};
}
EntropicAtom EntropicAtom::i(std::vector<std::string> x, std::vector<std::string> y) {
  auto xs = sorted_group(std::move(x)), ys = sorted_group(std::move(y));
  if (group_text(ys) < group_text(xs)) std::swap(xs, ys);
  return {EntropyQuantity::I, std::move(xs), std::move(ys), {}};
}
EntropicAtom EntropicAtom::i_cond(std::vector<std::string> x, std::vector<std::string> y,
                                  std::vector<std::string> z) {
  auto xs = sorted_group(std::move(x)), ys = sorted_group(std::move(y));
  if (group_text(ys) < group_text(xs)) std::swap(xs, ys);
  return {EntropyQuantity::I_cond, std::move(xs), std::move(ys),
          sorted_group(std::move(z))};
}

std::string EntropicAtom::key() const {
  switch (kind) {
    case EntropyQuantity::H: return "H(" + group_text(x) + ")";
    case EntropyQuantity::H_cond: return "H(" + group_text(x) + "|" + group_text(y) + ")";
    case EntropyQuantity::I: return "I(" + group_text(x) + ";" + group_text(y) + ")";
    case EntropyQuantity::I_cond:
      return "I(" + group_text(x) + ";" + group_text(y) + "|" + group_text(z) + ")";
  }
  return "?";
}

// --- Binding ----------------------------------------------------------------

LabelList Binding::resolve(const std::vector<std::string>& group,
                           const SystemLayout& layout) const {
  LabelList out;
  for (const auto& l : group) {
    const auto it = map.find(l);
    const LabelList mapped = it != map.end() ? it->second : LabelList{l};
    for (const auto& m : mapped) {
      if (!layout.has(m))
        throw EvalError("label '" + m + "' (for RI label '" + l +
                        "') not in state layout " + layout.to_string());
      out = set_union(out, {m});
    }
  }
  return out;
}

// --- EntropicExpr -----------------------------------------------------------

EntropicExpr EntropicExpr::constant(Rational c) {
  EntropicExpr e;
  e.const_ = c;
  return e;
}

EntropicExpr EntropicExpr::atom(const EntropicAtom& a, Rational scale) {
  EntropicExpr e;
  if (!scale.is_zero()) e.atoms_[a.key()] = {scale, a};
  return e;
}

EntropicExpr EntropicExpr::symbol(const std::string& key, Rational scale) {
  EntropicExpr e;
  if (!scale.is_zero()) e.symbols_[key] = scale;
  return e;
}

EntropicExpr EntropicExpr::operator+(const EntropicExpr& o) const {
  EntropicExpr e = *this;
  e.const_ = e.const_ + o.const_;
  for (const auto& [k, term] : o.atoms_) {
    auto it = e.atoms_.find(k);
    if (it == e.atoms_.end()) {
      e.atoms_[k] = term;
    } else {
      it->second.first = it->second.first + term.first;
      if (it->second.first.is_zero()) e.atoms_.erase(it);
    }
  }
  for (const auto& [k, r] : o.symbols_) {
    auto it = e.symbols_.find(k);
    if (it == e.symbols_.end()) {
      e.symbols_[k] = r;
    } else {
      it->second = it->second + r;
      if (it->second.is_zero()) e.symbols_.erase(it);
    }
  }
  return e;
}

EntropicExpr EntropicExpr::operator-(const EntropicExpr& o) const {
  return *this + o.scaled(Rational::of(-1));
}

EntropicExpr EntropicExpr::scaled(const Rational& r) const {
  if (r.is_zero()) return {};
  EntropicExpr e = *this;
  e.const_ = e.const_ * r;
  for (auto& [k, term] : e.atoms_) term.first = term.first * r;
  for (auto& [k, s] : e.symbols_) s = s * r;
  return e;
}

EntropicExpr EntropicExpr::product(const EntropicExpr& a, const EntropicExpr& b) {
  if (a.is_constant()) return b.scaled(a.const_);
  if (b.is_constant()) return a.scaled(b.const_);
  throw EvalError("coefficient product of two non-constant expressions: (" + a.str() +
                  ") * (" + b.str() + ")");
}

bool EntropicExpr::operator==(const EntropicExpr& o) const {
  if (!(const_ == o.const_)) return false;
  if (atoms_.size() != o.atoms_.size() || symbols_ != o.symbols_) return false;
  for (const auto& [k, term] : atoms_) {
    const auto it = o.atoms_.find(k);
    if (it == o.atoms_.end() || !(it->second.first == term.first)) return false;
  }
  return true;
}

bool EntropicExpr::is_constant() const { return atoms_.empty() && symbols_.empty(); }
bool EntropicExpr::is_zero() const { return is_constant() && const_.is_zero(); }
bool EntropicExpr::is_one() const {
  return is_constant() && const_ == Rational::of(1);
}

template <typename State>
double EntropicExpr::evaluate_impl(const State& state, const Binding& binding) const {
  if (!symbols_.empty())
    throw EvalError("unresolvable symbolic coefficient '" + symbols_.begin()->first +
                    "'");
  double v = const_.value();
  for (const auto& [k, term] : atoms_) {
    const auto& [scale, a] = term;
    const SystemLayout& layout = state.layout();
    double av = 0.0;
    switch (a.kind) {
      case EntropyQuantity::H: av = entropy(state, binding.resolve(a.x, layout)); break;
      case EntropyQuantity::H_cond:
        av = cond_entropy(state, binding.resolve(a.x, layout),
                          binding.resolve(a.y, layout));
        break;
      case EntropyQuantity::I:
        av = mutual_info(state, binding.resolve(a.x, layout),
                         binding.resolve(a.y, layout));
        break;
      case EntropyQuantity::I_cond:
        av = cond_mutual_info(state, binding.resolve(a.x, layout),
                              binding.resolve(a.y, layout),
                              binding.resolve(a.z, layout));
        break;
    }
    v += scale.value() * av;
  }
  return v;
}

double EntropicExpr::evaluate(const DensityOperator& state, const Binding& b) const {
  return evaluate_impl(state, b);
}
double EntropicExpr::evaluate(const PureState& state, const Binding& b) const {
  return evaluate_impl(state, b);
}

bool EntropicExpr::needs_parens() const {
  const int pieces = (const_.is_zero() ? 0 : 1) + static_cast<int>(atoms_.size()) +
                     static_cast<int>(symbols_.size());
  return pieces > 1;
}

std::string EntropicExpr::str() const {
  std::vector<std::pair<Rational, std::string>> pieces;
  if (!const_.is_zero() || (atoms_.empty() && symbols_.empty()))
    pieces.emplace_back(const_, "");
  for (const auto& [k, term] : atoms_) pieces.emplace_back(term.first, k);
  for (const auto& [k, r] : symbols_) pieces.emplace_back(r, k);

  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& [r, text] = pieces[i];
    const bool neg = r.num < 0;
    const Rational mag = neg ? r * Rational::of(-1) : r;
    if (i == 0) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (text.empty()) {
      out += mag.str();
    } else if (mag == Rational::of(1)) {
      out += text;
    } else {
      out += mag.str() + " " + text;
    }
  }
  return out;
}

// --- Resource ----------------------------------------------------------------

std::string Resource::key() const {
  switch (kind) {
    case ResourceKind::Ebit: return "[qq]";
    case ResourceKind::QubitChannel: return "[q->q]";
    case ResourceKind::CbitChannel: return "[c->c]";
    case ResourceKind::Relative: return "<" + name + ":" + state + ">";
    case ResourceKind::Noisy:
    case ResourceKind::State: return "<" + name + ">";
  }
  return "?";
}

Resource Resource::from_angle_name(const std::string& contents) {
  Resource r;
  const auto colon = contents.find(':');
  if (colon != std::string::npos) {
    r.kind = ResourceKind::Relative;
    r.name = contents.substr(0, colon);
    r.state = contents.substr(colon + 1);
    if (r.name.empty() || r.state.empty())
      throw ValidationError("relative resource needs both names: <" + contents + ">");
    return r;
  }
  r.name = contents;
  static const char* state_prefixes[] = {"psi", "rho", "phi", "Phi", "Psi",
                                         "omega", "sigma", "tau"};
  r.kind = ResourceKind::Noisy;
  for (const char* p : state_prefixes)
    if (contents.rfind(p, 0) == 0) {
      r.kind = ResourceKind::State;
      break;
    }
  return r;
}

// --- Lexer --------------------------------------------------------------------

namespace {

enum class Tok {
  End, Number, Inf, Ident, LParen, RParen, Plus, Minus, Star, Geq, Bar, Semi,
  Comma, Bracket, Angle
};

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string text;   // ident / bracket / angle contents
  Rational number{0, 1};
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    cur_ = Token{};
    cur_.offset = pos_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    if (c == '>' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      cur_.kind = Tok::Geq;
      pos_ += 2;
      return;
    }
    switch (c) {
      case '(': cur_.kind = Tok::LParen; ++pos_; return;
      case ')': cur_.kind = Tok::RParen; ++pos_; return;
      case '+': cur_.kind = Tok::Plus; ++pos_; return;
      case '-': cur_.kind = Tok::Minus; ++pos_; return;
      case '*': cur_.kind = Tok::Star; ++pos_; return;
      case '|': cur_.kind = Tok::Bar; ++pos_; return;
      case ';': cur_.kind = Tok::Semi; ++pos_; return;
      case ',': cur_.kind = Tok::Comma; ++pos_; return;
      default: break;
    }
    if (c == '[') {
      const auto close = src_.find(']', pos_);
      if (close == std::string_view::npos)
        throw ParseError("unbalanced '['", pos_);
      const std::string inside(src_.substr(pos_ + 1, close - pos_ - 1));
      if (inside != "qq" && inside != "q->q" && inside != "c->c")
        throw ParseError("unknown resource token '[" + inside + "]'", pos_);
      cur_.kind = Tok::Bracket;
      cur_.text = inside;
      pos_ = close + 1;
      return;
    }
    if (c == '<') {
      const auto close = src_.find('>', pos_);
      if (close == std::string_view::npos)
        throw ParseError("unbalanced '<'", pos_);
      const std::string inside(src_.substr(pos_ + 1, close - pos_ - 1));
      if (inside.empty()) throw ParseError("empty resource name '<>'", pos_);
      for (const char ch : inside)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '{' &&
            ch != '}' && ch != '|' && ch != ':' && ch != ',')
          throw ParseError(std::string("bad character '") + ch + "' in resource name",
                           pos_);
      cur_.kind = Tok::Angle;
      cur_.text = inside;
      pos_ = close + 1;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      cur_.kind = Tok::Number;
      cur_.number = lex_number();
      return;
    }
    // UTF-8 infinity sign
    if (static_cast<unsigned char>(c) == 0xE2 && pos_ + 2 < src_.size() &&
        static_cast<unsigned char>(src_[pos_ + 1]) == 0x88 &&
        static_cast<unsigned char>(src_[pos_ + 2]) == 0x9E) {
      cur_.kind = Tok::Inf;
      pos_ += 3;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      cur_.text = std::string(src_.substr(pos_, end - pos_));
      cur_.kind = cur_.text == "inf" ? Tok::Inf : Tok::Ident;
      pos_ = end;
      return;
    }
    throw ParseError(std::string("unknown token '") + c + "'", pos_);
  }

  Rational lex_number() {
    const std::size_t start = pos_;
    long long int_part = 0, frac_num = 0, frac_den = 1;
    bool any = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      if (int_part > 999999999ll)
        throw ParseError("number too large", start);
      int_part = int_part * 10 + (src_[pos_] - '0');
      ++pos_;
      any = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      bool frac_any = false;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        if (frac_den > 999999999ll)
          throw ParseError("number has too many digits", start);
        frac_num = frac_num * 10 + (src_[pos_] - '0');
        frac_den *= 10;
        ++pos_;
        frac_any = true;
      }
      if (!any && !frac_any) throw ParseError("malformed number", start);
    } else if (!any) {
      throw ParseError("malformed number", start);
    }
    Rational r = Rational::of(int_part) + Rational::of(frac_num, frac_den);
    // Fraction literal p/q (no spaces).
    if (pos_ < src_.size() && src_[pos_] == '/' && pos_ + 1 < src_.size() &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      long long den = 0;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        if (den > 999999999ll) throw ParseError("number too large", start);
        den = den * 10 + (src_[pos_] - '0');
        ++pos_;
      }
      if (den == 0) throw ParseError("zero denominator", start);
      r = r * Rational::of(1, den);
    }
    return r;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token cur_;
};

// --- Parser --------------------------------------------------------------------

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) {}

  RIStatement parse_statement() {
    RIStatement s;
    s.lhs = parse_side();
    if (lex_.peek().kind != Tok::Geq)
      throw ParseError("expected '>='", lex_.peek().offset);
    lex_.take();
    s.rhs = parse_side();
    if (lex_.peek().kind != Tok::End)
      throw ParseError("trailing input", lex_.peek().offset);
    return s;
  }

  EntropicExpr parse_expression_only() {
    EntropicExpr e = parse_expr();
    if (lex_.peek().kind != Tok::End)
      throw ParseError("trailing input", lex_.peek().offset);
    return e;
  }

private:
  static bool starts_factor(Tok k) {
    return k == Tok::Number || k == Tok::Inf || k == Tok::Ident || k == Tok::LParen;
  }
  static bool starts_resource(Tok k) { return k == Tok::Bracket || k == Tok::Angle; }

  std::vector<Term> parse_side() {
    // An explicit "0" denotes the empty resource bundle.
    if (lex_.peek().kind == Tok::Number && lex_.peek().number.is_zero()) {
      Lexer save = lex_;
      lex_.take();
      if (lex_.peek().kind == Tok::Geq || lex_.peek().kind == Tok::End) return {};
      lex_ = save;
    }
    std::vector<Term> terms;
    terms.push_back(parse_term());
    while (lex_.peek().kind == Tok::Plus) {
      lex_.take();
      terms.push_back(parse_term());
    }
    return terms;
  }

  Term parse_term() {
    bool negate = false;
    while (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      negate = !negate;
    }
    const Token& t = lex_.peek();
    if (!starts_factor(t.kind) && !starts_resource(t.kind))
      throw ParseError("expected term", t.offset);
    EntropicExpr coeff = EntropicExpr::one();
    bool any = false;
    while (starts_factor(lex_.peek().kind)) {
      const std::size_t off = lex_.peek().offset;
      EntropicExpr f = parse_factor();
      coeff = any ? checked_product(coeff, f, off) : f;
      any = true;
      if (lex_.peek().kind == Tok::Star) lex_.take();
    }
    if (!starts_resource(lex_.peek().kind))
      throw ParseError("expected resource", lex_.peek().offset);
    const Token r = lex_.take();
    Term term;
    term.coeff = negate ? coeff.scaled(Rational::of(-1)) : coeff;
    if (r.kind == Tok::Bracket) {
      term.resource.kind = r.text == "qq"     ? ResourceKind::Ebit
                           : r.text == "q->q" ? ResourceKind::QubitChannel
                                              : ResourceKind::CbitChannel;
    } else {
      term.resource = Resource::from_angle_name(r.text);
    }
    return term;
  }

  EntropicExpr parse_factor() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::Number: return EntropicExpr::constant(t.number);
      case Tok::Inf: return EntropicExpr::symbol("inf");
      case Tok::LParen: {
        EntropicExpr e = parse_expr();
        if (lex_.peek().kind != Tok::RParen)
          throw ParseError("expected ')'", lex_.peek().offset);
        lex_.take();
        return e;
      }
      case Tok::Ident: return parse_named(t);
      default: throw ParseError("expected coefficient", t.offset);
    }
  }

  EntropicExpr parse_expr() {
    bool neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      neg = true;
    }
    EntropicExpr e = parse_product();
    if (neg) e = e.scaled(Rational::of(-1));
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      const bool minus = lex_.take().kind == Tok::Minus;
      EntropicExpr rhs = parse_product();
      e = minus ? e - rhs : e + rhs;
    }
    return e;
  }

  EntropicExpr parse_product() {
    EntropicExpr e = parse_factor();
    while (true) {
      if (lex_.peek().kind == Tok::Star) {
        lex_.take();
        const std::size_t off = lex_.peek().offset;
        e = checked_product(e, parse_factor(), off);
      } else if (starts_factor(lex_.peek().kind)) {
        const std::size_t off = lex_.peek().offset;
        e = checked_product(e, parse_factor(), off);
      } else {
        return e;
      }
    }
  }

  static EntropicExpr checked_product(const EntropicExpr& a, const EntropicExpr& b,
                                      std::size_t offset) {
    if (!a.is_constant() && !b.is_constant())
      throw ParseError("cannot multiply two non-constant coefficients", offset);
    return EntropicExpr::product(a, b);
  }

  EntropicExpr parse_named(const Token& ident) {
    if (lex_.peek().kind != Tok::LParen)
      throw ParseError("unknown token '" + ident.text + "'", ident.offset);
    lex_.take();
    if (ident.text == "H") {
      auto x = parse_label_group();
      if (lex_.peek().kind == Tok::Bar) {
        lex_.take();
        auto y = parse_label_group();
        expect_rparen();
        return EntropicExpr::atom(EntropicAtom::h_cond(std::move(x), std::move(y)));
      }
      expect_rparen();
      return EntropicExpr::atom(EntropicAtom::h(std::move(x)));
    }
    if (ident.text == "I") {
      auto x = parse_label_group();
      if (lex_.peek().kind != Tok::Semi)
        throw ParseError("expected ';' in I(...)", lex_.peek().offset);
      lex_.take();
      auto y = parse_label_group();
      if (lex_.peek().kind == Tok::Bar) {
        lex_.take();
        auto z = parse_label_group();
        expect_rparen();
        return EntropicExpr::atom(
            EntropicAtom::i_cond(std::move(x), std::move(y), std::move(z)));
      }
      expect_rparen();
      return EntropicExpr::atom(EntropicAtom::i(std::move(x), std::move(y)));
    }
    // Symbolic coefficient such as Q(N); parseable, not evaluable.
    if (lex_.peek().kind != Tok::Ident)
      throw ParseError("expected identifier in " + ident.text + "(...)",
                       lex_.peek().offset);
    const Token arg = lex_.take();
    expect_rparen();
    return EntropicExpr::symbol(ident.text + "(" + arg.text + ")");
  }

  void expect_rparen() {
    if (lex_.peek().kind != Tok::RParen)
      throw ParseError("expected ')'", lex_.peek().offset);
    lex_.take();
  }

  std::vector<std::string> parse_label_group() {
    std::vector<std::string> labels;
    bool want_more = true;
    while (want_more) {
      if (lex_.peek().kind != Tok::Ident)
        throw ParseError("expected system labels", lex_.peek().offset);
      const Token t = lex_.take();
      split_labels(t, labels);
      want_more = false;
      if (lex_.peek().kind == Tok::Comma) {
        lex_.take();
        want_more = true;
      } else if (lex_.peek().kind == Tok::Ident) {
        want_more = true;
      }
    }
    return labels;
  }

  static void split_labels(const Token& t, std::vector<std::string>& out) {
    std::size_t i = 0;
    while (i < t.text.size()) {
      const char c = t.text[i];
      if (!std::isupper(static_cast<unsigned char>(c)))
        throw ParseError("bad system label in '" + t.text + "'", t.offset + i);
      std::string label(1, c);
      ++i;
      while (i < t.text.size() && std::isdigit(static_cast<unsigned char>(t.text[i]))) {
        label += t.text[i];
        ++i;
      }
      out.push_back(std::move(label));
    }
  }

  Lexer lex_;
};

// Side normalization: merge same-resource terms, drop zero coefficients,
// keep first-appearance order.
std::vector<Term> normalize_side(const std::vector<Term>& terms) {
  std::vector<Term> out;
  for (const auto& t : terms) {
    bool merged = false;
    for (auto& o : out) {
      if (o.resource == t.resource) {
        o.coeff = o.coeff + t.coeff;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(t);
  }
  std::erase_if(out, [](const Term& t) { return t.coeff.is_zero(); });
  return out;
}

RIStatement normalized(RIStatement s) {
  s.lhs = normalize_side(s.lhs);
  s.rhs = normalize_side(s.rhs);
  return s;
}

}  // namespace

RIStatement parse(std::string_view text) {
  Parser p(text);
  return normalized(p.parse_statement());
}

EntropicExpr parse_expression(std::string_view text) {
  Parser p(text);
  return p.parse_expression_only();
}

namespace {

std::string print_side(const std::vector<Term>& side) {
  if (side.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (i) out += " + ";
    const Term& t = side[i];
    if (t.coeff.is_one()) {
      out += t.resource.key();
    } else if (t.coeff.needs_parens()) {
      out += "(" + t.coeff.str() + ") " + t.resource.key();
    } else {
      out += t.coeff.str() + " " + t.resource.key();
    }
  }
  return out;
}

}  // namespace

std::string print(const RIStatement& s) {
  return print_side(s.lhs) + " >= " + print_side(s.rhs);
}

bool structurally_equal(const RIStatement& a, const RIStatement& b) {
  auto side_equal = [](const std::vector<Term>& x, const std::vector<Term>& y) {
    if (x.size() != y.size()) return false;
    for (const auto& tx : x) {
      bool found = false;
      for (const auto& ty : y) {
        if (tx.resource == ty.resource && tx.coeff == ty.coeff) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  return side_equal(a.lhs, b.lhs) && side_equal(a.rhs, b.rhs);
}

RIStatement builtin(const std::string& name) {
  static const std::map<std::string, std::string> table = {
      {"teleportation", "2 [c->c] + [qq] >= [q->q]"},
      {"superdense_coding", "[q->q] + [qq] >= 2 [c->c]"},
      {"entanglement_distribution", "[q->q] >= [qq]"},
      {"schumacher", "H(B) [q->q] >= <rho_B>"},
      {"ea_capacity", "<N> + inf [qq] >= Q(N) [q->q]"},
      {"merging", "<psi_{A|B|R}> + I(A;R) [c->c] + H(A|B) [qq] >= <psi_{|AB|R}>"},
      {"fqsw", "<psi_{A|B|R}> + 0.5 I(A;R) [q->q] >= 0.5 I(A;B) [qq] + <psi_{|AB|R}>"},
      {"qrst", "0.5 I(R;B) [q->q] + 0.5 I(E;B) [qq] >= <N:rho_A>"},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ValidationError("unknown builtin RI '" + name + "'");
  return parse(it->second);
}

std::vector<std::string> builtin_names() {
  return {"teleportation", "superdense_coding", "entanglement_distribution",
          "schumacher", "ea_capacity", "merging", "fqsw", "qrst"};
}

namespace {

template <typename State>
EvalReport evaluate_impl(const RIStatement& s, const State& state,
                         const Binding& binding) {
  EvalReport rep;
  for (const Term& t : s.lhs)
    rep.lhs.by_resource[t.resource.key()] += t.coeff.evaluate(state, binding);
  for (const Term& t : s.rhs)
    rep.rhs.by_resource[t.resource.key()] += t.coeff.evaluate(state, binding);
  for (const auto& [k, v] : rep.lhs.by_resource) rep.net[k] += v;
  for (const auto& [k, v] : rep.rhs.by_resource) rep.net[k] -= v;
  return rep;
}

}  // namespace

EvalReport evaluate(const RIStatement& s, const DensityOperator& state,
                    const Binding& binding) {
  return evaluate_impl(s, state, binding);
}
EvalReport evaluate(const RIStatement& s, const PureState& state,
                    const Binding& binding) {
  return evaluate_impl(s, state, binding);
}

namespace {

const EntropicExpr* find_coeff(const std::vector<Term>& side, const Resource& r) {
  for (const auto& t : side)
    if (t.resource == r) return &t.coeff;
  return nullptr;
}

std::vector<Term> scaled_side(const std::vector<Term>& side, const EntropicExpr& f) {
  std::vector<Term> out;
  out.reserve(side.size());
  for (const auto& t : side) out.push_back({EntropicExpr::product(f, t.coeff), t.resource});
  return out;
}

}  // namespace

RIStatement chain(const RIStatement& a_in, const RIStatement& b_in) {
  const RIStatement a = normalized(a_in), b = normalized(b_in);

  std::vector<Resource> matched;
  for (const auto& t : a.rhs)
    if (find_coeff(b.lhs, t.resource)) matched.push_back(t.resource);
  if (matched.empty()) throw EvalError("chain: no matching resources");

  // Scale a so its supply meets b's demand where that is well defined.
  EntropicExpr f = EntropicExpr::one();
  bool all_equal = true;
  for (const auto& r : matched)
    if (!(*find_coeff(a.rhs, r) == *find_coeff(b.lhs, r))) all_equal = false;
  if (!all_equal && matched.size() == 1) {
    const EntropicExpr& supply = *find_coeff(a.rhs, matched.front());
    const EntropicExpr& demand = *find_coeff(b.lhs, matched.front());
    if (supply.is_constant() && !supply.is_zero())
      f = demand.scaled(supply.constant_part().reciprocal());
  }

  RIStatement out;
  out.lhs = scaled_side(a.lhs, f);
  out.lhs.insert(out.lhs.end(), b.lhs.begin(), b.lhs.end());
  out.rhs = scaled_side(a.rhs, f);
  out.rhs.insert(out.rhs.end(), b.rhs.begin(), b.rhs.end());
  out = normalized(std::move(out));

  // Matched terms cancel symbolically when supply and demand now agree;
  // otherwise both stay and fold numerically at evaluation.
  for (const auto& r : matched) {
    const EntropicExpr* supply = find_coeff(out.rhs, r);
    const EntropicExpr* demand = find_coeff(out.lhs, r);
    if (supply && demand && *supply == *demand) {
      const EntropicExpr c = *supply;
      for (auto& t : out.lhs)
        if (t.resource == r) t.coeff = t.coeff - c;
      for (auto& t : out.rhs)
        if (t.resource == r) t.coeff = t.coeff - c;
    }
  }
  return normalized(std::move(out));
}

RIStatement cancel(const RIStatement& s_in) {
  RIStatement s = normalized(s_in);
  for (auto& tl : s.lhs) {
    const EntropicExpr* rc = find_coeff(s.rhs, tl.resource);
    if (rc && *rc == tl.coeff) {
      const EntropicExpr c = tl.coeff;
      tl.coeff = tl.coeff - c;
      for (auto& tr : s.rhs)
        if (tr.resource == tl.resource) tr.coeff = tr.coeff - c;
    }
  }
  return normalized(std::move(s));
}

CertifyReport certify(const RIStatement& target, const std::vector<RIStatement>& steps,
                      const std::vector<PureState>& states, const Binding& binding,
                      const CertifyOptions& opts) {
  if (steps.empty()) throw ValidationError("certify: empty derivation");
  RIStatement derived = normalized(steps.front());
  for (std::size_t i = 1; i < steps.size(); ++i) derived = chain(derived, steps[i]);

  CertifyReport rep;
  rep.derived = print(derived);
  rep.samples = static_cast<int>(states.size());

  for (const PureState& state : states) {
    const EvalReport d = evaluate(derived, state, binding);
    const EvalReport t = evaluate(target, state, binding);
    std::map<std::string, double> keys = d.net;
    for (const auto& [k, v] : t.net) keys.try_emplace(k, 0.0);
    for (const auto& [k, unused] : keys) {
      const double dv = d.net.count(k) ? d.net.at(k) : 0.0;
      const double tv = t.net.count(k) ? t.net.at(k) : 0.0;
      const double res = std::abs(dv - tv);
      auto it = rep.residuals.find(k);
      if (it == rep.residuals.end())
        rep.residuals[k] = res;
      else
        it->second = std::max(it->second, res);
    }
  }

  rep.pass = true;
  for (const auto& [k, res] : rep.residuals) {
    if (opts.classical_free && k == "[c->c]") continue;
    rep.max_residual = std::max(rep.max_residual, res);
    if (res > opts.tolerance) rep.pass = false;
  }
  return rep;
}

}  // namespace qhelper::ri
