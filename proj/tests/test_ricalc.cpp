#include <doctest.h>

#include "qhelper/errors.hpp"
#include "qhelper/ri.hpp"
#include "qhelper/tolerances.hpp"
#include "support.hpp"

using namespace qhelper;
using namespace qhelper::ri;

namespace {

// The five statements printed in the source material, ASCII-encoded.
const std::vector<std::string> paper_corpus = {
    "H(B) [q->q] >= <rho_B>",
    "<N> + inf [qq] >= Q(N) [q->q]",
    "<psi_{A|B|R}> + I(A;R) [c->c] + H(A|B) [qq] >= <psi_{|AB|R}>",
    "<psi_{A|B|R}> + 0.5 I(A;R) [q->q] >= 0.5 I(A;B) [qq] + <psi_{|AB|R}>",
    "0.5 I(R;B) [q->q] + 0.5 I(E;B) [qq] >= <N:rho_A>",
};

std::vector<PureState> sample_states(int count, std::uint64_t seed) {
  std::vector<PureState> out;
  const SystemLayout layout({"A", "B", "R"}, {2, 2, 2});
  for (int i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed, i));
    out.push_back(random_pure(layout, rng));
  }
  return out;
}

}  // namespace

TEST_CASE("rational arithmetic and printing") {
  CHECK(Rational::of(5, 10) == Rational::of(1, 2));
  CHECK(Rational::of(1, 2).str() == "0.5");
  CHECK(Rational::of(1, 4).str() == "0.25");
  CHECK(Rational::of(-3, 2).str() == "-1.5");
  CHECK(Rational::of(1, 3).str() == "1/3");
  CHECK(Rational::of(7).str() == "7");
  CHECK((Rational::of(1, 2) * Rational::of(2)).str() == "1");
  CHECK_THROWS_AS(Rational::of(1, 0), ValidationError);
}

TEST_CASE("parse shapes") {
  SUBCASE("schumacher") {
    const RIStatement s = parse(paper_corpus[0]);
    REQUIRE(s.lhs.size() == 1);
    REQUIRE(s.rhs.size() == 1);
    CHECK(s.lhs[0].resource.kind == ResourceKind::QubitChannel);
    CHECK(s.rhs[0].resource.kind == ResourceKind::State);
    CHECK(s.rhs[0].resource.name == "rho_B");
    CHECK(s.rhs[0].coeff.is_one());
  }
  SUBCASE("ea capacity keeps symbolic coefficients") {
    const RIStatement s = parse(paper_corpus[1]);
    REQUIRE(s.lhs.size() == 2);
    CHECK(s.lhs[0].resource.kind == ResourceKind::Noisy);
    CHECK(!s.lhs[1].coeff.is_constant());  // inf
    CHECK(!s.rhs[0].coeff.is_constant());  // Q(N)
  }
  SUBCASE("qrst carries a relative resource") {
    const RIStatement s = parse(paper_corpus[4]);
    CHECK(s.rhs[0].resource.kind == ResourceKind::Relative);
    CHECK(s.rhs[0].resource.name == "N");
    CHECK(s.rhs[0].resource.state == "rho_A");
  }
  SUBCASE("label groups split and sort") {
    const RIStatement s = parse("0.5 I(RA;C) [q->q] >= 0.5 I(A,R;C) [qq]");
    CHECK(s.lhs[0].coeff == s.rhs[0].coeff);
  }
  SUBCASE("coefficients merge per resource") {
    const RIStatement s = parse("[qq] + [qq] >= 0");
    REQUIRE(s.lhs.size() == 1);
    CHECK(s.lhs[0].coeff == EntropicExpr::constant(Rational::of(2)));
    CHECK(s.rhs.empty());
  }
}

TEST_CASE("round trip on the paper corpus and builtins") {
  std::vector<std::string> texts = paper_corpus;
  for (const auto& name : builtin_names()) texts.push_back(print(builtin(name)));
  for (const auto& t : texts) {
    CAPTURE(t);
    const RIStatement once = parse(t);
    const RIStatement twice = parse(print(once));
    CHECK(structurally_equal(once, twice));
    CHECK(print(once) == print(twice));
  }
}

TEST_CASE("positioned parse errors") {
  SUBCASE("empty input") {
    try {
      parse("");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 0);
      CHECK(std::string(e.what()).find("offset 0") != std::string::npos);
    }
  }
  SUBCASE("offsets point at the defect") {
    try {
      parse("H(B) [q->q] >= <rho_B> junk");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 23);
    }
    CHECK_THROWS_AS(parse("H(B [q->q] >= <rho_B>"), ParseError);
    CHECK_THROWS_AS(parse("[zz] >= [qq]"), ParseError);
    CHECK_THROWS_AS(parse("H(B) [q->q] >= "), ParseError);
    CHECK_THROWS_AS(parse("H(B) [q->q]"), ParseError);
    CHECK_THROWS_AS(parse("(H(A) [qq] >= 0"), ParseError);
    CHECK_THROWS_AS(parse("2 & [qq] >= 0"), ParseError);
    CHECK_THROWS_AS(parse("H(a) [qq] >= 0"), ParseError);
  }
}

TEST_CASE("evaluation") {
  // Bell pair on A, B with a trivial reference.
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  const PureState bell(SystemLayout({"A", "B", "R"}, {2, 2, 1}), v);

  SUBCASE("state merging on a Bell pair") {
    const EvalReport rep = evaluate(builtin("merging"), bell);
    CHECK(rep.lhs.by_resource.at("[c->c]") == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.lhs.by_resource.at("[qq]") == doctest::Approx(-1.0).epsilon(1e-9));
  }
  SUBCASE("fqsw on a Bell pair") {
    const EvalReport rep = evaluate(builtin("fqsw"), bell);
    CHECK(rep.lhs.by_resource.at("[q->q]") == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.rhs.by_resource.at("[qq]") == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("ea capacity is parseable but not evaluable") {
    CHECK_THROWS_AS(evaluate(builtin("ea_capacity"), bell), EvalError);
  }
  SUBCASE("unresolvable labels") {
    CHECK_THROWS_AS(evaluate(parse("H(Z) [qq] >= 0"), bell), EvalError);
  }
  SUBCASE("bindings rename label groups") {
    Binding b;
    b.map["A"] = {"B"};
    b.map["B"] = {"A"};
    const EvalReport rep = evaluate(parse("H(A|B) [qq] >= 0"), bell, b);
    CHECK(rep.lhs.by_resource.at("[qq]") == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("chain and cancel") {
  SUBCASE("teleportation then superdense coding is catalytic") {
    const RIStatement chained = chain(builtin("teleportation"),
                                      builtin("superdense_coding"));
    const RIStatement reduced = cancel(chained);
    // Net identity on the channels, 2 [qq] consumed as catalyst.
    REQUIRE(reduced.lhs.size() == 1);
    CHECK(reduced.lhs[0].resource.kind == ResourceKind::Ebit);
    CHECK(reduced.lhs[0].coeff == EntropicExpr::constant(Rational::of(2)));
    CHECK(reduced.rhs.empty());
  }
  SUBCASE("no matching resources") {
    CHECK_THROWS_AS(chain(builtin("entanglement_distribution"), builtin("schumacher")),
                    EvalError);
  }
  SUBCASE("fqsw + teleportation reproduces merging numerically") {
    const RIStatement derived = chain(builtin("teleportation"), builtin("fqsw"));
    // teleportation is scaled by the qubit demand 0.5 I(A;R)
    const auto states = sample_states(20, 900);
    for (const auto& psi : states) {
      const auto d = evaluate(derived, psi);
      const auto t = evaluate(builtin("merging"), psi);
      for (const auto& [k, dv] : d.net) {
        const double tv = t.net.count(k) ? t.net.at(k) : 0.0;
        CHECK(std::abs(dv - tv) <= tol::ent);
      }
    }
  }
}

TEST_CASE("chaining is associative at the evaluated level") {
  const RIStatement a = parse("2 [c->c] + [qq] >= [q->q]");
  const RIStatement b = parse("0.5 I(A;R) [q->q] >= <w1>");
  const RIStatement c = parse("<w1> + H(B) [qq] >= <w2>");

  const RIStatement left = chain(a, chain(b, c));
  const RIStatement right = chain(chain(a, b), c);
  for (const auto& psi : sample_states(10, 1000)) {
    const auto l = evaluate(left, psi);
    const auto r = evaluate(right, psi);
    std::map<std::string, double> keys = l.net;
    keys.insert(r.net.begin(), r.net.end());
    for (const auto& [k, unused] : keys) {
      const double lv = l.net.count(k) ? l.net.at(k) : 0.0;
      const double rv = r.net.count(k) ? r.net.at(k) : 0.0;
      CHECK(std::abs(lv - rv) <= tol::ent);
    }
  }
}

TEST_CASE("certify") {
  const auto states = sample_states(50, 1100);
  const std::vector<RIStatement> steps = {builtin("teleportation"), builtin("fqsw")};

  SUBCASE("canonical derivation passes") {
    const CertifyReport rep = certify(builtin("merging"), steps, states);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-8);
    CHECK(rep.samples == 50);
  }
  SUBCASE("corrupted coefficient fails loudly") {
    const RIStatement bad_fqsw = parse(
        "<psi_{A|B|R}> + 0.4 I(A;R) [q->q] >= 0.5 I(A;B) [qq] + <psi_{|AB|R}>");
    const CertifyReport rep =
        certify(builtin("merging"), {builtin("teleportation"), bad_fqsw}, states);
    CHECK(!rep.pass);
    CHECK(rep.max_residual > 1e-2);
  }
  SUBCASE("target identical to the single step passes trivially") {
    const CertifyReport rep = certify(builtin("fqsw"), {builtin("fqsw")}, states);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-12);
  }
  SUBCASE("classical communication is free by default, not when disabled") {
    const RIStatement lossy_tp = parse("3 [c->c] + [qq] >= [q->q]");
    const CertifyReport ok = certify(builtin("merging"), {lossy_tp, builtin("fqsw")},
                                     states);
    CHECK(ok.pass);
    CertifyOptions strict;
    strict.classical_free = false;
    const CertifyReport bad = certify(builtin("merging"), {lossy_tp, builtin("fqsw")},
                                      states, {}, strict);
    CHECK(!bad.pass);
  }
}

TEST_CASE("expression parser for entropy tables") {
  const EntropicExpr e = parse_expression("0.5 I(A;B) - H(A|B)");
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  const PureState bell(SystemLayout({"A", "B"}, {2, 2}), v);
  CHECK(e.evaluate(bell, {}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_THROWS_AS(parse_expression("H(A) extra junk"), ParseError);
}
