#include <doctest.h>
#include <cmath>

#include "qhelper/errors.hpp"
#include "qhelper/json_io.hpp"
#include "qhelper/tolerances.hpp"
#include "support.hpp"

using namespace qhelper;

TEST_CASE("density operator json round trip") {
  const DensityOperator rho = test::random_state({2, 3}, 1);
  const io::AnyState back = io::state_from_json(io::state_to_json(rho));
  REQUIRE(std::holds_alternative<DensityOperator>(back));
  const auto& rho2 = std::get<DensityOperator>(back);
  CHECK(rho2.layout() == rho.layout());
  CHECK(test::max_abs_diff(rho2.matrix(), rho.matrix()) < 1e-15);
}

TEST_CASE("pure state json round trip") {
  Rng rng = test::make_rng(2);
  const PureState psi = random_pure(SystemLayout({"A", "B"}, {2, 2}), rng);
  const io::AnyState back = io::state_from_json(io::state_to_json(psi));
  REQUIRE(std::holds_alternative<PureState>(back));
  CHECK((std::get<PureState>(back).vector() - psi.vector()).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("state json rejects malformed input") {
  CHECK_THROWS_AS(io::state_from_json("{"), ValidationError);
  CHECK_THROWS_AS(io::state_from_json("{\"labels\":[\"A\"],\"dims\":[2]}"),
                  ValidationError);
  CHECK_THROWS_AS(
      io::state_from_json(
          "{\"labels\":[\"A\"],\"dims\":[2],\"vector\":[[1,0]]}"),
      ValidationError);  // wrong length
  CHECK_THROWS_AS(
      io::state_from_json(
          "{\"labels\":[\"A\",\"A\"],\"dims\":[2,2],\"matrix\":[]}"),
      LayoutError);
}

TEST_CASE("channel json round trips") {
  SUBCASE("kraus") {
    const std::string text = io::channel_to_json(dephasing_channel(0.25));
    const io::ChannelSpec spec = io::channel_from_json(text);
    const StinespringIsometry v = spec.resolve(2);
    CHECK(v.dim_env() == 2);
  }
  SUBCASE("stinespring") {
    const StinespringIsometry v = random_isometry(2, 2, 3, 5);
    const io::ChannelSpec spec = io::channel_from_json(io::channel_to_json(v));
    const StinespringIsometry v2 = spec.resolve(2);
    CHECK(test::max_abs_diff(v.v(), v2.v()) < 1e-15);
    CHECK_THROWS_AS(spec.resolve(3), DimensionError);
  }
  SUBCASE("params") {
    ChannelParams p = ChannelParams::zeros(2, 2, 2);
    p.theta[3] = 0.5;
    const io::ChannelSpec spec = io::channel_from_json(io::channel_to_json(p));
    const StinespringIsometry v = spec.resolve(2);
    CHECK(test::max_abs_diff(v.v(), params_to_isometry(p).v()) < 1e-15);
  }
  SUBCASE("preset") {
    const io::ChannelSpec spec =
        io::channel_from_json("{\"kind\":\"preset\",\"name\":\"depolarizing:0.25\"}");
    CHECK(spec.resolve(2).dim_env() == 4);
  }
  SUBCASE("replace preset carries sigma") {
    const std::string sigma = io::state_to_json(diagonal_state({0.75, 0.25}, "S"));
    const io::ChannelSpec spec = io::channel_from_json(
        "{\"kind\":\"preset\",\"name\":\"replace\",\"sigma\":" + sigma + "}");
    const StinespringIsometry v = spec.resolve(3);
    CHECK(v.dim_out() == 2);
    CHECK(std::isfinite(v.v()(0, 0).real()));
  }
  SUBCASE("unknown kind") {
    CHECK_THROWS_AS(io::channel_from_json("{\"kind\":\"magic\"}"), ValidationError);
  }
}

TEST_CASE("frontier csv format") {
  region::FrontierResult result;
  region::FrontierPoint fp;
  fp.lambda = 0.25;
  fp.point = rates::RatePoint(0.5, 0.125);
  fp.converged = true;
  fp.iters = 12;
  result.points.push_back(fp);
  result.hull = {0};
  const std::string csv = io::frontier_csv(result);
  CHECK(csv == "lambda,r1,r2,converged,iters\n0.25,0.5,0.125,1,12\n");
  CHECK(io::hull_datafile(result) == "# r2 r1\n0.125 0.5\n");
}

TEST_CASE("certificate spec") {
  const std::string text = R"({
    "target": "builtin:merging",
    "steps": ["builtin:teleportation", "builtin:fqsw"],
    "bindings": {"A": ["A"], "B": ["B"], "R": ["R"]},
    "samples": {"count": 5, "labels": ["A", "B", "R"], "dims": [2, 2, 2], "seed": 9}
  })";
  const io::CertificateSpec spec = io::certificate_from_json(text);
  CHECK(spec.steps.size() == 2);
  CHECK(spec.sample_count == 5);
  const auto s1 = io::certificate_samples(spec);
  const auto s2 = io::certificate_samples(spec);
  REQUIRE(s1.size() == 5);
  CHECK((s1[3].vector() - s2[3].vector()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(io::certificate_from_json("{\"steps\":[]}"), ValidationError);
  CHECK_THROWS_AS(io::certificate_from_json(
                      "{\"target\":\"builtin:merging\",\"steps\":[]}"),
                  ValidationError);
}

TEST_CASE("double formatting") {
  CHECK(io::format_double(0.25) == "0.25");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-1.0 / 3.0) == "-0.333333333333");
}
