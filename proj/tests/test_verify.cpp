#include "spd/verify.hpp"

#include <stdexcept>
#include <string>

#include "doctest.h"
#include "spd/corpus.hpp"
#include "spd/linalg_core.hpp"

using spd::OJson;

TEST_SUITE("verify") {

TEST_CASE("canonical dump: scientific floats, stable order, escaping") {
  OJson j;
  j["b"] = 1.5;
  j["a"] = 3;
  j["list"] = OJson::array({0.0, -0.0});
  j["s"] = "x\"y";
  j["empty"] = OJson::object();
  const std::string text = spd::canonical_dump(j);
  CHECK(text.find("\"b\": 1.5") != std::string::npos);
  CHECK(text.find("\"a\": 3") != std::string::npos);
  CHECK(text.find("-0") == std::string::npos);
  CHECK(text.find("x\\\"y") != std::string::npos);
  CHECK(text.find("\"empty\": {}") != std::string::npos);
  CHECK(text.find("\"b\"") < text.find("\"a\""));
  CHECK(text.back() == '\n');
  CHECK(spd::fmt_double(0.0) == "0");
  CHECK(spd::fmt_double(-0.0) == "0");
  CHECK(spd::fmt_double(1e-13) == "1e-13");
  // The rendering is exact: parsing it back recovers the same double.
  CHECK(std::stod(spd::fmt_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("matrix, tuple and point json round trips") {
  const spd::OperatorTuple t = spd::normal_symmetrization_instance(3, 4, 31);
  const nlohmann::json parsed =
      nlohmann::json::parse(spd::canonical_dump(spd::tuple_json(t)));
  const spd::OperatorTuple back = spd::tuple_from_json(parsed);
  REQUIRE(back.n() == 3);
  REQUIRE(back.dim() == 4);
  for (int i = 1; i <= 3; ++i)
    CHECK(spd::op_norm(back.op(i) - t.op(i)) == 0.0);

  spd::CVec s(2);
  s << spd::Complex(0.25, -0.5), spd::Complex(0.0, 1.0);
  const spd::CVec s2 = spd::point_from_json(
      nlohmann::json::parse(spd::canonical_dump(spd::point_json(s))));
  REQUIRE(s2.size() == 2);
  CHECK(std::abs(s2(0) - s(0)) <= 1e-12);
  CHECK(std::abs(s2(1) - s(1)) <= 1e-12);
}

TEST_CASE("input validation failures carry usage-grade errors") {
  using nlohmann::json;
  CHECK_THROWS_AS((void)spd::tuple_from_json(json::parse("{}")),
                  std::runtime_error);
  CHECK_THROWS_AS(
      (void)spd::tuple_from_json(json::parse(R"({"ops": []})")),
      std::runtime_error);
  CHECK_THROWS_AS(
      (void)spd::tuple_from_json(
          json::parse(R"({"ops": [[[[0,0]]], [[[0,0],[0,0]]]]})")),
      std::runtime_error);
  CHECK_THROWS_AS(
      (void)spd::tuple_from_json(
          json::parse(R"({"n": 3, "ops": [[[[0,0]]]]})")),
      std::runtime_error);
  CHECK_THROWS_AS(
      (void)spd::matrix_from_json(json::parse(R"([[[1,2],[3]]])")),
      std::runtime_error);
  CHECK_THROWS_AS((void)spd::point_from_json(json::parse(R"({"s": []})")),
                  std::runtime_error);
  CHECK_THROWS_AS(
      (void)spd::point_from_json(json::parse(R"({"s": [["a", 0]]})")),
      std::runtime_error);
}

TEST_CASE("paper battery: deterministic text, green verdict") {
  spd::VerifyOptions o;
  o.estimate_samples = 2000;
  o.oracle_points = 40;
  o.pencil_points = 20;
  o.fundamental_instances = 3;
  o.unitary_instances = 4;
  o.dilation_instances = 2;
  o.model_fibres = 6;

  const spd::VerifyPaperReport a = spd::verify_paper_report(o);
  const spd::VerifyPaperReport b = spd::verify_paper_report(o);
  CHECK(a.pass);
  CHECK(a.text == b.text);
  CHECK(a.text.find("\"report\": \"verify-paper\"") != std::string::npos);
  CHECK(a.text.find("\"sections_total\": 7") != std::string::npos);

  spd::VerifyOptions o2 = o;
  o2.seed = 999;
  const spd::VerifyPaperReport c = spd::verify_paper_report(o2);
  CHECK(c.pass);
  CHECK(c.text != a.text);
}

}  // TEST_SUITE
