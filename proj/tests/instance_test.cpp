#include <doctest.h>

#include <string>

#include "dualvik/errors.hpp"
#include "dualvik/instance.hpp"
#include "dualvik/rel.hpp"
#include "dualvik/subord.hpp"

using namespace dualvik;

namespace {

const char* kSample = R"({
  "algebras": {"A": {"atoms": ["p", "q"]}},
  "points": {"X": {"points": ["x0", "x1"]}},
  "relations": {
    "R": {"source": "X", "target": "X",
          "pairs": [["x0", "x0"], ["x0", "x1"]]},
    "E": {"source": "A", "target": "A",
          "pairs": [["p", "p"], ["q", "q"]]}
  },
  "subordinations": {
    "S": {"dual": "E"},
    "T": {"source": "A", "target": "A",
          "dual_relation": [["p", "p"], ["q", "q"]]},
    "U": {"source": "A", "target": "A",
          "pairs": [[[], []], [[], ["p"]], [[], ["q"]], [[], ["p", "q"]],
                    [["p"], ["p"]], [["p"], ["p", "q"]],
                    [["q"], ["q"]], [["q"], ["p", "q"]],
                    [["p", "q"], ["p", "q"]]]}
  }
})";

}  // namespace

TEST_CASE("all three subordination forms load to the same object") {
  Instance inst = parse_instance(kSample);
  REQUIRE(inst.algebras.size() == 1);
  REQUIRE(inst.points.size() == 1);
  REQUIRE(inst.relations.size() == 2);
  REQUIRE(inst.subordinations.size() == 3);

  const Algebra* a = inst.find_carrier("A");
  REQUIRE(a != nullptr);
  CHECK(a->atom_count() == 2);
  const Relation* r = inst.find_relation("R");
  REQUIRE(r != nullptr);
  CHECK(r->holds(0, 0));
  CHECK(r->holds(0, 1));
  CHECK(!r->holds(1, 0));

  Subordination expect = identity_subordination(*a);
  REQUIRE(inst.find_subordination("S") != nullptr);
  CHECK(*inst.find_subordination("S") == expect);
  REQUIRE(inst.find_subordination("T") != nullptr);
  CHECK(*inst.find_subordination("T") == expect);
  REQUIRE(inst.find_subordination("U") != nullptr);
  CHECK(*inst.find_subordination("U") == expect);
  CHECK(inst.find_subordination("missing") == nullptr);
}

TEST_CASE("render and parse are inverse on the canonical form") {
  Instance inst = parse_instance(kSample);
  std::string once = render_instance(inst);
  std::string twice = render_instance(parse_instance(once));
  CHECK(once == twice);
  CHECK(once.back() == '\n');
}

TEST_CASE("generated instances are deterministic and round-trip") {
  Instance one = random_instance(2, 7);
  Instance two = random_instance(2, 7);
  CHECK(render_instance(one) == render_instance(two));
  CHECK(render_instance(parse_instance(render_instance(one))) ==
        render_instance(one));
  CHECK(render_instance(random_instance(2, 8)) != render_instance(one));
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK_THROWS_WITH_AS(
      parse_instance(R"({"algebras": {}, "blah": {}})"),
      doctest::Contains("blah"), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_instance(
          R"({"algebras": {"A": {"atoms": ["p"], "extra": 1}}})"),
      doctest::Contains("extra"), ValidationError);
}

TEST_CASE("bad members are reported with their location") {
  CHECK_THROWS_WITH_AS(
      parse_instance(
          R"({"points": {"X": {"points": ["x"]}},
              "relations": {"R": {"source": "X", "target": "Y",
                                  "pairs": []}}})"),
      doctest::Contains("\"Y\""), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_instance(
          R"({"points": {"X": {"points": ["x"]}},
              "relations": {"R": {"source": "X", "target": "X",
                                  "pairs": [["x", "z"]]}}})"),
      doctest::Contains("z"), ValidationError);
  CHECK_THROWS_AS(
      parse_instance(R"({"algebras": {"A": {"atoms": ["p", "p"]}}})"),
      ValidationError);
}

TEST_CASE("subordination pair sets are validated on load") {
  CHECK_THROWS_WITH_AS(
      parse_instance(
          R"({"algebras": {"A": {"atoms": ["u"]}},
              "subordinations": {"S": {"source": "A", "target": "A",
                                       "pairs": [[[], []],
                                                 [["u"], ["u"]]]}}})"),
      doctest::Contains("S4"), ValidationError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_instance("{\n  \"algebras\": }\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
  }
}
