#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gptwb/io.hpp"

using namespace gptwb;
using namespace gptwb::testing;

TEST(SpaceLiteral, Builtins) {
  EXPECT_EQ(parse_space_literal<double>("classical:3")->ambient_dim(), 3u);
  auto p = parse_space_literal<double>("polygon:7");
  EXPECT_EQ(p->num_vertices(), 7u);
  EXPECT_EQ(parse_space_literal<double>("S_5")->num_vertices(), 5u);
  EXPECT_EQ(parse_space_literal<double>("ball:3")->ambient_dim(), 4u);
  EXPECT_EQ(parse_space_literal<Rational>("square")->num_vertices(), 4u);
  auto d = parse_space_literal<double>("dsum:polygon:5+classical:1");
  EXPECT_EQ(d->ambient_dim(), 4u);
  EXPECT_EQ(d->num_vertices(), 6u);
}

TEST(SpaceLiteral, Errors) {
  EXPECT_THROW(parse_space_literal<double>("polygon:2"), Error);
  EXPECT_THROW(parse_space_literal<double>("torus:3"), SchemaError);
  EXPECT_THROW(parse_space_literal<Rational>("polygon:5"), Unsupported);
  EXPECT_THROW(parse_space_literal<Rational>("ball:3"), Unsupported);
}

TEST(StateSpaceJson, PolytopeWithDefaultUnit) {
  auto s = parse_state_space_json<Rational>(
      R"({"kind": "polytope", "name": "tri", "vertices": [["1", 0, 1], [0, "1/2", 1], [0, 0, 1]]})");
  EXPECT_EQ(s->num_vertices(), 3u);
  EXPECT_EQ(s->unit(), (Vector<Rational>{0, 0, 1}));
  EXPECT_EQ(s->vertices()[1][1], Rational(1, 2));
}

TEST(StateSpaceJson, KindsAndLiteral) {
  EXPECT_EQ(parse_state_space_json<double>(R"({"kind": "ball", "dim": 3, "norm": "euclidean"})")->ambient_dim(), 4u);
  auto ds = parse_state_space_json<Rational>(
      R"({"kind": "direct_sum", "summands": [{"literal": "classical:2"}, {"literal": "square"}]})");
  EXPECT_EQ(ds->ambient_dim(), 5u);
  EXPECT_EQ(parse_state_space_json<double>(R"({"literal": "S_6"})")->num_vertices(), 6u);
}

TEST(StateSpaceJson, SchemaErrorsCarryPaths) {
  try {
    parse_state_space_json<double>(R"({"kind": "polytope", "vertices": [[1, 0], [0, "x"]]})");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("/vertices/1/1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_state_space_json<double>(R"({"kind": "ball", "dim": 3, "norm": "taxicab"})"), Unsupported);
  EXPECT_THROW(parse_state_space_json<double>(R"({"kind": "blob"})"), SchemaError);
}

TEST(StateSpaceJson, ParseErrorReportsLine) {
  try {
    parse_state_space_json<double>("{\n  \"kind\": \"ball\",\n  \"dim\": 3,\n}");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(ObservableJson, SpaceRefAndLabels) {
  auto a = parse_observable_json<Rational>(
      R"({"space_ref": "classical:2", "effects": [["1/3", "2/3"], ["2/3", "1/3"]], "outcomes": ["up", "down"]})");
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.effect(0)[0], Rational(1, 3));
  EXPECT_EQ(a.labels()[1], "down");
}

TEST(ObservableJson, FloatLiteralsBecomeExactDecimals) {
  auto a = parse_observable_json<Rational>(R"({"space_ref": "classical:2", "effects": [[0.1, 0.9], [0.9, 0.1]]})");
  EXPECT_EQ(a.effect(0)[0], Rational(1, 10));
  EXPECT_EQ(a.effect(0)[1], Rational(9, 10));
  EXPECT_EQ(parse_scalar<Rational>("007.50"), Rational(15, 2));
  EXPECT_EQ(parse_scalar<Rational>("0.0"), Rational(0));
}

TEST(ObservableJson, DimensionMismatchIsSchemaError) {
  EXPECT_THROW(parse_observable_json<double>(R"({"space_ref": "classical:2", "effects": [[1, 0, 0]]})"), Error);
  EXPECT_THROW(parse_observable_json<double>(R"({"effects": [[1, 0]]})"), SchemaError);
}

TEST(ObservableJson, ListAcceptsSingleObject) {
  const std::string one = R"({"space_ref": "S_5", "effects": [[0, 0, 0.5], [0, 0, 0.5]]})";
  EXPECT_EQ(parse_observable_list_json<double>(one).size(), 1u);
  EXPECT_EQ(parse_observable_list_json<double>("[" + one + "," + one + "]").size(), 2u);
}

TEST(ObservableJson, RoundTrip) {
  std::mt19937_64 rng(60);
  auto s = parse_space_literal<Rational>("square");
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_observable(s, 3, rng);
    auto b = parse_observable_json<Rational>(observable_to_json(a));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t x = 0; x < a.size(); ++x) EXPECT_EQ(a.effect(x), b.effect(x));
    EXPECT_EQ(a.labels(), b.labels());
  }
}

TEST(ObservableJson, RoundTripInlineSpace) {
  auto s = parse_state_space_json<Rational>(
      R"({"kind": "polytope", "name": "tri", "vertices": [[1, 0, 1], [0, 1, 1], [0, 0, 1]]})");
  auto a = trivial_observable<Rational>(s, {Rational(1, 4), Rational(3, 4)});
  auto b = parse_observable_json<Rational>(observable_to_json(a));
  EXPECT_EQ(b.space().num_vertices(), 3u);
  EXPECT_EQ(b.effect(1), a.effect(1));
}

TEST(InstrumentJson, Parses) {
  auto i = parse_instrument_json<Rational>(R"({
    "observable": {"space_ref": "classical:2", "effects": [[1, 0], [0, 1]]},
    "prepared_states": [[0, 1], ["1/2", "1/2"]],
    "output_space_ref": "classical:2"})");
  EXPECT_EQ(i.prepared_states()[1][0], Rational(1, 2));
  EXPECT_THROW(parse_instrument_json<Rational>(R"({
    "observable": {"space_ref": "classical:2", "effects": [[1, 0], [0, 1]]},
    "prepared_states": [[0, 1]],
    "output_space_ref": "classical:2"})"),
               Error);
}

TEST(CommMatrixInput, CsvWithComments) {
  auto m = parse_comm_matrix("# noisy bit\n0.75,0.25\n\n0.25, 0.75\n");
  ASSERT_EQ(m.rows(), 2u);
  EXPECT_DOUBLE_EQ(m(1, 1), 0.75);
}

TEST(CommMatrixInput, JsonForms) {
  EXPECT_EQ(parse_comm_matrix(R"({"matrix": [[1, 0], [0, 1]]})").rows(), 2u);
  EXPECT_EQ(parse_comm_matrix("[[0.5, 0.5]]").cols(), 2u);
}

TEST(CommMatrixInput, Errors) {
  EXPECT_THROW(parse_comm_matrix("1,0\n0\n"), SchemaError);
  EXPECT_THROW(parse_comm_matrix("1,zero\n"), SchemaError);
  EXPECT_THROW(parse_comm_matrix(""), SchemaError);
}
