#include <gtest/gtest.h>

#include "symqt/error.hpp"
#include "symqt/model_io.hpp"

using namespace symqt;
using json = nlohmann::ordered_json;

namespace {

std::string bundled() { return std::string(SYMQT_DATA_DIR) + "/s3_triangle.json"; }

std::string error_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ModelIo, LoadsBundledTriangle) {
  ModelDocument doc = load_model_file(bundled());
  EXPECT_EQ(doc.group->order(), 6);
  EXPECT_EQ(doc.action->point_name(4), "CBA");
  EXPECT_EQ(doc.parameters.size(), 4u);
  EXPECT_EQ(doc.parameter("theta_a").labels()[4], "C");
  EXPECT_EQ(doc.encoding(doc.parameter("theta0")), (std::vector<double>{1.0, -1.0}));
  ASSERT_TRUE(doc.state_space);
  EXPECT_EQ(doc.state_space->irrep_dim, 2);
  EXPECT_EQ(*doc.seed, 2024u);
  EXPECT_THROW(doc.parameter("nope"), ValidationError);
}

TEST(ModelIo, RoundTrip) {
  ModelDocument doc = load_model_file(bundled());
  std::string once = dump_model(doc);
  std::string twice = dump_model(parse_model(once));
  EXPECT_EQ(once, twice);
}

TEST(ModelIo, FieldDiagnostics) {
  json j = json::parse(dump_model(load_model_file(bundled())));
  json bad = j;
  bad["cayley"][1][2] = 1;
  std::string e = error_of(bad.dump());
  EXPECT_NE(e.find("cayley"), std::string::npos) << e;
  EXPECT_NE(e.find("[1]"), std::string::npos) << e;

  bad = j;
  bad.erase("schema_version");
  EXPECT_NE(error_of(bad.dump()).find("schema_version"), std::string::npos);

  bad = j;
  bad["parameters"]["theta0"] = {"white"};
  EXPECT_NE(error_of(bad.dump()).find("parameters.theta0"), std::string::npos);

  bad = j;
  bad["cayley"][0][0] = "x";
  EXPECT_NE(error_of(bad.dump()).find("cell [0][0]"), std::string::npos);

  EXPECT_NE(error_of("{not json").find("JSON"), std::string::npos);
}

TEST(ModelIo, IdentityEncoding) {
  ParametricFunction num("n", {"0.5", "2", "0.5"});
  EXPECT_EQ(identity_encoding(num), (std::vector<double>{0.5, 2.0}));
  ParametricFunction txt("t", {"x", "y", "z", "x"});
  EXPECT_EQ(identity_encoding(txt), (std::vector<double>{0, 1, 2}));
}

TEST(ModelIo, TrivialGroupDocument) {
  std::string text = R"({"schema_version":1,"elements":["e"],"cayley":[[0]],"points":["p","q"],
    "action":[[0,1]],"parameters":{"f":["u","v"]}})";
  ModelDocument doc = parse_model(text);
  EXPECT_EQ(doc.group->order(), 1);
  EXPECT_FALSE(doc.state_space);
}
