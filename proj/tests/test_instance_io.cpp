#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sgop/errors.hpp"
#include "sgop/instance_io.hpp"
#include "test_util.hpp"

namespace sgop {
namespace {

using nlohmann::json;

json minimal() {
  return json::parse(R"({
    "patch": {"center": [0, 0, 1], "radius": 0.8},
    "cone": {"base_tangent_a": [1, 0, 0], "base_tangent_b": [0, 1, 0]},
    "objective": {"family": "identity"},
    "constraints": [{"kind": "ball", "center": [0, 0, 1], "radius": 0.5}]
  })");
}

std::string field_of(const json& doc) {
  try {
    instance_from_json(doc);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "";
}

TEST(InstanceIo, DefaultsAreFilledIn) {
  const auto loaded = load_instance(minimal());
  EXPECT_EQ(loaded.canonical["schema"], 1);
  EXPECT_EQ(loaded.canonical["resolution"]["radial"], 20);
  EXPECT_EQ(loaded.canonical["search_grid"]["n_angle"], 64);
  EXPECT_EQ(loaded.canonical["scalarization"]["p"], "auto");
  EXPECT_EQ(loaded.canonical["cone"]["base"], loaded.canonical["patch"]["center"]);
  EXPECT_EQ(loaded.instance.tolerances.membership, 1e-9);
  EXPECT_EQ(loaded.digest.size(), 64u);
}

TEST(InstanceIo, CanonicalFormIsAFixedPoint) {
  const auto first = load_instance(minimal());
  const auto second = load_instance(first.canonical);
  EXPECT_EQ(first.canonical, second.canonical);
  EXPECT_EQ(first.digest, second.digest);
  auto other = minimal();
  other["patch"]["radius"] = 0.7;
  EXPECT_NE(load_instance(other).digest, first.digest);
}

TEST(InstanceIo, ToJsonRoundTrip) {
  const auto inst = instance_from_json(minimal());
  const auto back = instance_from_json(instance_to_json(inst));
  EXPECT_TRUE(same_point(back.patch.center(), inst.patch.center(), 1e-15));
  EXPECT_EQ(back.patch.radius(), inst.patch.radius());
  EXPECT_LT((back.ref_cone.gen_a().vec() - inst.ref_cone.gen_a().vec()).norm(), 1e-15);
  EXPECT_EQ(back.resolution, inst.resolution);
}

TEST(InstanceIo, DiagnosticsNameTheField) {
  auto doc = minimal();
  doc["patch"]["radius"] = "wide";
  EXPECT_EQ(field_of(doc), "patch.radius");
  doc = minimal();
  doc["constraints"][0]["kind"] = "cube";
  EXPECT_EQ(field_of(doc), "constraints[0].kind");
  doc = minimal();
  doc["cone"]["base_tangent_a"] = {0, 0, 1};
  EXPECT_EQ(field_of(doc), "cone.base_tangent_a");
  doc = minimal();
  doc["tolerances"] = {{"membrship", 1e-9}};
  EXPECT_EQ(field_of(doc), "tolerances.membrship");
  doc = minimal();
  doc.erase("objective");
  EXPECT_EQ(field_of(doc), "objective");
  doc = minimal();
  doc["schema"] = 2;
  EXPECT_EQ(field_of(doc), "schema");
  doc = minimal();
  doc["constraints"] = json::array();
  EXPECT_EQ(field_of(doc), "constraints");
}

TEST(InstanceIo, DomainViolationsAreNotParseErrors) {
  auto doc = minimal();
  doc["constraints"][0]["center"] = {0, 0, -1};
  doc["constraints"][0]["radius"] = 0.1;
  EXPECT_THROW(instance_from_json(doc), PreconditionError);
}

TEST(InstanceIo, FileErrors) {
  EXPECT_THROW(load_instance_file("/nonexistent/instance.json"), ParseError);
  const auto path = std::filesystem::temp_directory_path() / "sgop_bad_instance.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_instance_file(path.string()), ParseError);
  std::filesystem::remove(path);
}

TEST(InstanceIo, ShippedCorpusLoads) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(test::data_path("instances"))) {
    const auto loaded = load_instance_file(entry.path().string());
    EXPECT_TRUE(loaded.instance.candidate.has_value() || loaded.canonical["candidate"].is_null());
    ++count;
  }
  EXPECT_GE(count, 10);
}

TEST(InstanceIo, ParsePointAndVector) {
  const auto p = parse_point("0,0,2", "--y");
  EXPECT_TRUE(p == SpherePointd(0, 0, 1));
  EXPECT_EQ(parse_vector("1, -2.5", "--lambda").size(), 2);
  EXPECT_THROW(parse_point("1,2", "--y"), ParseError);
  EXPECT_THROW(parse_vector("1,x", "--lambda"), ParseError);
  EXPECT_THROW(parse_vector("", "--lambda"), ParseError);
}

}  // namespace
}  // namespace sgop
