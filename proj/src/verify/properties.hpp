#pragma once

// Seeded property batteries. Each battery returns one result per property;
// a failing property keeps the first counterexample as a reproduction record.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgop/gop.hpp"

namespace sgop::verify {

struct PropertyResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const { return checks > 0 && failures == 0; }
};

class PropertyCheck {
 public:
  explicit PropertyCheck(std::string name) { result_.name = std::move(name); }

  template <typename Detail>
  void expect(bool ok, Detail&& detail) {
    ++result_.checks;
    if (!ok && result_.failures++ == 0) result_.first_failure = detail();
  }

  const PropertyResult& result() const { return result_; }

 private:
  PropertyResult result_;
};

std::string describe(const Eigen::VectorXd& v);
std::string describe(const SpherePointd& x);

std::vector<PropertyResult> geometry_round_trip(std::uint64_t seed, int n = 10000);
std::vector<PropertyResult> geometry_axioms(std::uint64_t seed, int n = 1000);
std::vector<PropertyResult> transport_properties(std::uint64_t seed, int n = 100);
std::vector<PropertyResult> cone_properties(std::uint64_t seed, int n = 200);
std::vector<PropertyResult> oriented_distance_properties(std::uint64_t seed, int n = 1000);
std::vector<PropertyResult> gerstewitz_properties(std::uint64_t seed, int n = 10000);
std::vector<PropertyResult> theorem_equivalence(std::uint64_t seed, int instances = 50, int ys = 5,
                                                Resolution resolution = {20, 36});
std::vector<PropertyResult> euclidean_limit(std::uint64_t seed, int instances = 20, int ys = 5);
std::vector<PropertyResult> separator_properties(std::uint64_t seed, int n = 1000);
std::vector<PropertyResult> certificate_properties(std::uint64_t seed, int instances = 50, int ys = 3);
std::vector<PropertyResult> scalarization_containments(std::uint64_t seed, int instances = 50, int ys = 10);
std::vector<PropertyResult> scalarization_procedure(std::uint64_t seed, int instances = 20);

enum class Suite { kGeometry, kDelta, kGerstewitz, kIsa, kScalarization, kAll };

std::optional<Suite> parse_suite(const std::string& name);
std::vector<PropertyResult> run_suite(Suite suite, std::uint64_t seed);

}  // namespace sgop::verify
