#pragma once

// JSON instance files and run reports.

#include <json.hpp>

#include <string>

#include "sgop/gop.hpp"

namespace sgop {

inline constexpr int kSchemaVersion = 1;

/// The input document with every optional field filled in. Values are kept
/// exactly as written, so re-reading a canonical document reproduces it.
/// Throws ParseError naming the offending field.
nlohmann::json canonicalize_instance(const nlohmann::json& doc);

/// Builds an instance from a (not necessarily canonical) document and runs
/// validate_instance. Semantic violations surface as PreconditionError.
GopInstance instance_from_json(const nlohmann::json& doc);

/// Document describing `inst` (normalized coordinates); parses back to `inst`.
nlohmann::json instance_to_json(const GopInstance& inst);

/// Hex SHA-256 of the compact dump of a canonical document.
std::string instance_digest(const nlohmann::json& canonical);

struct LoadedInstance {
  GopInstance instance;
  nlohmann::json canonical;
  std::string digest;
};

LoadedInstance load_instance(const nlohmann::json& doc);
/// Reads a file; I/O and JSON syntax errors become ParseError.
LoadedInstance load_instance_file(const std::string& path);

nlohmann::json to_json(const SpherePointd& x);
nlohmann::json to_json(const TangentVectord& v);
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Resolution& r);
nlohmann::json to_json(const Tolerances& t);
nlohmann::json to_json(const SearchGrid& g);

/// Parses "x,y,z" into a point. Throws ParseError.
SpherePointd parse_point(const std::string& text, const std::string& field);
Eigen::VectorXd parse_vector(const std::string& text, const std::string& field);

}  // namespace sgop
