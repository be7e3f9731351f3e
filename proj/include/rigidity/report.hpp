#pragma once

// JSON experiment reports: schema-stable envelope with the artifact version,
// the echoed configuration, and the numerical results. Key order is the
// library's deterministic (alphabetical) object order.

#include <json.hpp>

#include <Eigen/Dense>

#include <string>

namespace rigidity {

inline constexpr const char* kArtifactVersion = "0.1.0";

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);  // row-major with dimensions
nlohmann::json vector_to_json(const Eigen::VectorXd& v);

// Envelope: {artifact_version, command, config, results, wall_time_s}.
nlohmann::json make_report(const std::string& command, nlohmann::json config,
                           nlohmann::json results, double wall_time_s);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rigidity
