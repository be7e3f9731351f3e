#include "rigidity/report.hpp"

#include <fstream>
#include <stdexcept>

namespace rigidity {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    data.push_back(row);
  }
  j["data"] = data;
  return j;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
  return data;
}

nlohmann::json make_report(const std::string& command, nlohmann::json config,
                           nlohmann::json results, double wall_time_s) {
  nlohmann::json report;
  report["artifact_version"] = kArtifactVersion;
  report["command"] = command;
  report["config"] = std::move(config);
  report["results"] = std::move(results);
  report["wall_time_s"] = wall_time_s;
  return report;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

}  // namespace rigidity
