#pragma once

#include "pantograph/assembly.hpp"
#include "pantograph/measures.hpp"

#include <map>
#include <string>

namespace pantograph {
namespace io {

// Plain-text key = value configuration.
struct RunConfig {
  int n = 3;
  double R = 6.0;
  double eps = 1e-3;
  double eps_prime = 1e-3;
  Tolerances tol;
  unsigned seed = 1;
  std::string lattice = "genus2_fn";
  std::string out_dir = ".";
  int threads = 1;
  int depth = -1;
  double foot_radius = 0.2;
  std::vector<double> r_grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  int samples = 20000;
  std::map<std::string, std::string> raw;

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);
  std::string canonical_text() const;
  std::string hash() const;  // FNV-1a of the canonical text
  void validate() const;     // throws std::invalid_argument on bad values
};

std::string matrix_to_json(const Mat& m, Field f);
Mat matrix_from_json(const std::string& json, Field* f = nullptr);

std::string geometric_data_to_json(const GeometricData& q);
GeometricData geometric_data_from_json(const std::string& json);

std::string ribbon_graph_to_json(const RibbonGraph& g);
RibbonGraph ribbon_graph_from_json(const std::string& json);

std::string measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const std::string& json);  // metric left empty

// Structured report writing: JSON object with config hash and seed embedded.
std::string report_json(const RunConfig& cfg,
                        const std::vector<std::pair<std::string, std::string>>& fields);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace io
}  // namespace pantograph
