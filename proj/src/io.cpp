#include "pantograph/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

using nlohmann::json;

namespace pantograph {
namespace io {

namespace {

double to_dbl(const std::string& s) { return std::stod(s); }

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_dbl(tok));
  return out;
}

}  // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    cfg.raw[key] = val;
    if (key == "n") cfg.n = std::stoi(val);
    else if (key == "R") cfg.R = to_dbl(val);
    else if (key == "eps") cfg.eps = to_dbl(val);
    else if (key == "eps_prime") cfg.eps_prime = to_dbl(val);
    else if (key == "tol_alg") cfg.tol.alg = to_dbl(val);
    else if (key == "tol_num") cfg.tol.num = to_dbl(val);
    else if (key == "tol_prox") cfg.tol.prox = to_dbl(val);
    else if (key == "seed") cfg.seed = unsigned(std::stoul(val));
    else if (key == "lattice") cfg.lattice = val;
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "threads") cfg.threads = std::stoi(val);
    else if (key == "depth") cfg.depth = std::stoi(val);
    else if (key == "foot_radius") cfg.foot_radius = to_dbl(val);
    else if (key == "r_grid") cfg.r_grid = parse_grid(val);
    else if (key == "samples") cfg.samples = std::stoi(val);
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  return parse_text(read_file(path));
}

std::string RunConfig::canonical_text() const {
  std::ostringstream out;
  out << "R=" << R << "\n";
  out << "depth=" << depth << "\n";
  out << "eps=" << eps << "\n";
  out << "eps_prime=" << eps_prime << "\n";
  out << "foot_radius=" << foot_radius << "\n";
  out << "lattice=" << lattice << "\n";
  out << "n=" << n << "\n";
  out << "r_grid=";
  for (size_t i = 0; i < r_grid.size(); ++i) out << (i ? "," : "") << r_grid[i];
  out << "\n";
  out << "samples=" << samples << "\n";
  out << "seed=" << seed << "\n";
  out << "threads=" << threads << "\n";
  out << "tol_alg=" << tol.alg << "\n";
  out << "tol_num=" << tol.num << "\n";
  out << "tol_prox=" << tol.prox << "\n";
  return out.str();
}

std::string RunConfig::hash() const {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

void RunConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: n >= 2 required");
  if (!(R > 0)) throw std::invalid_argument("config: R > 0 required");
  if (!(eps > 0)) throw std::invalid_argument("config: eps > 0 required");
  if (!(eps_prime >= 0)) throw std::invalid_argument("config: eps_prime >= 0 required");
  if (!(tol.alg > 0 && tol.num > 0 && tol.prox > 0))
    throw std::invalid_argument("config: tolerances must be positive");
  if (samples <= 0) throw std::invalid_argument("config: samples > 0 required");
  if (threads <= 0) throw std::invalid_argument("config: threads > 0 required");
}

std::string matrix_to_json(const Mat& m, Field f) {
  json j;
  j["n"] = int(m.rows());
  j["field"] = f == Field::Real ? "R" : "C";
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k)
      entries.push_back({(double)m(i, k).real(), (double)m(i, k).imag()});
  j["entries"] = entries;
  return j.dump();
}

Mat matrix_from_json(const std::string& text, Field* f) {
  json j = json::parse(text);
  int n = j.at("n").get<int>();
  if (f) *f = j.at("field").get<std::string>() == "R" ? Field::Real : Field::Complex;
  Mat m(n, n);
  const auto& e = j.at("entries");
  if (int(e.size()) != n * n) throw std::invalid_argument("matrix_from_json: wrong entry count");
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto& p = e[i * n + k];
      m(i, k) = cplx(p[0].get<double>(), p[1].get<double>());
    }
  return m;
}

std::string geometric_data_to_json(const GeometricData& q) {
  json j;
  j["eps"] = q.eps;
  j["R"] = q.R;
  j["sign"] = q.sign;
  const char* names[5] = {"A", "B", "C", "g", "gp"};
  const GroupElement* els[5] = {&q.A, &q.B, &q.C, &q.g, &q.gp};
  for (int i = 0; i < 5; ++i) j[names[i]] = json::parse(matrix_to_json(els[i]->mat(), els[i]->field()));
  return j.dump(2);
}

GeometricData geometric_data_from_json(const std::string& text) {
  json j = json::parse(text);
  auto mat = [&](const char* key) {
    Field f;
    Mat m = matrix_from_json(j.at(key).dump(), &f);
    return GroupElement(m, f);
  };
  GeometricData q{mat("A"), mat("B"), mat("C"), mat("g"), mat("gp"),
                  j.at("eps").get<double>(), j.at("R").get<double>(), j.at("sign").get<int>()};
  return q;
}

std::string ribbon_graph_to_json(const RibbonGraph& g) {
  json j;
  j["vertices"] = json::array();
  for (const auto& v : g.vertices)
    j["vertices"].push_back(
        {{"id", v.id}, {"side", v.side > 0 ? "+" : "-"}, {"cyclic", v.cyclic}});
  j["edges"] = json::array();
  for (const auto& e : g.edges) j["edges"].push_back({e.first, e.second});
  return j.dump(2);
}

RibbonGraph ribbon_graph_from_json(const std::string& text) {
  json j = json::parse(text);
  RibbonGraph g;
  for (const auto& v : j.at("vertices")) {
    RibbonGraph::Vertex vert;
    vert.id = v.at("id").get<int>();
    vert.side = v.at("side").get<std::string>() == "+" ? +1 : -1;
    auto c = v.at("cyclic");
    vert.cyclic = {c[0].get<int>(), c[1].get<int>(), c[2].get<int>()};
    g.vertices.push_back(vert);
  }
  for (const auto& e : j.at("edges")) g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  return g;
}

std::string measure_to_json(const DiscreteMeasure& mu) {
  json j;
  j["metric"] = mu.metric_tag;
  j["points"] = json::array();
  for (const auto& p : mu.points) j["points"].push_back(json::parse(matrix_to_json(p.mat(), p.field())));
  j["weights"] = mu.weights;
  return j.dump(2);
}

DiscreteMeasure measure_from_json(const std::string& text) {
  json j = json::parse(text);
  DiscreteMeasure mu;
  mu.metric_tag = j.value("metric", "");
  for (const auto& p : j.at("points")) {
    Field f;
    Mat m = matrix_from_json(p.dump(), &f);
    mu.points.emplace_back(m, f);
  }
  mu.weights = j.at("weights").get<std::vector<double>>();
  return mu;
}

std::string report_json(const RunConfig& cfg,
                        const std::vector<std::pair<std::string, std::string>>& fields) {
  json j;
  j["config_hash"] = cfg.hash();
  j["seed"] = cfg.seed;
  for (const auto& [k, v] : fields) {
    json parsed = json::parse(v, nullptr, false);
    if (parsed.is_discarded())
      j[k] = v;
    else
      j[k] = parsed;
  }
  return j.dump(2);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace io
}  // namespace pantograph
