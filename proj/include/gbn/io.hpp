#pragma once

// File formats. All node indices are 0-based.
//
//   graph        CSV   header `u,v,w`, one undirected edge per line, u < v
//   pattern      JSON  {"n": N, "support": [i1, i2, ...]}  (sorted)
//   signal       CSV   `node,value`
//   spectrum     CSV   `ell,mu,p`  (ell is the 1-based eigenvalue rank)
//   pair corr.   CSV   `rho,R`
//   partition    JSON  {"cells": [[...], ...], "seeds": [...]}

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gbn/error.hpp"
#include "gbn/generators.hpp"
#include "gbn/graph.hpp"
#include "gbn/metrics.hpp"
#include "gbn/spectral.hpp"

namespace gbn {

using json = nlohmann::json;

/// Shortest decimal text that round-trips a double.
inline std::string format_double(double x) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

// --- graph CSV ---------------------------------------------------------------

inline std::string graph_to_csv(const Graph& g) {
  std::string out = "u,v,w\n";
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u) + "," + std::to_string(e.v) + "," + format_double(e.w) + "\n";
  }
  return out;
}

/// Parses the edge-list CSV. The node count is one more than the largest
/// index. Self-loops, duplicate pairs, nonpositive weights and disconnected
/// graphs are rejected.
inline Graph graph_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("graph CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v,w") throw ValidationError("graph CSV: expected header 'u,v,w', got '" + line + "'");
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c)) {
      throw ValidationError("graph CSV line " + std::to_string(lineno) + ": expected three fields");
    }
    Edge e;
    try {
      std::size_t pos = 0;
      e.u = std::stoull(a, &pos);
      if (pos != a.size()) throw std::invalid_argument(a);
      e.v = std::stoull(b, &pos);
      if (pos != b.size()) throw std::invalid_argument(b);
      e.w = std::stod(c, &pos);
      if (pos != c.size()) throw std::invalid_argument(c);
    } catch (const std::exception&) {
      throw ValidationError("graph CSV line " + std::to_string(lineno) + ": malformed field in '" + line + "'");
    }
    n = std::max({n, e.u + 1, e.v + 1});
    edges.push_back(e);
  }
  if (n == 0) throw ValidationError("graph CSV: no edges");
  return Graph(n, std::move(edges));
}

inline Graph load_graph(const std::string& path) { return graph_from_csv(read_text(path)); }
inline void save_graph(const std::string& path, const Graph& g) { write_text(path, graph_to_csv(g)); }

// --- generator spec JSON -------------------------------------------------------

inline json to_json(const GeneratorSpec& s) {
  json j{{"family", to_string(s.family)}, {"n", s.n}, {"seed", s.seed}};
  switch (s.family) {
    case GraphFamily::sensor: j["k_max"] = s.k_max; break;
    case GraphFamily::community:
      j["n_communities"] = s.n_communities;
      j["p_in"] = s.p_in;
      j["p_out"] = s.p_out;
      break;
    case GraphFamily::barabasi_albert: j["m_attach"] = s.m_attach; break;
    case GraphFamily::grid:
      j["rows"] = s.rows;
      j["cols"] = s.cols;
      break;
    default: break;
  }
  return j;
}

inline GeneratorSpec generator_spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("graph spec: expected an object");
  GeneratorSpec s;
  try {
    s.family = parse_graph_family(j.at("family").get<std::string>());
    s.n = j.value("n", std::size_t{0});
    s.seed = j.value("seed", std::uint64_t{0});
    s.k_max = j.value("k_max", s.k_max);
    s.n_communities = j.value("n_communities", s.n_communities);
    s.p_in = j.value("p_in", s.p_in);
    s.p_out = j.value("p_out", s.p_out);
    s.m_attach = j.value("m_attach", s.m_attach);
    s.rows = j.value("rows", s.rows);
    s.cols = j.value("cols", s.cols);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("graph spec: ") + e.what());
  }
  if (s.family == GraphFamily::grid) s.n = s.rows * s.cols;
  return s;
}

// --- sampling pattern JSON -------------------------------------------------------

inline json to_json(const SamplingPattern& s) { return json{{"n", s.size()}, {"support", s.support()}}; }

inline SamplingPattern pattern_from_json(const json& j) {
  try {
    return SamplingPattern(j.at("n").get<std::size_t>(), j.at("support").get<NodeSet>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("pattern JSON: ") + e.what());
  }
}

inline SamplingPattern load_pattern(const std::string& path) {
  try {
    return pattern_from_json(json::parse(read_text(path)));
  } catch (const json::parse_error& e) {
    throw ValidationError("pattern JSON '" + path + "': " + e.what());
  }
}

inline void save_pattern(const std::string& path, const SamplingPattern& s) { write_text(path, to_json(s).dump() + "\n"); }

// --- CSV tables ------------------------------------------------------------------

inline std::string signal_to_csv(const Eigen::VectorXd& x) {
  std::string out = "node,value\n";
  for (Eigen::Index i = 0; i < x.size(); ++i) out += std::to_string(i) + "," + format_double(x(i)) + "\n";
  return out;
}

inline Eigen::VectorXd signal_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "node,value") throw ValidationError("signal CSV: expected header 'node,value'");
  std::vector<std::pair<std::size_t, double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("signal CSV: malformed line '" + line + "'");
    try {
      rows.emplace_back(std::stoull(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ValidationError("signal CSV: malformed line '" + line + "'");
    }
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [node, value] : rows) {
    if (node >= rows.size() || seen[node]) throw ValidationError("signal CSV: node indices must be 0..n-1 once each");
    seen[node] = true;
    x(static_cast<Eigen::Index>(node)) = value;
  }
  return x;
}

inline std::string spectrum_to_csv(const SpectralBasis& basis, const Eigen::VectorXd& p) {
  std::string out = "ell,mu,p\n";
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    out += std::to_string(j + 2) + "," + format_double(basis.mu(j + 1)) + "," + format_double(p(j)) + "\n";
  }
  return out;
}

inline std::string pair_correlation_to_csv(const PairCorrelation& pc) {
  std::string out = "rho,R\n";
  for (std::size_t i = 0; i < pc.rho.size(); ++i) out += format_double(pc.rho[i]) + "," + format_double(pc.values[i]) + "\n";
  return out;
}

inline json to_json(const Partition& p) { return json{{"cells", p.cells}, {"seeds", p.seeds}}; }

}  // namespace gbn
