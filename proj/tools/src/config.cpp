#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace flexcross::cli {

using nlohmann::json;

CheckTolerances::CheckTolerances() {
  values = {
      {"edge", 1e-9},          // relative edge-length drift
      {"angle", 1e-8},         // dihedral angles, radians mod 2π
      {"h_identity", 1e-12},   // H + Hᵀ - 2G
      {"flat", 1e-10},         // <v, m> at u = 0, ∞
      {"duality", 1e-9},       // vertex agreement with the dual family
      {"concurrency", 1e-8},   // σ_min / σ_next of the bisector stack
      {"ratio", 1e-8},         // sine-ratio law at (n-3)-faces
      {"tangency", 1e-8},      // spread of distances to the facet hyperplanes
      {"relation_exact", 1e-9},   // face-volume relations with exact face volumes
      {"relation_numeric", 1e-4}, // face-volume relations with quadrature volumes
      {"volume_exact", 1e-8},     // closed form vs Schläfli, times σ_n (n = 3)
      {"volume_numeric", 1e-4},   // closed form vs Schläfli, times σ_n (n >= 4)
      {"decomposition", 1e-6},    // slack on top of the reported abs_error
      {"bellows", 1e-8},          // modified-bellows constancy, times σ_n
  };
}

double CheckTolerances::operator[](const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw Error(ErrorCode::input, "unknown tolerance '" + name + "'");
  return it->second;
}

void CheckTolerances::set(const std::string& name, double value) {
  auto it = values.find(name);
  if (it == values.end()) throw Error(ErrorCode::input, "unknown tolerance '" + name + "'");
  if (!(value > 0) || !std::isfinite(value)) throw Error(ErrorCode::input, "tolerance '" + name + "' must be positive");
  it->second = value;
}

std::vector<FlexParam> default_grid() {
  std::vector<FlexParam> g{FlexParam::finite(0.0), FlexParam::inf(), FlexParam::finite(1e-3)};
  for (int i = 0; i < 31; ++i) {
    const double t = std::pow(10.0, -2.0 + 4.0 * i / 30.0);
    g.push_back(FlexParam::finite(t));
    g.push_back(FlexParam::finite(-t));
  }
  return normalize_grid(std::move(g));
}

std::vector<FlexParam> normalize_grid(std::vector<FlexParam> grid) {
  std::sort(grid.begin(), grid.end(), [](const FlexParam& x, const FlexParam& y) {
    if (x.infinite != y.infinite) return y.infinite;
    return !x.infinite && x.value < y.value;
  });
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

FlexParam parse_param(const std::string& tok) {
  std::string t = tok;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "inf" || t == "-inf" || t == "+inf" || t == "infinity") return FlexParam::inf();
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return FlexParam::finite(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::input, "not a parameter value: '" + tok + "'");
  }
}

std::uint64_t parse_seed(const std::string& tok) {
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(tok, &pos, 0);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::input, "not a seed: '" + tok + "'");
  }
}

Vec parse_vector(const std::string& tok) {
  std::vector<double> xs;
  std::stringstream ss(tok);
  std::string item;
  while (std::getline(ss, item, ',')) {
    FlexParam p = parse_param(item);
    if (p.infinite) throw Error(ErrorCode::input, "not a vector: '" + tok + "'");
    xs.push_back(p.value);
  }
  if (xs.empty()) throw Error(ErrorCode::input, "not a vector: '" + tok + "'");
  return Eigen::Map<Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::input, "field '" + field + "': " + what);
}

int line_of(const std::string& text, size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.contains(field)) field_error(field, "missing");
  return doc.at(field);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

std::vector<int> sign_row(const json& v, const std::string& field, int n) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) field_error(field, "expected " + std::to_string(n) + " signs");
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer() || std::abs(v[i].get<int>()) != 1)
      field_error(field + "[" + std::to_string(i) + "]", "expected +1 or -1");
    out.push_back(v[i].get<int>());
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::input, source + ": line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::input, source + ": top level must be an object");
  RunConfig cfg;
  cfg.source = source;
  try {
    if (doc.contains("schema_version")) {
      const json& v = doc.at("schema_version");
      if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        field_error("schema_version", "unsupported (expected " + std::to_string(kSchemaVersion) + ")");
    }
    const json& sp = require(doc, "space");
    if (!sp.is_string()) field_error("space", "expected a string");
    Kind kind;
    try {
      kind = kind_from_string(sp.get<std::string>());
    } catch (const Error&) {
      field_error("space", "expected euclidean, spherical or hyperbolic");
    }
    const json& nv = require(doc, "n");
    if (!nv.is_number_integer() || nv.get<int>() < 2 || nv.get<int>() > kMaxN) field_error("n", "expected an integer in [2, 32]");
    const int n = nv.get<int>();
    cfg.data.space = {kind, n};

    const json& G = require(doc, "G");
    if (!G.is_array() || static_cast<int>(G.size()) != n) field_error("G", "expected " + std::to_string(n) + " rows");
    cfg.data.G.resize(n, n);
    for (int i = 0; i < n; ++i) {
      const std::string f = "G[" + std::to_string(i) + "]";
      if (!G[i].is_array() || static_cast<int>(G[i].size()) != n) field_error(f, "expected " + std::to_string(n) + " entries");
      for (int j = 0; j < n; ++j) cfg.data.G(i, j) = number(G[i][j], f + "[" + std::to_string(j) + "]");
    }
    const json& lam = require(doc, "lambda");
    if (!lam.is_array() || static_cast<int>(lam.size()) != n) field_error("lambda", "expected " + std::to_string(n) + " entries");
    cfg.data.lambda.resize(n);
    for (int i = 0; i < n; ++i) cfg.data.lambda[i] = number(lam[i], "lambda[" + std::to_string(i) + "]");
    cfg.data.s = sign_row(require(doc, "s"), "s", n);
    cfg.data.s_prime = sign_row(require(doc, "s_prime"), "s_prime", n);

    if (doc.contains("u_grid")) {
      const json& g = doc.at("u_grid");
      if (!g.is_array() || g.empty()) field_error("u_grid", "expected a non-empty array");
      for (size_t i = 0; i < g.size(); ++i) {
        const std::string f = "u_grid[" + std::to_string(i) + "]";
        if (g[i].is_string()) {
          FlexParam p = parse_param(g[i].get<std::string>());
          if (!p.infinite) field_error(f, "only \"inf\" / \"-inf\" strings are allowed");
          cfg.u_grid.push_back(p);
        } else {
          cfg.u_grid.push_back(FlexParam::finite(number(g[i], f)));
        }
      }
      cfg.u_grid = normalize_grid(cfg.u_grid);
    } else {
      cfg.u_grid = default_grid();
    }
    if (doc.contains("seed")) {
      const json& s = doc.at("seed");
      if (s.is_number_unsigned()) cfg.seed = s.get<std::uint64_t>();
      else if (s.is_string()) cfg.seed = parse_seed(s.get<std::string>());
      else field_error("seed", "expected a non-negative integer or a string like \"0x5EED\"");
    }
    if (doc.contains("tolerances")) {
      const json& t = doc.at("tolerances");
      if (!t.is_object()) field_error("tolerances", "expected an object");
      for (auto it = t.begin(); it != t.end(); ++it) cfg.tol.set(it.key(), number(it.value(), "tolerances." + it.key()));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::input) throw Error(ErrorCode::input, source + ": " + e.message());
    throw;
  }
  const std::string bad = validate_data(cfg.data);
  if (!bad.empty()) throw Error(ErrorCode::invalid_data, source + ": " + bad);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string config_to_json(const RunConfig& cfg) {
  const SimplestTypeData& d = cfg.data;
  const int n = d.n();
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["space"] = to_string(d.space.kind);
  doc["n"] = n;
  json G = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(d.G(i, j));
    G.push_back(row);
  }
  doc["G"] = G;
  doc["lambda"] = std::vector<double>(d.lambda.data(), d.lambda.data() + n);
  doc["s"] = d.s;
  doc["s_prime"] = d.s_prime;
  json grid = json::array();
  for (const FlexParam& u : cfg.u_grid) {
    if (u.infinite) grid.push_back("inf");
    else grid.push_back(u.value);
  }
  doc["u_grid"] = grid;
  doc["seed"] = cfg.seed;
  doc["tolerances"] = cfg.tol.values;
  return doc.dump(2);
}

}  // namespace flexcross::cli
