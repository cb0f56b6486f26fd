#include "vortex/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vortex/error.hpp"

namespace vortex {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// nlohmann::json keeps object keys in a std::map, so dump() is already canonical.
std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

json load_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

namespace {

double number_field(const json& j, const char* key) {
  if (!j.is_object()) throw InvalidArgument("parameter file must hold a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(std::string("missing key ") + key);
  if (!it->is_number()) throw InvalidArgument(std::string("key ") + key + " must be a number");
  return it->get<double>();
}

}  // namespace

GLParams params_from_json(const json& j) {
  GLParams p;
  p.a_plus = number_field(j, "a_plus");
  p.a_minus = number_field(j, "a_minus");
  p.b = number_field(j, "b");
  p.t_plus = number_field(j, "t_plus");
  p.t_minus = number_field(j, "t_minus");
  return p;
}

BECParams bec_from_json(const json& j) {
  BECParams b;
  b.m1 = number_field(j, "m1");
  b.m2 = number_field(j, "m2");
  b.g1 = number_field(j, "g1");
  b.g2 = number_field(j, "g2");
  b.g12 = number_field(j, "g12");
  b.mu1 = number_field(j, "mu1");
  b.mu2 = number_field(j, "mu2");
  b.hbar = number_field(j, "hbar");
  return b;
}

json to_json(const GLParams& p) {
  return {{"a_plus", p.a_plus}, {"a_minus", p.a_minus}, {"b", p.b}, {"t_plus", p.t_plus}, {"t_minus", p.t_minus}};
}

json to_json(const BECParams& b) {
  return {{"m1", b.m1},   {"m2", b.m2},   {"g1", b.g1},   {"g2", b.g2},
          {"g12", b.g12}, {"mu1", b.mu1}, {"mu2", b.mu2}, {"hbar", b.hbar}};
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

CsvTable profile_table(const Profile& prof) {
  CsvTable t{{"r", "f_plus", "f_minus"}, {}};
  t.rows.reserve(prof.grid.n_cells());
  for (std::size_t i = 0; i < prof.grid.n_cells(); ++i)
    t.rows.push_back({format_double(prof.grid.node(i)), format_double(prof.f_plus[i]), format_double(prof.f_minus[i])});
  return t;
}

CsvTable eigenvector_table(const RadialGrid& grid, const SpectralVector& v) {
  CsvTable t{{"r", "a0_plus", "a0_minus", "a2_plus", "a2_minus"}, {}};
  for (std::size_t i = 0; i < grid.n_cells(); ++i)
    t.rows.push_back({format_double(grid.node(i)), format_double(v.a0_plus[i]), format_double(v.a0_minus[i]),
                      format_double(v.a2_plus[i]), format_double(v.a2_minus[i])});
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw InvalidArgument(path + ": empty CSV");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw InvalidArgument(path + ": ragged CSV row");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::string meta_path_for(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".meta.json";
  return csv_path.substr(0, dot) + ".meta.json";
}

void write_artifact(const std::string& csv_path, const CsvTable& table, const json& config, const json& extra) {
  const std::string body = table.str();
  json meta = extra.is_object() ? extra : json::object();
  meta["config"] = config;
  meta["config_hash"] = config_hash(config);
  meta["content_hash"] = hex64(fnv1a64(body));
  meta["rows"] = table.rows.size();
  write_text_file(csv_path, body);
  write_text_file(meta_path_for(csv_path), meta.dump(2) + "\n");
}

ArtifactCheck verify_artifact(const std::string& csv_path, const std::string& meta_path,
                              const std::string& expected_config_hash) {
  ArtifactCheck c;
  const std::string body = read_text_file(csv_path);
  c.meta = load_json_file(meta_path);
  if (!c.meta.contains("config") || !c.meta.contains("config_hash") || !c.meta.contains("content_hash")) {
    c.reason = "metadata lacks config or hashes";
    return c;
  }
  if (config_hash(c.meta["config"]) != c.meta["config_hash"].get<std::string>()) {
    c.reason = "config hash does not match the recorded config";
  } else if (hex64(fnv1a64(body)) != c.meta["content_hash"].get<std::string>()) {
    c.reason = "CSV content does not match the metadata";
  } else if (!expected_config_hash.empty() && expected_config_hash != c.meta["config_hash"].get<std::string>()) {
    c.reason = "config hash differs from the expected one";
  } else {
    c.ok = true;
  }
  return c;
}

Profile load_profile(const std::string& csv_path) {
  const std::string meta_path = meta_path_for(csv_path);
  const auto check = verify_artifact(csv_path, meta_path);
  if (!check.ok) throw InvalidArgument(csv_path + ": " + check.reason);
  const json& m = check.meta;
  if (!m.contains("profile")) throw InvalidArgument(meta_path + ": not a profile artifact");
  const json& pj = m["profile"];

  Profile prof;
  prof.params = params_from_json(pj.at("params"));
  prof.lambda = pj.at("lambda").get<double>();
  prof.boundary_plus = pj.at("boundary_plus").get<double>();
  prof.boundary_minus = pj.at("boundary_minus").get<double>();
  prof.radius_is_rescaled = pj.at("radius_is_rescaled").get<bool>();
  prof.grid = make_grid(pj.at("radius").get<double>(), pj.at("n_cells").get<std::size_t>());

  const CsvTable t = read_csv(csv_path);
  if (t.header != std::vector<std::string>{"r", "f_plus", "f_minus"}) throw InvalidArgument(csv_path + ": unexpected header");
  if (t.rows.size() != prof.grid.n_cells()) throw InvalidArgument(csv_path + ": row count differs from n_cells");
  prof.f_plus.resize(t.rows.size());
  prof.f_minus.resize(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double r = std::stod(t.rows[i][0]);
    if (std::abs(r - prof.grid.node(i)) > 1e-12 * prof.grid.radius())
      throw InvalidArgument(csv_path + ": node radii do not match the recorded grid");
    prof.f_plus[i] = std::stod(t.rows[i][1]);
    prof.f_minus[i] = std::stod(t.rows[i][2]);
  }
  return prof;
}

}  // namespace vortex
