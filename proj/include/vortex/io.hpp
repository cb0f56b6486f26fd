#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortex/model.hpp"
#include "vortex/profile.hpp"
#include "vortex/spectral.hpp"

namespace vortex {

using json = nlohmann::json;

/// %.17g, enough for a lossless double round trip.
std::string format_double(double x);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t h);

/// Hash of the canonical (key-sorted, compact) dump of a config object.
std::string config_hash(const json& config);

json load_json_file(const std::string& path);  // FileNotFound, InvalidArgument on bad JSON
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

GLParams params_from_json(const json& j);  // keys a_plus, a_minus, b, t_plus, t_minus
BECParams bec_from_json(const json& j);    // keys m1, m2, g1, g2, g12, mu1, mu2, hbar
json to_json(const GLParams& p);
json to_json(const BECParams& p);

/// Simple table with a fixed header; cells are preformatted strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

CsvTable profile_table(const Profile& prof);
CsvTable eigenvector_table(const RadialGrid& grid, const SpectralVector& v);
CsvTable read_csv(const std::string& path);

/// "prof.csv" -> "prof.meta.json".
std::string meta_path_for(const std::string& csv_path);

/// Writes the CSV and its sidecar. The sidecar carries the config, its hash,
/// the hash of the CSV bytes and any extra fields.
void write_artifact(const std::string& csv_path, const CsvTable& table, const json& config, const json& extra = {});

struct ArtifactCheck {
  bool ok = false;
  std::string reason;  // empty when ok
  json meta;
};

/// Checks the sidecar against the CSV bytes and, when non-empty, an expected config hash.
ArtifactCheck verify_artifact(const std::string& csv_path, const std::string& meta_path,
                              const std::string& expected_config_hash = {});

/// Rebuilds a profile from a CSV written by profile_table plus its sidecar.
Profile load_profile(const std::string& csv_path);

}  // namespace vortex
