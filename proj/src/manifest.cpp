#include "verse/manifest.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace verse {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot digest '" + path + "'");
  std::uint64_t hash = 0xcbf29ce484222325ull;  // FNV-1a 64
  char buffer[1 << 16];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ull;
    }
    if (got < static_cast<std::streamsize>(sizeof buffer)) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + hex;
}

std::string manifest_path_for(const std::string& primary_output) {
  return primary_output + ".manifest.json";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["command"] = manifest.command_line;
  j["config"] = manifest.config;
  j["seed"] = manifest.seed;
  j["inputs"] = manifest.input_digests;
  j["duration_seconds"] = manifest.duration_seconds;
  j["outputs"] = manifest.outputs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace verse
