#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace verse {

// Every CLI run writes one manifest next to its primary output so results
// stay reconstructible from disk.
struct RunManifest {
  std::string command_line;
  std::map<std::string, std::string> config;  // all defaults materialized
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a-64 hex
  double duration_seconds = 0.0;
  std::vector<std::string> outputs;
};

// FNV-1a 64-bit digest of a file's bytes, hex-encoded.
std::string file_digest(const std::string& path);

// Manifest path convention: "<primary_output>.manifest.json".
std::string manifest_path_for(const std::string& primary_output);

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace verse
