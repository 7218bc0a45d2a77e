#pragma once

#include "verse/trainer.hpp"

#include <cstdint>
#include <string>

namespace verse {

enum class ModelFormat {
  Verse,  // "VRSE" magic, u32 version=1, u64 n, u32 d, then n*d LE float32
  Raw,    // headerless n*d LE float32, row-major
  Text,   // one node per line: "index v1 v2 ... vd", 6 significant digits
};

ModelFormat parse_model_format(const std::string& text);

// Writes model.w; with concat_context and a second-order model, writes
// [W || W'] (dimension 2d) instead. Binary formats round-trip bit-exactly.
void save_model(const EmbeddingModel& model, const std::string& path,
                ModelFormat format = ModelFormat::Verse,
                bool concat_context = false);

// Raw format needs the shape spelled out; the other formats carry it.
EmbeddingModel load_model(const std::string& path,
                          ModelFormat format = ModelFormat::Verse,
                          NodeId raw_nodes = 0, int raw_dim = 0);

}  // namespace verse
