#include "verse/model_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian");

namespace verse {

namespace {

constexpr char kMagic[4] = {'V', 'R', 'S', 'E'};
constexpr std::uint32_t kVersion = 1;

EmbeddingMatrix output_matrix(const EmbeddingModel& model,
                              bool concat_context) {
  if (concat_context && model.w_context) {
    EmbeddingMatrix out(model.w.rows(), model.w.cols() * 2);
    out << model.w, *model.w_context;
    return out;
  }
  return model.w;
}

}  // namespace

ModelFormat parse_model_format(const std::string& text) {
  if (text == "verse") return ModelFormat::Verse;
  if (text == "raw") return ModelFormat::Raw;
  if (text == "text") return ModelFormat::Text;
  throw std::invalid_argument("unknown format '" + text +
                              "' (expected verse, raw, text)");
}

void save_model(const EmbeddingModel& model, const std::string& path,
                ModelFormat format, bool concat_context) {
  const EmbeddingMatrix out = output_matrix(model, concat_context);
  const std::uint64_t n = static_cast<std::uint64_t>(out.rows());
  const std::uint32_t d = static_cast<std::uint32_t>(out.cols());

  if (format == ModelFormat::Text) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write model '" + path + "'");
    char buf[64];
    for (std::uint64_t i = 0; i < n; ++i) {
      file << i;
      for (std::uint32_t j = 0; j < d; ++j) {
        std::snprintf(buf, sizeof buf, " %.6g", out(i, j));
        file << buf;
      }
      file << '\n';
    }
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
    return;
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write model '" + path + "'");
  if (format == ModelFormat::Verse) {
    file.write(kMagic, 4);
    file.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    file.write(reinterpret_cast<const char*>(&n), sizeof n);
    file.write(reinterpret_cast<const char*>(&d), sizeof d);
  }
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(n * d * sizeof(float)));
  if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

namespace {

EmbeddingModel read_payload(std::ifstream& file, const std::string& path,
                            std::uint64_t n, std::uint32_t d) {
  if (n == 0 || d == 0)
    throw std::runtime_error("model '" + path + "' declares an empty matrix");
  EmbeddingModel model;
  model.w.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const std::streamsize bytes =
      static_cast<std::streamsize>(n * d * sizeof(float));
  file.read(reinterpret_cast<char*>(model.w.data()), bytes);
  if (file.gcount() != bytes)
    throw std::runtime_error("model '" + path + "' truncated: expected " +
                             std::to_string(bytes) + " payload bytes, got " +
                             std::to_string(file.gcount()));
  if (file.peek() != std::ifstream::traits_type::eof())
    throw std::runtime_error("model '" + path +
                             "' has trailing bytes beyond the declared size");
  return model;
}

EmbeddingModel load_text(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open model '" + path + "'");
  std::vector<std::vector<float>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::uint64_t index;
    if (!(fields >> index) || index + 1 != line_no)
      throw std::runtime_error("model '" + path + "' line " +
                               std::to_string(line_no) +
                               ": expected node index " +
                               std::to_string(line_no - 1));
    std::vector<float> row;
    float value;
    while (fields >> value) row.push_back(value);
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("model '" + path + "' line " +
                               std::to_string(line_no) +
                               ": inconsistent dimension");
    if (row.empty())
      throw std::runtime_error("model '" + path + "' line " +
                               std::to_string(line_no) + ": no values");
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw std::runtime_error("model '" + path + "' is empty");
  EmbeddingModel model;
  model.w.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      model.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return model;
}

}  // namespace

EmbeddingModel load_model(const std::string& path, ModelFormat format,
                          NodeId raw_nodes, int raw_dim) {
  if (format == ModelFormat::Text) return load_text(path);

  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open model '" + path + "'");

  if (format == ModelFormat::Raw) {
    if (raw_nodes == 0 || raw_dim <= 0)
      throw std::invalid_argument(
          "raw format needs explicit node count and dimension");
    return read_payload(file, path, raw_nodes,
                        static_cast<std::uint32_t>(raw_dim));
  }

  char magic[4];
  std::uint32_t version = 0, d = 0;
  std::uint64_t n = 0;
  file.read(magic, 4);
  file.read(reinterpret_cast<char*>(&version), sizeof version);
  file.read(reinterpret_cast<char*>(&n), sizeof n);
  file.read(reinterpret_cast<char*>(&d), sizeof d);
  if (!file || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("model '" + path + "' has no VRSE header");
  if (version != kVersion)
    throw std::runtime_error("model '" + path + "' has version " +
                             std::to_string(version) + ", expected " +
                             std::to_string(kVersion));
  return read_payload(file, path, n, d);
}

}  // namespace verse
