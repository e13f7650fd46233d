#include "levyspec/runio.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "levyspec/errors.hpp"

namespace levyspec::io {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex << value;
  return os.str();
}

std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::string& filename,
                                const std::vector<Column>& columns) {
  if (columns.empty()) throw Error("write_csv: no columns");
  size_t rows = columns.front().values.size();
  for (const auto& c : columns)
    if (c.values.size() != rows) throw Error("write_csv: ragged columns");

  std::ostringstream os;
  os.precision(17);
  for (size_t c = 0; c < columns.size(); ++c)
    os << columns[c].header << (c + 1 < columns.size() ? "," : "\n");
  for (size_t rIdx = 0; rIdx < rows; ++rIdx)
    for (size_t c = 0; c < columns.size(); ++c)
      os << columns[c].values[rIdx] << (c + 1 < columns.size() ? "," : "\n");
  return write_text(dir, filename, os.str());
}

std::filesystem::path write_text(const std::filesystem::path& dir,
                                 const std::string& filename,
                                 const std::string& body) {
  std::filesystem::create_directories(dir);
  auto path = dir / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
  return path;
}

Manifest::Manifest(std::string config_canonical, std::string version)
    : config_hash_(hex64(fnv1a(config_canonical))), version_(std::move(version)) {}

void Manifest::add_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  files_.emplace_back(path.filename().string(), hex64(fnv1a(ss.str())));
}

void Manifest::write(const std::filesystem::path& dir) {
  nlohmann::json j;
  j["config_hash"] = config_hash_;
  j["version"] = version_;
  j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  auto files = nlohmann::json::array();
  for (const auto& [name, sum] : files_)
    files.push_back({{"file", name}, {"checksum", sum}});
  j["files"] = files;
  write_text(dir, "run_manifest.json", j.dump(2) + "\n");
}

}  // namespace levyspec::io
