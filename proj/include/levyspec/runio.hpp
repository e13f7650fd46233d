#ifndef LEVYSPEC_RUNIO_HPP
#define LEVYSPEC_RUNIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace levyspec::io {

/// FNV-1a 64-bit over bytes; stable content checksum for manifests.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t value);

struct Column {
  std::string header;
  std::vector<double> values;
};
/// Writes a CSV with full double round-trip precision; returns the path.
std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::string& filename,
                                const std::vector<Column>& columns);

std::filesystem::path write_text(const std::filesystem::path& dir,
                                 const std::string& filename,
                                 const std::string& body);

/// Run manifest: config hash, version, timestamp and emitted files with
/// checksums. Rerunning with identical config and seed reproduces the
/// same checksums.
class Manifest {
 public:
  Manifest(std::string config_canonical, std::string version);
  void add_file(const std::filesystem::path& path);
  void write(const std::filesystem::path& dir);

 private:
  std::string config_hash_;
  std::string version_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace levyspec::io

#endif
