#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace lingshift::cli {

// Hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

struct ManifestRecord {
  std::string artifact;
  std::string sha256;
};

// run_manifest.tsv: "artifact<TAB>path<TAB>sha256" per produced file, paths
// relative to the output directory, sorted by path.
class RunManifest {
 public:
  static constexpr const char* kFileName = "run_manifest.tsv";

  // Missing file means an empty manifest.
  static RunManifest load(const std::filesystem::path& out_dir);

  void record(const std::string& artifact, const std::string& relative_path,
              std::string sha256);
  const std::map<std::string, ManifestRecord>& records() const noexcept {
    return records_;
  }
  // Drops records whose file is gone, then writes atomically.
  void save(const std::filesystem::path& out_dir);

 private:
  std::map<std::string, ManifestRecord> records_;
};

// Collects a command's outputs in a staging directory and moves them into
// place only on commit(). Anything uncommitted is removed on destruction.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path out_dir);
  ~ArtifactWriter();
  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;

  void stage(const std::string& artifact, const std::filesystem::path& relative,
             const std::function<void(std::ostream&)>& write);
  // Renames staged files into place and updates the run manifest.
  void commit();
  const std::filesystem::path& out_dir() const noexcept { return out_dir_; }

 private:
  struct Staged {
    std::string artifact;
    std::filesystem::path relative;
  };

  void discard() noexcept;

  std::filesystem::path out_dir_;
  std::filesystem::path staging_;
  bool created_out_dir_ = false;
  bool committed_ = false;
  std::vector<Staged> staged_;
};

}  // namespace lingshift::cli
