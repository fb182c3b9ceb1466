#include "artifacts.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <unistd.h>

#include "lingshift/error.hpp"

namespace lingshift::cli {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("error reading " + path.string());
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

RunManifest RunManifest::load(const fs::path& out_dir) {
  RunManifest manifest;
  std::ifstream in(out_dir / kFileName);
  if (!in) return manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string artifact, path, sha;
    if (!std::getline(fields, artifact, '\t') || !std::getline(fields, path, '\t') ||
        !std::getline(fields, sha)) {
      throw ParseError("malformed run manifest entry", line_no);
    }
    manifest.records_[path] = {artifact, sha};
  }
  return manifest;
}

void RunManifest::record(const std::string& artifact, const std::string& relative_path,
                         std::string sha256) {
  records_[relative_path] = {artifact, std::move(sha256)};
}

void RunManifest::save(const fs::path& out_dir) {
  std::erase_if(records_, [&](const auto& kv) { return !fs::exists(out_dir / kv.first); });
  const fs::path target = out_dir / kFileName;
  const fs::path temp = out_dir / (std::string(kFileName) + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    for (const auto& [path, rec] : records_) {
      out << rec.artifact << '\t' << path << '\t' << rec.sha256 << '\n';
    }
    if (!out) throw IoError("cannot write " + temp.string());
  }
  fs::rename(temp, target);
}

ArtifactWriter::ArtifactWriter(fs::path out_dir) : out_dir_(std::move(out_dir)) {}

ArtifactWriter::~ArtifactWriter() {
  if (!committed_) discard();
}

void ArtifactWriter::stage(const std::string& artifact, const fs::path& relative,
                           const std::function<void(std::ostream&)>& write) {
  std::error_code ec;
  if (staging_.empty()) {
    if (!fs::exists(out_dir_)) {
      fs::create_directories(out_dir_, ec);
      if (ec) throw IoError("cannot create output directory " + out_dir_.string());
      created_out_dir_ = true;
    }
    staging_ = out_dir_ / (".staging-" + std::to_string(::getpid()));
    fs::remove_all(staging_, ec);
    fs::create_directories(staging_, ec);
    if (ec) throw IoError("cannot write to output directory " + out_dir_.string());
  }
  const fs::path temp = staging_ / relative;
  fs::create_directories(temp.parent_path(), ec);
  std::ofstream out(temp, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (out_dir_ / relative).string());
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing " + (out_dir_ / relative).string());
  staged_.push_back({artifact, relative});
}

void ArtifactWriter::commit() {
  RunManifest manifest = RunManifest::load(out_dir_);
  for (const auto& s : staged_) {
    const fs::path target = out_dir_ / s.relative;
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    fs::rename(staging_ / s.relative, target, ec);
    if (ec) throw IoError("cannot move " + target.string() + " into place: " + ec.message());
    manifest.record(s.artifact, s.relative.generic_string(), sha256_file(target));
  }
  committed_ = true;
  if (!staging_.empty()) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
  if (!staged_.empty()) manifest.save(out_dir_);
}

void ArtifactWriter::discard() noexcept {
  std::error_code ec;
  if (!staging_.empty()) fs::remove_all(staging_, ec);
  if (created_out_dir_ && fs::is_empty(out_dir_, ec)) fs::remove(out_dir_, ec);
}

}  // namespace lingshift::cli
