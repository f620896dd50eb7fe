#include "phonon/manifest.hpp"

#include "phonon/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>

#ifndef PHONON_VERSION
#define PHONON_VERSION "0.0.0"
#endif

namespace phonon {
namespace {

using json = nlohmann::ordered_json;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("sha256: digest init failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw std::runtime_error("sha256: update failed");
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md, &len) != 1) throw std::runtime_error("sha256: final failed");
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof buf, "%02x", md[i]);
      out += buf;
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof buf);
    h.update(buf, static_cast<std::size_t>(f.gcount()));
  }
  return h.hex();
}

std::string grid_fingerprint(const PhaseSpaceGrid& g) { return sha256_hex(g.fingerprint()); }

std::string software_version() { return PHONON_VERSION; }

RunManifest::RunManifest(std::string command, std::string resolved_config_json)
    : command_(std::move(command)), config_(std::move(resolved_config_json)) {}

void RunManifest::add_grid(const PhaseSpaceGrid& g) {
  const std::string fp = grid_fingerprint(g);
  for (const auto& e : grids_)
    if (e.fingerprint == fp) return;
  grids_.push_back({g.epsilon(), g.dx(), g.dt(), g.x_max(), g.nu_max(), g.nx(), g.n_mu(), g.n_omega(), fp});
}

void RunManifest::emit(const CsvTable& table, const std::filesystem::path& dir, const std::string& relative) {
  const auto p = dir / relative;
  std::filesystem::create_directories(p.parent_path());
  table.write(p);
  files_.push_back({relative, sha256_file(p), static_cast<long>(table.rows())});
}

void RunManifest::emit_text(const std::string& text, const std::filesystem::path& dir, const std::string& relative) {
  const auto p = dir / relative;
  std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
  f.close();
  files_.push_back({relative, sha256_file(p), -1});
}

void RunManifest::set_status(std::string status, std::string message) {
  status_ = std::move(status);
  message_ = std::move(message);
}

void RunManifest::add_check(const std::string& name, bool ok, const std::string& detail) {
  checks_.push_back({name, ok, detail});
}

std::string RunManifest::str() const {
  json m;
  m["tool"] = "phonon";
  m["version"] = software_version();
  m["command"] = command_;
  m["status"] = status_;
  if (!message_.empty()) m["message"] = message_;
  m["wall_time_s"] = wall_time_;
  m["config"] = json::parse(config_);
  m["profiles"] = {{"bump", "exp(-1/(y(1-y))) on (0,1), normalized to unit mass"},
                   {"psi", "same bump recentred to (-1,1)"}};
  json grids = json::array();
  for (const auto& g : grids_)
    grids.push_back({{"epsilon", g.epsilon},
                     {"x_max", g.x_max},
                     {"nx", g.nx},
                     {"dx", g.dx},
                     {"dt", g.dt},
                     {"nu_max", g.nu_max},
                     {"n_mu", g.n_mu},
                     {"n_omega", g.n_omega},
                     {"fingerprint", g.fingerprint}});
  m["grids"] = grids;
  json checks = json::array();
  for (const auto& c : checks_) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  m["checks"] = checks;
  if (!info_.empty()) m["info"] = info_;
  json files = json::array();
  for (const auto& f : files_) {
    json e = {{"path", f.path}, {"sha256", f.sha256}};
    if (f.rows >= 0) e["rows"] = f.rows;
    files.push_back(e);
  }
  m["files"] = files;
  return m.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  f << str();
}

}  // namespace phonon
