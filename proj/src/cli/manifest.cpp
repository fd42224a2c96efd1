#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>

#include "ctk/cli.hpp"

namespace ctk::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json manifest_json(const Manifest& m) {
  json hashes = json::object();
  for (const auto& p : m.inputs) hashes[p] = sha256_file(p);
  return json{{"command", m.command},
              {"argv", m.argv},
              {"params", m.params},
              {"version", kVersion},
              {"timestamps", {{"started", m.started}, {"finished", utc_now()}}},
              {"input_hashes", hashes}};
}

}  // namespace ctk::cli
