/*
 * Copyright 2026 The damp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "damp/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <memory>

#include "damp/errors.hpp"
#include "damp/io.hpp"

namespace fs = std::filesystem;

namespace damp {

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw Error("sha256 failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

namespace {

nlohmann::json entry(const std::string& shown, const std::string& real, const char* role) {
  return {{"path", shown},
          {"role", role},
          {"sha256", sha256_file(real)},
          {"bytes", static_cast<std::uint64_t>(fs::file_size(real))}};
}

}  // namespace

void write_manifest(const std::string& dir, const std::vector<std::string>& outputs,
                    const std::vector<std::string>& inputs, const nlohmann::json& extra) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& in : inputs) files.push_back(entry(fs::absolute(in).lexically_normal().string(), in, "input"));
  for (const auto& out : outputs) files.push_back(entry(out, (fs::path(dir) / out).string(), "output"));
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  nlohmann::json m = {{"schema_version", 1},
                      {"created_utc", stamp},
                      {"files", files},
                      {"files_sha256", sha256_hex(files.dump())}};
  if (!extra.is_null()) m["extra"] = extra;
  write_file_atomic((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

std::vector<std::string> verify_manifest(const std::string& dir) {
  std::vector<std::string> bad;
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_file((fs::path(dir) / "manifest.json").string()));
  } catch (const std::exception& e) {
    return {std::string("manifest unreadable: ") + e.what()};
  }
  if (!m.contains("files") || !m.contains("files_sha256")) return {"manifest is missing fields"};
  if (sha256_hex(m["files"].dump()) != m["files_sha256"].get<std::string>())
    bad.push_back("manifest file list was modified");
  for (const auto& f : m["files"]) {
    const std::string p = f.at("path");
    const fs::path real = f.at("role") == "input" ? fs::path(p) : fs::path(dir) / p;
    if (!fs::exists(real)) {
      bad.push_back(p + ": missing");
      continue;
    }
    if (sha256_file(real.string()) != f.at("sha256").get<std::string>())
      bad.push_back(p + ": hash mismatch");
  }
  return bad;
}

}  // namespace damp
