/* Copyright 2026 The stochevo Authors
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
 *
 */

#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <system_error>

#include "stochevo/errors.hpp"

namespace stochevo::cli {

namespace fs = std::filesystem;

io::json to_json(const RunManifest& manifest) {
  io::json outputs = io::json::array();
  for (const auto& out : manifest.outputs) outputs.push_back({{"path", out.path}, {"sha256", out.sha256}});
  io::json params = io::json::object();
  for (const auto& [key, value] : manifest.params) params[key] = value;
  return {
      {"command", manifest.command},
      {"params", params},
      {"seed", manifest.seed ? io::json(*manifest.seed) : io::json(nullptr)},
      {"version", manifest.version},
      {"outputs", outputs},
  };
}

RunManifest manifest_from_json(const io::json& doc) {
  try {
    RunManifest m;
    m.command = doc.at("command").get<std::string>();
    for (const auto& [key, value] : doc.at("params").items()) m.params[key] = value.get<std::string>();
    if (!doc.at("seed").is_null()) m.seed = doc.at("seed").get<std::uint64_t>();
    m.version = doc.at("version").get<std::string>();
    for (const auto& out : doc.at("outputs")) {
      m.outputs.push_back({out.at("path").get<std::string>(), out.at("sha256").get<std::string>()});
    }
    return m;
  } catch (const io::json::exception& e) {
    throw validation_error(std::string("malformed manifest: ") + e.what());
  }
}

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw invariant_error("sha256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("error reading " + path);
  return ss.str();
}

void commit_files(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    const std::string tmp = path + ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      cleanup();
      throw io_error("cannot write " + path);
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw io_error("cannot move " + temps[i] + " into place: " + ec.message());
    }
  }
}

}  // namespace stochevo::cli
