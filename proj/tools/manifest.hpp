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

#ifndef STOCHEVO_TOOLS_MANIFEST_HPP
#define STOCHEVO_TOOLS_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stochevo/io/json.hpp"

namespace stochevo::cli {

struct OutputRecord {
  std::string path;
  std::string sha256;
};

/// Everything needed to re-run a command and check its artifacts.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;  // merged option values, as text
  std::optional<std::uint64_t> seed;
  std::string version;
  std::vector<OutputRecord> outputs;
};

io::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const io::json& doc);

std::string sha256_hex(std::string_view data);

std::string read_file(const std::string& path);

/// Writes every file to a temporary sibling first and renames them into place
/// only once all writes succeeded. Throws io_error; on failure no target file
/// is touched.
void commit_files(const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace stochevo::cli

#endif  // STOCHEVO_TOOLS_MANIFEST_HPP
