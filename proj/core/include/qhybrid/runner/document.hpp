// Copyright 2026 The qhybrid Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Line-oriented key/value documents with one level of sections. This is
 * the subset of YAML used by run configs and result files:
 *
 *     # comment
 *     model:
 *       encoder_units: 15
 *       layout: u1-all, u2-even, u1-all
 *
 * A section header is an unindented `name:` with nothing after the colon.
 * Entries are indented `key: value` lines. Values may be wrapped in single
 * or double quotes, and a `[a, b]` flow list is read as "a, b". Trailing
 * `# ...` comments are stripped from unquoted values.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qhybrid {

class Document {
  public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        int line{0};
    };

    /// Throws ConfigError with the offending line number.
    static Document parse(std::string_view text);

    [[nodiscard]] const std::vector<Entry> &entries() const noexcept { return entries_; }
    [[nodiscard]] std::optional<std::string> find(std::string_view section,
                                                  std::string_view key) const;

    void set(std::string section, std::string key, std::string value);

    /// Sections in insertion order, keys in insertion order.
    [[nodiscard]] std::string to_string() const;

  private:
    std::vector<Entry> entries_;
};

/// Shortest representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Typed accessors over one entry; errors carry "section.key".
[[nodiscard]] std::uint64_t parse_uint(std::string_view path, std::string_view text);
[[nodiscard]] double parse_real(std::string_view path, std::string_view text);

} // namespace qhybrid
