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
#include "qhybrid/runner/document.hpp"

#include <charconv>
#include <cmath>

#include "qhybrid/errors.hpp"

namespace qhybrid {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_identifier(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

std::string line_error(int line, const std::string &what) {
    return "line " + std::to_string(line) + ": " + what;
}

std::string unwrap_value(std::string_view raw, int line) {
    std::string_view v = trim(raw);
    if (!v.empty() && (v.front() == '"' || v.front() == '\'')) {
        const char quote = v.front();
        const auto close = v.find(quote, 1);
        if (close == std::string_view::npos) {
            throw ConfigError(line_error(line, "unterminated quoted value"));
        }
        const std::string_view rest = trim(v.substr(close + 1));
        if (!rest.empty() && rest.front() != '#') {
            throw ConfigError(line_error(line, "unexpected text after quoted value"));
        }
        return std::string{v.substr(1, close - 1)};
    }
    if (const auto hash = v.find(" #"); hash != std::string_view::npos) {
        v = trim(v.substr(0, hash));
    }
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') {
            throw ConfigError(line_error(line, "unterminated flow list"));
        }
        v = trim(v.substr(1, v.size() - 2));
    }
    return std::string{v};
}

} // namespace

Document Document::parse(std::string_view text) {
    Document doc;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const std::string_view content = trim(line);
        if (content.empty() || content.front() == '#' || content == "---") {
            if (nl == std::string_view::npos) {
                break;
            }
            continue;
        }
        const bool indented = line.front() == ' ' || line.front() == '\t';
        const auto colon = content.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError(line_error(line_no, "expected 'key: value'"));
        }
        const std::string_view key = trim(content.substr(0, colon));
        if (!is_identifier(key)) {
            throw ConfigError(line_error(line_no, "invalid key '" + std::string{key} + "'"));
        }
        const std::string_view rest = trim(content.substr(colon + 1));
        if (!indented) {
            if (!rest.empty() && rest.front() != '#') {
                throw ConfigError(line_error(
                    line_no, "top-level entry '" + std::string{key} +
                                 "' must be a section header"));
            }
            section = std::string{key};
        } else {
            if (section.empty()) {
                throw ConfigError(line_error(line_no, "indented entry outside a section"));
            }
            if (doc.find(section, key)) {
                throw ConfigError(line_error(line_no, "duplicate key '" + section + "." +
                                                          std::string{key} + "'"));
            }
            doc.entries_.push_back(
                Entry{section, std::string{key}, unwrap_value(rest, line_no), line_no});
        }
        if (nl == std::string_view::npos) {
            break;
        }
    }
    return doc;
}

std::optional<std::string> Document::find(std::string_view section,
                                          std::string_view key) const {
    for (const auto &e : entries_) {
        if (e.section == section && e.key == key) {
            return e.value;
        }
    }
    return std::nullopt;
}

void Document::set(std::string section, std::string key, std::string value) {
    for (auto &e : entries_) {
        if (e.section == section && e.key == key) {
            e.value = std::move(value);
            return;
        }
    }
    entries_.push_back(Entry{std::move(section), std::move(key), std::move(value), 0});
}

std::string Document::to_string() const {
    std::vector<std::string> sections;
    for (const auto &e : entries_) {
        bool seen = false;
        for (const auto &s : sections) {
            seen = seen || s == e.section;
        }
        if (!seen) {
            sections.push_back(e.section);
        }
    }
    std::string out;
    for (const auto &s : sections) {
        out += s + ":\n";
        for (const auto &e : entries_) {
            if (e.section != s) {
                continue;
            }
            const bool needs_quotes =
                e.value.find('#') != std::string::npos ||
                (!e.value.empty() &&
                 (e.value.front() == '[' || e.value.front() == '"' ||
                  e.value.front() == '\'' || e.value.front() == ' ' ||
                  e.value.back() == ' '));
            out += "  " + e.key + ": " + (needs_quotes ? "\"" + e.value + "\"" : e.value) +
                   "\n";
        }
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        return std::to_string(value);
    }
    return std::string(buf, ptr);
}

std::uint64_t parse_uint(std::string_view path, std::string_view text) {
    std::uint64_t value = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw ConfigError(std::string{path} + ": expected a non-negative integer, got '" +
                          std::string{text} + "'");
    }
    return value;
}

double parse_real(std::string_view path, std::string_view text) {
    double value = 0.0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError(std::string{path} + ": expected a finite number, got '" +
                          std::string{text} + "'");
    }
    return value;
}

} // namespace qhybrid
