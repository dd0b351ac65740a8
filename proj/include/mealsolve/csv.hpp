// Copyright 2026 The mealsolve Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mealsolve::csv {

// RFC 4180-ish: comma separated, double quotes around fields that need them,
// "" escapes a quote inside a quoted field. CRLF and LF both accepted.
inline std::vector<std::vector<std::string>> parse(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"':
                quoted = true;
                any = true;
                break;
            case ',':
                end_field();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                if (any || !field.empty() || !record.empty()) end_record();
                break;
            default:
                field += ch;
                any = true;
                break;
        }
    }
    if (quoted) throw std::runtime_error("csv: unterminated quoted field");
    if (any || !field.empty() || !record.empty()) end_record();
    return records;
}

inline std::vector<std::vector<std::string>> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

inline std::string escape(const std::string& field) {
    const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos ||
                              (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string join_record(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += escape(fields[i]);
    }
    line += '\n';
    return line;
}

inline void write_file(const std::string& path, const std::vector<std::vector<std::string>>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& rec : records) out << join_record(rec);
}

/// Shortest representation that round-trips through a double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Locale-independent strict parse; the whole field must be consumed.
inline double parse_double(const std::string& field, const std::string& where) {
    std::size_t begin = field.find_first_not_of(" \t");
    std::size_t end = field.find_last_not_of(" \t");
    if (begin == std::string::npos) throw std::runtime_error(where + ": empty numeric field");
    double value = 0.0;
    const char* first = field.data() + begin;
    const char* last = field.data() + end + 1;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::runtime_error(where + ": cannot parse number '" + field + "'");
    return value;
}

inline bool is_blank(const std::string& field) {
    return field.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace mealsolve::csv
