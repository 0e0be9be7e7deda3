// Copyright 2026 the rawband authors.  Apache-2.0 (see LICENSE).
//
// Internal text parsing/formatting helpers shared by the file formats.  All
// floating-point output goes through fmt_g17 so serialization is locale-free
// and value-preserving.

#ifndef RAWBAND_SRC_TEXT_FORMAT_HPP
#define RAWBAND_SRC_TEXT_FORMAT_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rawband/types.hpp"

namespace rawband::detail {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view tok, const std::string& where) {
  tok = trim(tok);
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw DataError("bad-number",
                    where + ": cannot parse '" + std::string(tok) + "' as a real");
  }
  return v;
}

inline long long parse_int(std::string_view tok, const std::string& where) {
  tok = trim(tok);
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw DataError("bad-number", where + ": cannot parse '" +
                                      std::string(tok) + "' as an integer");
  }
  return v;
}

// Reads a strict key=value file: blank lines and lines starting with '#' are
// skipped, every other line must contain '=', keys must be unique.
inline std::map<std::string, std::string> read_kv_file(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw DataError("missing-file", "cannot open " + file.string());
  }
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("bad-line", file.string() + ":" + std::to_string(lineno) +
                                      ": expected key=value");
    }
    std::string key(trim(s.substr(0, eq)));
    std::string val(trim(s.substr(eq + 1)));
    if (key.empty()) {
      throw DataError("bad-key", file.string() + ":" + std::to_string(lineno) +
                                     ": empty key");
    }
    if (!kv.emplace(key, val).second) {
      throw DataError("duplicate-key",
                      file.string() + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

inline std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw DataError("write-failed", "cannot open " + file.string() +
                                        " for writing");
  }
  return out;
}

}  // namespace rawband::detail

#endif  // RAWBAND_SRC_TEXT_FORMAT_HPP
