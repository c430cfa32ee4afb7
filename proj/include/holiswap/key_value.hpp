#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "holiswap/error.hpp"

namespace holiswap {

// Flat `key = value` configuration file. `#` starts a comment; blank lines
// are skipped; later keys override earlier ones.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, std::string source = "<config>") {
    KeyValueFile kv;
    kv.source_ = std::move(source);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::string_view line = trim(raw);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw input_error(kv.source_ + ":" + std::to_string(line_no) + ": expected key = value");
      std::string key(trim(line.substr(0, eq)));
      std::string value(trim(line.substr(eq + 1)));
      if (key.empty())
        throw input_error(kv.source_ + ":" + std::to_string(line_no) + ": empty key");
      kv.entries_[key] = {std::move(value), line_no};
    }
    return kv;
  }

  static KeyValueFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    return parse(in, path);
  }

  const std::string& source() const { return source_; }
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  std::optional<double> get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return to_double(*v, where(key));
  }

  std::optional<std::uint64_t> get_uint(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return to_uint(*v, where(key));
  }

  std::optional<std::vector<double>> get_doubles(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    std::vector<double> out;
    for (auto item : split(*v, ',')) out.push_back(to_double(item, where(key)));
    return out;
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : entries_) out.push_back(k);
    return out;
  }

  std::string where(const std::string& key) const {
    auto it = entries_.find(key);
    return source_ + ":" + (it == entries_.end() ? std::string("?") : std::to_string(it->second.line)) +
           " (" + key + ")";
  }

  static std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto pos = s.find(sep, start);
      out.emplace_back(trim(s.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return out;
  }

  static double to_double(std::string_view s, const std::string& ctx) {
    s = trim(s);
    double v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
      throw input_error(ctx + ": not a number: '" + std::string(s) + "'");
    return v;
  }

  static std::uint64_t to_uint(std::string_view s, const std::string& ctx) {
    s = trim(s);
    std::uint64_t v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
      throw input_error(ctx + ": not an unsigned integer: '" + std::string(s) + "'");
    return v;
  }

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };
  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace holiswap
