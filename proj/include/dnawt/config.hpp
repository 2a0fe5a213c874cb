#pragma once

// key=value experiment configuration and parameter-grid expansion.

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dnawt/errors.hpp"

namespace dnawt {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] inline void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

class Config {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  // Later sources override earlier ones.
  void merge(const Config& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
  }

  static Config parse(std::istream& in, const std::string& origin = "config") {
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos)
        config_error(origin + ":" + std::to_string(lineno) + ": expected key=value, got '" + body + "'");
      const std::string key = trim(std::string_view(body).substr(0, eq));
      if (key.empty()) config_error(origin + ":" + std::to_string(lineno) + ": empty key");
      c.set(key, trim(std::string_view(body).substr(eq + 1)));
    }
    return c;
  }

  static Config load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  void check_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
      if (!allowed.count(k)) config_error("unknown key '" + k + "'");
    }
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_double(key, it->second);
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_u64(key, it->second);
  }

  double get_probability(const std::string& key, double fallback) const {
    const double p = get_double(key, fallback);
    if (!(p >= 0.0 && p <= 1.0)) config_error(key + " must be a probability, got " + get_string(key, ""));
    return p;
  }

  static double parse_double(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      config_error(key + ": '" + text + "' is not a finite number");
    return v;
  }

  // Accepts plain integers and integral decimals such as "1e4" or "16.0".
  static std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (auto [ptr, ec] = std::from_chars(first, last, v); ec == std::errc() && ptr == last) return v;
    const double d = parse_double(key, text);
    if (d < 0.0 || d != std::floor(d) || d > 9.007199254740992e15)
      config_error(key + ": '" + text + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(d);
  }

 private:
  std::map<std::string, std::string> values_;
};

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

inline std::string format_grid_value(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// "key=start:stop:count;key2=a,b,c" -> axes in the given order.
inline std::vector<GridAxis> parse_grid(const std::string& spec) {
  std::vector<GridAxis> axes;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) config_error("grid axis '" + item + "' lacks '='");
    GridAxis axis{trim(std::string_view(item).substr(0, eq)), {}};
    const std::string range = trim(std::string_view(item).substr(eq + 1));
    if (axis.key.empty() || range.empty()) config_error("grid axis '" + item + "' is incomplete");
    if (std::count(range.begin(), range.end(), ':') == 2) {
      const auto c1 = range.find(':');
      const auto c2 = range.find(':', c1 + 1);
      const double start = Config::parse_double(axis.key, range.substr(0, c1));
      const double stop = Config::parse_double(axis.key, range.substr(c1 + 1, c2 - c1 - 1));
      const std::uint64_t count = Config::parse_u64(axis.key, range.substr(c2 + 1));
      if (count == 0) config_error("grid axis '" + axis.key + "' has zero points");
      for (std::uint64_t i = 0; i < count; ++i) {
        const double v = count == 1 ? start
                                    : (i + 1 == count ? stop
                                                      : start + (stop - start) * static_cast<double>(i) /
                                                                    static_cast<double>(count - 1));
        axis.values.push_back(format_grid_value(v));
      }
    } else {
      std::stringstream vs(range);
      std::string v;
      while (std::getline(vs, v, ',')) {
        v = trim(v);
        if (v.empty()) config_error("grid axis '" + axis.key + "' has an empty value");
        axis.values.push_back(v);
      }
    }
    for (const auto& a : axes) {
      if (a.key == axis.key) config_error("grid axis '" + axis.key + "' given twice");
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

/// Cartesian product of the axes applied over `base`; the first axis varies slowest.
inline std::vector<Config> expand_grid(const Config& base, const std::vector<GridAxis>& axes) {
  std::vector<Config> out{base};
  for (const auto& axis : axes) {
    std::vector<Config> next;
    next.reserve(out.size() * axis.values.size());
    for (const auto& c : out) {
      for (const auto& v : axis.values) {
        Config d = c;
        d.set(axis.key, v);
        next.push_back(std::move(d));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace dnawt
