#pragma once

// Shared tokenizer for the line-oriented input formats: whitespace separated
// words, `key=value` options, `#` comments.

#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qcc/instance.hpp"

namespace qcc::detail {

struct Line {
  int number = 0;
  std::vector<std::string> words;            // positional words
  std::map<std::string, std::string> opts;  // key=value words

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("line " + std::to_string(number) + ": " + what);
  }

  const std::string& word(size_t i, const char* what) const {
    if (i >= words.size()) fail(std::string("missing ") + what);
    return words[i];
  }

  const std::string& opt(const std::string& key) const {
    auto it = opts.find(key);
    if (it == opts.end()) fail("missing " + key + "=");
    return it->second;
  }

  double number_opt(const std::string& key) const {
    return to_double(opt(key), key);
  }

  double number_opt(const std::string& key, double fallback) const {
    return opts.count(key) ? to_double(opts.at(key), key) : fallback;
  }

  int int_opt(const std::string& key) const { return to_int(opt(key), key); }

  double to_double(const std::string& s, const std::string& key) const {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) fail("bad number for " + key + ": '" + s + "'");
    return v;
  }

  int to_int(const std::string& s, const std::string& key) const {
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) fail("bad integer for " + key + ": '" + s + "'");
    return v;
  }

  // Rejects options other than `allowed`.
  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, value] : opts) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail("unknown option '" + key + "'");
    }
  }
};

inline std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream words(raw);
    Line line;
    line.number = number;
    std::string w;
    while (words >> w) {
      auto eq = w.find('=');
      if (eq == std::string::npos) {
        line.words.push_back(w);
        continue;
      }
      if (eq == 0) line.fail("empty option name in '" + w + "'");
      auto key = w.substr(0, eq);
      if (line.opts.count(key)) line.fail("duplicate option '" + key + "'");
      line.opts[key] = w.substr(eq + 1);
    }
    if (!line.words.empty() || !line.opts.empty()) out.push_back(std::move(line));
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

// Shortest text that parses back to the same double.
inline std::string format_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace qcc::detail
