#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace adprompt {

// `key = value` lines; blank lines and lines starting with '#' are ignored.
// Keys are checked against an allow-list when one is given.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, const std::set<std::string>& allowed = {});

  bool has(std::string_view key) const { return values_.find(std::string(key)) != values_.end(); }
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  int get_int(std::string_view key, int fallback) const;
  std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
  double get_double(std::string_view key, double fallback) const;
  // Comma-separated list; empty when the key is absent.
  std::vector<std::string> get_list(std::string_view key) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace adprompt
