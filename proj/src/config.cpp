#include "adprompt/config.hpp"

#include <charconv>

#include "adprompt/error.hpp"
#include "adprompt/text.hpp"

namespace adprompt {
namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ParseError("config key '" + std::string(key) + "': bad number '" + std::string(value) +
                     "'");
  }
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view input, const std::set<std::string>& allowed) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < input.size()) {
    auto end = input.find('\n', pos);
    if (end == std::string_view::npos) end = input.size();
    const auto line = text::trim(input.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    if (!allowed.empty() && !allowed.contains(key)) {
      throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw ParseError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string_view fallback) const {
  return get(key).value_or(std::string(fallback));
}

int KeyValueConfig::get_int(std::string_view key, int fallback) const {
  const auto v = get(key);
  return v ? parse_number<int>(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(std::string_view key, std::uint64_t fallback) const {
  const auto v = get(key);
  return v ? parse_number<std::uint64_t>(key, *v) : fallback;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  return v ? parse_number<double>(key, *v) : fallback;
}

std::vector<std::string> KeyValueConfig::get_list(std::string_view key) const {
  std::vector<std::string> out;
  const auto v = get(key);
  if (!v) return out;
  std::size_t start = 0;
  while (start <= v->size()) {
    auto comma = v->find(',', start);
    if (comma == std::string::npos) comma = v->size();
    const auto item = text::trim(std::string_view(*v).substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

}  // namespace adprompt
