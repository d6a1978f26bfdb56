#include "adprompt/records.hpp"

#include <cstdio>
#include <json.hpp>

#include "adprompt/error.hpp"

namespace adprompt {

std::string RunIdentity::position_text() const {
  return position ? std::string(position_name(*position)) : "-";
}

std::string RunIdentity::run_id() const {
  const std::string key = std::string(paradigm_name(paradigm)) + '\x1f' + backend + '\x1f' +
                          position_text() + '\x1f' + std::to_string(seed) + '\x1f' +
                          std::to_string(fold) + '\x1f' + variant;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_jsonl(std::span<const PredictionRecord> records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["run_id"] = r.run_id;
    j["paradigm"] = paradigm_name(r.paradigm);
    j["backend"] = r.backend;
    j["position"] = r.position;
    j["seed"] = r.seed;
    j["fold"] = r.fold;
    j["epoch"] = r.epoch;
    j["sample_id"] = r.sample_id;
    j["p_ad"] = r.p_ad;
    j["pred"] = label_name(r.pred);
    j["variant"] = r.variant;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<PredictionRecord> parse_jsonl(std::string_view jsonl) {
  std::vector<PredictionRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    auto end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      PredictionRecord r;
      r.run_id = j.at("run_id").get<std::string>();
      r.paradigm = parse_paradigm(j.at("paradigm").get<std::string>());
      r.backend = j.at("backend").get<std::string>();
      r.position = j.at("position").get<std::string>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.fold = j.at("fold").get<int>();
      r.epoch = j.at("epoch").get<int>();
      r.sample_id = j.at("sample_id").get<std::string>();
      r.p_ad = j.at("p_ad").get<double>();
      r.pred = parse_label(j.at("pred").get<std::string>());
      r.variant = j.value("variant", std::string{});
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("record line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("record line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace adprompt
