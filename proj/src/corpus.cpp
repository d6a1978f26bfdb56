#include "adprompt/corpus.hpp"

#include <algorithm>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "adprompt/error.hpp"
#include "adprompt/random.hpp"
#include "adprompt/text.hpp"

namespace adprompt {

std::string_view label_name(Label label) { return label == Label::AD ? "AD" : "NonAD"; }

Label parse_label(std::string_view s) {
  const auto t = text::trim(s);
  if (text::iequals(t, "AD")) return Label::AD;
  if (text::iequals(t, "NonAD")) return Label::NonAD;
  throw ParseError("unknown label '" + std::string(s) + "' (expected AD or NonAD)");
}

std::string_view split_name(Split split) { return split == Split::Train ? "Train" : "Test"; }

Split parse_split(std::string_view s) {
  const auto t = text::trim(s);
  if (text::iequals(t, "Train")) return Split::Train;
  if (text::iequals(t, "Test")) return Split::Test;
  throw ParseError("unknown split '" + std::string(s) + "' (expected Train or Test)");
}

std::vector<Sample> load_manifest(std::string_view csv, const std::filesystem::path& base_dir,
                                  bool check_files) {
  const auto rows = text::parse_csv(csv);
  if (rows.empty()) throw ParseError("manifest is empty (missing header)");
  std::vector<std::string> header;
  for (const auto& h : rows.front()) header.emplace_back(text::trim(h));
  const std::vector<std::string> expected = {"sample_id",       "label",          "split",
                                             "transcript_path", "alignment_path", "asr_path"};
  if (header != expected) {
    throw ParseError("manifest header must be '" + std::string(kManifestHeader) + "'");
  }

  auto resolve = [&](std::string_view p) {
    std::filesystem::path path{std::string(text::trim(p))};
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  std::vector<Sample> samples;
  std::vector<std::string> problems;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "row " + std::to_string(r + 1);
    if (row.size() != expected.size()) {
      problems.push_back(where + ": expected 6 fields, got " + std::to_string(row.size()));
      continue;
    }
    Sample s;
    s.sample_id = std::string(text::trim(row[0]));
    if (s.sample_id.empty()) {
      problems.push_back(where + ": empty sample_id");
      continue;
    }
    if (!seen.insert(s.sample_id).second) {
      problems.push_back(where + ": duplicate sample_id '" + s.sample_id + "'");
      continue;
    }
    try {
      s.label = parse_label(row[1]);
      s.split = parse_split(row[2]);
    } catch (const ParseError& e) {
      problems.push_back(where + ": " + e.what());
      continue;
    }
    if (text::trim(row[3]).empty()) {
      problems.push_back(where + ": missing transcript_path");
      continue;
    }
    s.transcript_path = resolve(row[3]);
    if (!text::trim(row[4]).empty()) s.alignment_path = resolve(row[4]);
    if (!text::trim(row[5]).empty()) s.asr_path = resolve(row[5]);
    if (check_files) {
      for (const auto* p : {&s.transcript_path, s.alignment_path ? &*s.alignment_path : nullptr,
                            s.asr_path ? &*s.asr_path : nullptr}) {
        if (p != nullptr && !std::filesystem::exists(*p)) {
          problems.push_back(where + ": file not found " + p->string());
        }
      }
    }
    samples.push_back(std::move(s));
  }
  if (!problems.empty()) {
    std::string msg = "invalid manifest:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ParseError(msg);
  }
  return samples;
}

std::vector<Sample> load_manifest_file(const std::filesystem::path& path, bool check_files) {
  return load_manifest(text::read_file(path), path.parent_path(), check_files);
}

std::string render_manifest(std::span<const Sample> samples) {
  std::ostringstream out;
  out << kManifestHeader << '\n';
  for (const auto& s : samples) {
    out << text::csv_field(s.sample_id) << ',' << label_name(s.label) << ','
        << split_name(s.split) << ',' << text::csv_field(s.transcript_path.generic_string())
        << ',' << (s.alignment_path ? text::csv_field(s.alignment_path->generic_string()) : "")
        << ',' << (s.asr_path ? text::csv_field(s.asr_path->generic_string()) : "") << '\n';
  }
  return out.str();
}

std::vector<std::string> FoldAssignment::fold_members(int fold) const {
  std::vector<std::string> ids;
  for (const auto& [id, f] : assignment) {
    if (f == fold) ids.push_back(id);
  }
  return ids;
}

std::string FoldAssignment::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["seed"] = seed;
  nlohmann::ordered_json a = nlohmann::ordered_json::object();
  for (const auto& [id, f] : assignment) a[id] = f;
  j["assignment"] = std::move(a);
  return j.dump(2) + "\n";
}

FoldAssignment FoldAssignment::from_json(std::string_view json) {
  FoldAssignment folds;
  try {
    const auto j = nlohmann::json::parse(json);
    folds.k = j.at("k").get<int>();
    folds.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [id, f] : j.at("assignment").items()) folds.assignment[id] = f.get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid folds file: ") + e.what());
  }
  if (folds.k < 2) throw ParseError("invalid folds file: k must be at least 2");
  for (const auto& [id, f] : folds.assignment) {
    if (f < 0 || f >= folds.k) {
      throw ParseError("invalid folds file: fold " + std::to_string(f) + " of '" + id +
                       "' is outside [0, k)");
    }
  }
  return folds;
}

FoldAssignment make_folds(std::span<const Sample> samples, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("fold count must be at least 2, got " + std::to_string(k));
  std::vector<std::string> ad;
  std::vector<std::string> non_ad;
  for (const auto& s : samples) {
    if (s.split != Split::Train) continue;
    (s.label == Label::AD ? ad : non_ad).push_back(s.sample_id);
  }
  const std::size_t n = ad.size() + non_ad.size();
  if (static_cast<std::size_t>(k) > n) {
    throw ValidationError("fold count " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                          " training samples");
  }
  std::sort(ad.begin(), ad.end());
  std::sort(non_ad.begin(), non_ad.end());
  std::mt19937_64 rng(seed);
  deterministic_shuffle(std::span<std::string>(ad), rng);
  deterministic_shuffle(std::span<std::string>(non_ad), rng);

  FoldAssignment folds;
  folds.k = k;
  folds.seed = seed;
  std::size_t deal = 0;
  for (const auto* group : {&ad, &non_ad}) {
    for (const auto& id : *group) {
      folds.assignment[id] = static_cast<int>(deal % static_cast<std::size_t>(k));
      ++deal;
    }
  }
  return folds;
}

std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> seeds(15);
  for (std::uint64_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

}  // namespace adprompt
