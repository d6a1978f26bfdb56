#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adprompt {

enum class Label { NonAD = 0, AD = 1 };
enum class Split { Train, Test };

std::string_view label_name(Label label);  // "AD" / "NonAD"
Label parse_label(std::string_view s);     // throws ParseError
std::string_view split_name(Split split);  // "Train" / "Test"
Split parse_split(std::string_view s);

struct Sample {
  std::string sample_id;
  Label label = Label::NonAD;
  Split split = Split::Train;
  std::filesystem::path transcript_path;
  std::optional<std::filesystem::path> alignment_path;
  std::optional<std::filesystem::path> asr_path;
};

inline constexpr std::string_view kManifestHeader =
    "sample_id,label,split,transcript_path,alignment_path,asr_path";

// Parses a manifest CSV. Relative paths resolve against `base_dir`. With
// `check_files`, every referenced path must exist. All bad rows are collected
// into a single ParseError.
std::vector<Sample> load_manifest(std::string_view csv, const std::filesystem::path& base_dir = {},
                                  bool check_files = false);
std::vector<Sample> load_manifest_file(const std::filesystem::path& path, bool check_files = true);

std::string render_manifest(std::span<const Sample> samples);

struct FoldAssignment {
  int k = 0;
  std::uint64_t seed = 0;
  std::map<std::string, int> assignment;  // sample_id -> fold in [0, k)

  std::vector<std::string> fold_members(int fold) const;
  std::string to_json() const;
  static FoldAssignment from_json(std::string_view json);
};

// Label-stratified k-fold assignment over the Train samples; Test samples are
// ignored. Each class is ordered by id, shuffled with `seed`, and dealt
// round-robin across folds with the deal position carried from one class to
// the next, so fold sizes and per-fold class counts each differ by at most one.
FoldAssignment make_folds(std::span<const Sample> samples, int k, std::uint64_t seed);

// Seeds for the repeated runs.
std::vector<std::uint64_t> default_seeds();  // 0..14

}  // namespace adprompt
