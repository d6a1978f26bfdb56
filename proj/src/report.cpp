#include "adprompt/report.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "adprompt/text.hpp"

namespace adprompt {
namespace {

int variant_rank(std::string_view v) {
  for (std::size_t i = 0; i < std::size(kVariantOrder); ++i) {
    if (kVariantOrder[i] == v) return static_cast<int>(i);
  }
  return static_cast<int>(std::size(kVariantOrder));
}

int position_scheme_rank(std::string_view p) {
  if (p == "-") return 0;
  if (p == "before") return 1;
  if (p == "after") return 2;
  return 3;
}

struct RowKey {
  Paradigm paradigm;
  bool fused_backend;
  std::string backend_scheme;
  std::string position_scheme;
  auto tie() const {
    return std::make_tuple(paradigm, fused_backend, backend_scheme,
                           position_scheme_rank(position_scheme), position_scheme);
  }
  bool operator<(const RowKey& o) const { return tie() < o.tie(); }
};

}  // namespace

RenderedReport render_report(std::span<const SummaryRow> rows, std::vector<std::string> variants) {
  RenderedReport out;
  if (variants.empty()) {
    std::set<std::string> present;
    for (const auto& r : rows) present.insert(r.variant);
    variants.assign(present.begin(), present.end());
    std::stable_sort(variants.begin(), variants.end(), [](const auto& a, const auto& b) {
      return variant_rank(a) < variant_rank(b);
    });
  }

  // (row, split, variant) -> metrics
  std::map<RowKey, std::map<std::pair<std::string, std::string>, MetricsSummary>> table;
  for (const auto& r : rows) {
    RowKey key{r.paradigm, r.backend_scheme.find('+') != std::string::npos, r.backend_scheme,
               r.position_scheme};
    table[key][{r.split, r.variant}] = r.metrics;
  }
  if (table.empty()) out.warnings.push_back("no summaries to report");

  const std::array<std::string, 9> header = {"Paradigm", "Backend",  "Position",
                                             "CV Mean",  "CV Std",   "CV Max",
                                             "Test Mean", "Test Std", "Test Max"};
  std::vector<std::array<std::string, 9>> lines;
  std::ostringstream csv;
  csv << "paradigm,backend_scheme,position_scheme,variant,cv_mean,cv_std,cv_max,test_mean,"
         "test_std,test_max\n";
  for (const auto& [key, cells] : table) {
    std::array<std::string, 9> line{std::string(paradigm_name(key.paradigm)), key.backend_scheme,
                                    key.position_scheme};
    std::array<std::vector<std::string>, 6> parts;
    for (const auto& variant : variants) {
      std::array<std::string, 6> values;
      for (int s = 0; s < 2; ++s) {
        const std::string split(s == 0 ? kCvSplit : kTestSplit);
        const auto it = cells.find({split, variant});
        for (int m = 0; m < 3; ++m) {
          auto& v = values[static_cast<std::size_t>(s * 3 + m)];
          if (it == cells.end()) {
            v = "-";
          } else {
            const auto& ms = it->second;
            v = format_fixed1(m == 0 ? ms.mean : m == 1 ? ms.std : ms.max);
          }
        }
        if (it == cells.end()) {
          out.warnings.push_back("missing " + split + " result for " +
                                 std::string(paradigm_name(key.paradigm)) + "/" +
                                 key.backend_scheme + "/" + key.position_scheme + " variant " +
                                 variant);
        }
      }
      csv << paradigm_name(key.paradigm) << ',' << text::csv_field(key.backend_scheme) << ','
          << text::csv_field(key.position_scheme) << ',' << text::csv_field(variant);
      for (std::size_t i = 0; i < values.size(); ++i) {
        csv << ',' << values[i];
        parts[i].push_back(values[i]);
      }
      csv << '\n';
    }
    for (std::size_t i = 0; i < parts.size(); ++i) line[3 + i] = text::join(parts[i], "/");
    lines.push_back(std::move(line));
  }

  std::array<std::size_t, 9> width{};
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& l : lines) width[c] = std::max(width[c], l[c].size());
  }
  std::ostringstream txt;
  auto emit = [&](const std::array<std::string, 9>& cols) {
    std::string line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c > 0) line += " | ";
      line += cols[c];
      if (c + 1 < cols.size()) line.append(width[c] - cols[c].size(), ' ');
    }
    txt << line << '\n';
  };
  if (!variants.empty()) txt << "Variants: " << text::join(variants, " / ") << '\n';
  emit(header);
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c > 0) rule += "-+-";
    rule.append(width[c], '-');
  }
  txt << rule << '\n';
  for (const auto& l : lines) emit(l);

  out.text = txt.str();
  out.csv = csv.str();
  return out;
}

}  // namespace adprompt
