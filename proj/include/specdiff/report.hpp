/*
 * Copyright 2026 The specdiff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// JSON Lines observability reports. Each trial becomes one object:
//
//   {"schema_version":"1","property":"finite_set:bool","status":"passed",
//    "representation":"(mem 3 (insert 3 (empty)))",
//    "features":{"depth":3,"size":3,"num_seq":0},"seed":...,"trial":...}
//
// and every campaign ends with
//
//   {"type":"summary","campaign":...,"signature":...,"total":...,
//    "failures":...,"trials_to_first_failure":...|null,"seed":...}

#ifndef SPECDIFF_REPORT_HPP
#define SPECDIFF_REPORT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "specdiff/harness.hpp"

namespace specdiff {

inline constexpr const char* kSchemaVersion = "1";

class ReportIoError : public std::runtime_error {
 public:
  ReportIoError(std::size_t bytes_written, const std::string& what)
      : std::runtime_error(what + " after " + std::to_string(bytes_written) + " bytes"), bytes_(bytes_written) {}
  std::size_t bytes_written() const { return bytes_; }

 private:
  std::size_t bytes_;
};

class ReportFormatError : public std::runtime_error {
 public:
  ReportFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::string property_name(const std::string& signature, const Ty& ty) {
  return signature + ":" + to_string(ty);
}

inline nlohmann::ordered_json trial_line(const CampaignResult& result, const TrialRecord& rec,
                                         const std::string* shrunk) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["property"] = property_name(result.signature_name, rec.observable_type);
  j["status"] = to_string(rec.status);
  j["representation"] = rec.expr_text;
  j["features"] = {{"depth", rec.depth}, {"size", rec.size}, {"num_seq", rec.num_seq}};
  j["seed"] = rec.seed;
  j["trial"] = rec.trial_index;
  if (rec.status != TrialStatus::Passed) {
    j["outcome_a"] = rec.outcome_a;
    j["outcome_b"] = rec.outcome_b;
  }
  if (shrunk) j["shrunk"] = *shrunk;
  return j;
}

inline nlohmann::ordered_json summary_line(const CampaignResult& result) {
  nlohmann::ordered_json j;
  j["type"] = "summary";
  j["campaign"] = result.label;
  j["signature"] = result.signature_name;
  j["total"] = result.total_trials;
  j["failures"] = result.failures.size();
  if (result.trials_to_first_failure)
    j["trials_to_first_failure"] = *result.trials_to_first_failure;
  else
    j["trials_to_first_failure"] = nullptr;
  j["seed"] = result.seed;
  return j;
}

// Writes one line per kept trial record, then the summary line.
inline void emit_campaign(const CampaignResult& result, std::ostream& sink) {
  std::map<std::size_t, const std::string*> shrunk;
  for (const auto& f : result.failures) shrunk[f.record.trial_index] = &f.shrunk_expr_text;

  std::size_t written = 0;
  auto put = [&](const nlohmann::ordered_json& j) {
    std::string line = j.dump() + "\n";
    sink.write(line.data(), static_cast<std::streamsize>(line.size()));
    if (!sink) throw ReportIoError(written, "report write failed");
    written += line.size();
  };
  for (const auto& rec : result.records) {
    auto it = shrunk.find(rec.trial_index);
    put(trial_line(result, rec, it == shrunk.end() ? nullptr : it->second));
  }
  put(summary_line(result));
  sink.flush();
  if (!sink) throw ReportIoError(written, "report flush failed");
}

// A parsed trial line.
struct ReportLine {
  std::string schema_version;
  std::string property;
  std::string status;
  std::string representation;
  std::int64_t depth = 0;
  std::int64_t size = 0;
  std::int64_t num_seq = 0;
  std::uint64_t seed = 0;
  std::int64_t trial = 0;
};

struct SummaryLine {
  std::string campaign;
  std::string signature;
  std::int64_t total = 0;
  std::int64_t failures = 0;
  std::optional<std::int64_t> trials_to_first_failure;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDepthBuckets = 10;  // 1..9 and 10+

// Everything `summarize` renders, kept separate so it can be checked.
struct ReportStats {
  std::vector<ReportLine> trials;
  std::vector<SummaryLine> summaries;
  // Trials-to-first-failure per campaign label, one entry per campaign run.
  std::vector<std::pair<std::string, std::vector<std::optional<std::size_t>>>> ttf_by_campaign;
  std::array<std::size_t, kDepthBuckets> depth_histogram{};
  std::map<std::string, std::size_t> status_counts;
};

namespace detail {

template <typename T>
T required(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) throw ReportFormatError(line, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ReportFormatError(line, std::string("field '") + key + "' has the wrong type");
  }
}

inline void require_integer(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw ReportFormatError(line, std::string("field '") + key + "' must be an integer");
}

}  // namespace detail

inline ReportStats read_report(std::istream& in) {
  ReportStats stats;
  std::string text;
  std::size_t line_no = 0;
  auto slot_for = [&](const std::string& label) -> std::vector<std::optional<std::size_t>>& {
    for (auto& [name, runs] : stats.ttf_by_campaign)
      if (name == label) return runs;
    stats.ttf_by_campaign.emplace_back(label, std::vector<std::optional<std::size_t>>{});
    return stats.ttf_by_campaign.back().second;
  };
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ReportFormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ReportFormatError(line_no, "expected a JSON object");
    if (j.contains("type") && j["type"] == "summary") {
      SummaryLine s;
      s.campaign = detail::required<std::string>(j, "campaign", line_no);
      s.signature = detail::required<std::string>(j, "signature", line_no);
      detail::require_integer(j, "total", line_no);
      detail::require_integer(j, "failures", line_no);
      s.total = j["total"].get<std::int64_t>();
      s.failures = j["failures"].get<std::int64_t>();
      if (!j.contains("trials_to_first_failure"))
        throw ReportFormatError(line_no, "missing field 'trials_to_first_failure'");
      const auto& ttf = j["trials_to_first_failure"];
      if (ttf.is_number_integer()) s.trials_to_first_failure = ttf.get<std::int64_t>();
      else if (!ttf.is_null()) throw ReportFormatError(line_no, "trials_to_first_failure must be an integer or null");
      detail::require_integer(j, "seed", line_no);
      s.seed = j["seed"].get<std::uint64_t>();
      slot_for(s.campaign).push_back(s.trials_to_first_failure
                                         ? std::optional<std::size_t>(static_cast<std::size_t>(*s.trials_to_first_failure))
                                         : std::nullopt);
      stats.summaries.push_back(std::move(s));
      continue;
    }
    ReportLine r;
    r.schema_version = detail::required<std::string>(j, "schema_version", line_no);
    r.property = detail::required<std::string>(j, "property", line_no);
    r.status = detail::required<std::string>(j, "status", line_no);
    if (r.status != "passed" && r.status != "failed" && r.status != "harness_bug")
      throw ReportFormatError(line_no, "unknown status '" + r.status + "'");
    r.representation = detail::required<std::string>(j, "representation", line_no);
    if (!j.contains("features") || !j["features"].is_object()) throw ReportFormatError(line_no, "missing features");
    const auto& f = j["features"];
    for (const char* key : {"depth", "size", "num_seq"}) detail::require_integer(f, key, line_no);
    r.depth = f["depth"].get<std::int64_t>();
    r.size = f["size"].get<std::int64_t>();
    r.num_seq = f["num_seq"].get<std::int64_t>();
    detail::require_integer(j, "seed", line_no);
    detail::require_integer(j, "trial", line_no);
    r.seed = j["seed"].get<std::uint64_t>();
    r.trial = j["trial"].get<std::int64_t>();

    std::size_t bucket = r.depth < 1 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(r.depth), kDepthBuckets) - 1;
    stats.depth_histogram[bucket]++;
    stats.status_counts[r.status]++;
    stats.trials.push_back(std::move(r));
  }
  return stats;
}

// Mean rounded to the nearest integer, halves rounding up.
inline std::size_t rounded_mean(const std::vector<std::size_t>& xs) {
  std::uint64_t sum = 0;
  for (auto x : xs) sum += x;
  std::uint64_t n = xs.size();
  return static_cast<std::size_t>((2 * sum + n) / (2 * n));
}

// Min/Mean/Max rows with one column per campaign, plus a detection row.
inline std::string render_ttf_table(
    const std::vector<std::pair<std::string, std::vector<std::optional<std::size_t>>>>& columns) {
  std::ostringstream out;
  const int label_w = 10;
  std::vector<int> widths;
  for (const auto& [name, _] : columns) widths.push_back(std::max<int>(8, static_cast<int>(name.size()) + 2));

  out << std::left << std::setw(label_w) << "";
  for (std::size_t c = 0; c < columns.size(); ++c) out << std::right << std::setw(widths[c]) << columns[c].first;
  out << "\n";

  auto row = [&](const char* label, auto cell) {
    out << std::left << std::setw(label_w) << label;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::vector<std::size_t> hits;
      for (const auto& r : columns[c].second)
        if (r) hits.push_back(*r);
      out << std::right << std::setw(widths[c]) << (hits.empty() ? std::string("-") : cell(hits));
    }
    out << "\n";
  };
  row("Min", [](const std::vector<std::size_t>& h) { return std::to_string(*std::min_element(h.begin(), h.end())); });
  row("Mean", [](const std::vector<std::size_t>& h) { return std::to_string(rounded_mean(h)); });
  row("Max", [](const std::vector<std::size_t>& h) { return std::to_string(*std::max_element(h.begin(), h.end())); });

  out << std::left << std::setw(label_w) << "Detected";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::size_t hits = static_cast<std::size_t>(
        std::count_if(columns[c].second.begin(), columns[c].second.end(), [](const auto& r) { return r.has_value(); }));
    out << std::right << std::setw(widths[c]) << (std::to_string(hits) + "/" + std::to_string(columns[c].second.size()));
  }
  out << "\n";
  return out.str();
}

inline std::string render_summary(const ReportStats& stats) {
  std::ostringstream out;
  out << "trials: " << stats.trials.size();
  for (const auto& [status, n] : stats.status_counts) out << "  " << status << ": " << n;
  out << "\n";
  if (!stats.ttf_by_campaign.empty()) {
    out << "\ntrials to first failure\n" << render_ttf_table(stats.ttf_by_campaign);
  }
  if (!stats.trials.empty()) {
    out << "\ndepth histogram\n";
    for (std::size_t b = 0; b < kDepthBuckets; ++b) {
      std::string label = b + 1 == kDepthBuckets ? "10+" : std::to_string(b + 1);
      out << std::right << std::setw(4) << label << "  " << stats.depth_histogram[b] << "\n";
    }
  }
  return out.str();
}

inline std::string summarize(std::istream& in) { return render_summary(read_report(in)); }

}  // namespace specdiff

#endif  // SPECDIFF_REPORT_HPP
