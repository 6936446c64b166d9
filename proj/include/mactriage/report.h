// Copyright 2026 The mactriage Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Triage reports: aggregated counts, the cross-level matrix and full IV and
// operation listings, with canonical JSON, CSV and text renderings and
// report-to-report deltas.

#ifndef MACTRIAGE_REPORT_H_
#define MACTRIAGE_REPORT_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mactriage/analysis.h"
#include "mactriage/snapshot.h"

namespace mactriage {

inline constexpr int kReportSchemaVersion = 1;

struct IvRecord {
  std::string kind;
  std::string victim;  // subject key
  std::string object;  // object key
  std::vector<std::string> adversaries;
  std::vector<std::string> via;  // "adv_expand", "vic_expand"
  std::string victim_level;

  friend auto operator<=>(const IvRecord&, const IvRecord&) = default;
};

struct OpRecord {
  std::string type;
  std::string source_kind;
  std::string victim;
  std::string object;
  std::vector<std::string> adversaries;
  std::vector<std::string> witness_paths;

  friend auto operator<=>(const OpRecord&, const OpRecord&) = default;
};

struct TrustViolationRecord {
  std::string subject;
  std::string level;
  std::vector<std::string> members;  // TCB subjects below the subject's level

  friend auto operator<=>(const TrustViolationRecord&, const TrustViolationRecord&) = default;
};

using LevelMatrix = std::array<std::array<std::uint64_t, 5>, 5>;

struct TriageReport {
  int schema_version = kReportSchemaVersion;
  std::string snapshot_id;

  std::uint64_t subjects = 0;
  std::uint64_t objects = 0;
  std::uint64_t processes = 0;
  std::uint64_t files = 0;
  std::uint64_t allow_rules = 0;

  std::uint64_t authorized_data_flows = 0;
  std::map<std::string, std::uint64_t> te_ivs;           // read/write/exec/binding
  std::map<std::string, std::uint64_t> valid_label_ivs;  // distinct label pairs per kind
  std::map<std::string, std::uint64_t> valid_ivs;        // all five kinds
  std::uint64_t total_ivs = 0;            // read + pathname
  std::uint64_t total_ivs_all_kinds = 0;
  std::uint64_t ivs_with_ops = 0;
  std::uint64_t total_ops = 0;
  double avg_ops_per_iv = 0;
  bool avg_ops_defined = false;
  std::map<std::string, std::uint64_t> attack_ops;           // per op record
  std::map<std::string, std::uint64_t> attack_ops_distinct;  // per (victim, object)
  LevelMatrix cross_level{};  // [adversary rank-1][victim rank-1]
  std::uint64_t te_iv_total = 0;
  std::uint64_t skipped_unmapped = 0;
  double skipped_unmapped_pct = 0;
  std::string ipc_source;
  std::vector<TrustViolationRecord> trust_violations;
  std::vector<std::string> assumptions;

  std::vector<IvRecord> ivs;
  std::vector<OpRecord> ops;
};

// Subject/object pairs with read-like (Read, Exec, UseBinding) access.
std::uint64_t count_authorized_data_flows(const SystemSnapshot& snapshot);

// Cell (adversary level, victim level) per file or binding IV, using the
// lowest adversary level; pathname IVs excluded.
LevelMatrix cross_level_matrix(const std::vector<IntegrityViolation>& ivs,
                               const LevelMap& levels);

// IVs or ops naming a subject/object outside the snapshot -> IntegrityError.
TriageReport summarize(const SystemSnapshot& snapshot, const AnalysisResult& result,
                       const AnalysisOptions& options);

nlohmann::json report_to_json(const TriageReport& report);
TriageReport report_from_json(const nlohmann::json& j);

// Canonical JSON: sorted keys, fixed indentation, trailing newline.
std::string render_json(const TriageReport& report);
// format json|csv|text -> file name -> content. Unknown format -> UsageError.
std::map<std::string, std::string> render(const TriageReport& report, std::string_view format);

struct ReportDelta {
  int schema_version = kReportSchemaVersion;
  std::map<std::string, nlohmann::json> changed;  // top-level scalar/count fields
  std::vector<IvRecord> added_ivs;
  std::vector<IvRecord> removed_ivs;
  std::vector<OpRecord> added_ops;
  std::vector<OpRecord> removed_ops;

  bool empty() const;
  std::size_t size() const;
};

// Schema version mismatch -> IntegrityError.
ReportDelta diff_reports(const TriageReport& old_report, const TriageReport& new_report);
TriageReport apply_delta(const TriageReport& old_report, const ReportDelta& delta);
nlohmann::json delta_to_json(const ReportDelta& delta);

}  // namespace mactriage

#endif  // MACTRIAGE_REPORT_H_
