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

#include "mactriage/report.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "mactriage/errors.h"

namespace mactriage {

using nlohmann::json;

std::uint64_t count_authorized_data_flows(const SystemSnapshot& snapshot) {
  std::uint64_t n = 0;
  for (SubjectId s = 0; s < snapshot.subjects.size(); ++s) {
    for (ObjectId o = 0; o < snapshot.objects.size(); ++o) {
      for (auto kind : {AccessKind::kRead, AccessKind::kExec, AccessKind::kUseBinding}) {
        if (can_access(snapshot, s, o, kind)) {
          ++n;
          break;
        }
      }
    }
  }
  return n;
}

LevelMatrix cross_level_matrix(const std::vector<IntegrityViolation>& ivs,
                               const LevelMap& levels) {
  LevelMatrix m{};
  for (const auto& iv : ivs) {
    if (iv.kind == IvKind::kPathname || iv.adversaries.empty()) continue;
    int lowest = kLevelCount;
    for (auto a : iv.adversaries) lowest = std::min(lowest, Rank(levels.levels[a]));
    ++m[lowest - 1][Rank(levels.levels[iv.victim]) - 1];
  }
  return m;
}

namespace {

std::vector<std::string> ViaNames(std::uint8_t via) {
  std::vector<std::string> out;
  if (via & kViaAdversary) out.emplace_back("adv_expand");
  if (via & kViaVictim) out.emplace_back("vic_expand");
  return out;
}

std::map<std::string, std::uint64_t> ZeroKinds(bool with_pathname) {
  std::map<std::string, std::uint64_t> m;
  for (auto k : kAllIvKinds) {
    if (k != IvKind::kPathname || with_pathname) m[std::string(IvKindName(k))] = 0;
  }
  return m;
}

}  // namespace

TriageReport summarize(const SystemSnapshot& snapshot, const AnalysisResult& result,
                       const AnalysisOptions& options) {
  const auto ns = snapshot.subjects.size(), no = snapshot.objects.size();
  auto check_subject = [&](SubjectId s) {
    if (s >= ns) throw IntegrityError("result references unknown subject #" + std::to_string(s));
  };
  auto check_object = [&](ObjectId o) {
    if (o >= no) throw IntegrityError("result references unknown object #" + std::to_string(o));
  };
  if (result.levels.levels.size() != ns) {
    throw IntegrityError("level map does not cover the snapshot's subjects");
  }
  for (const auto& iv : result.ivs) {
    check_subject(iv.victim);
    check_object(iv.object);
    for (auto a : iv.adversaries) check_subject(a);
  }
  for (const auto& op : result.ops) {
    check_subject(op.victim);
    check_object(op.object);
    for (auto a : op.adversaries) check_subject(a);
  }

  TriageReport r;
  r.snapshot_id = snapshot.id;
  r.subjects = ns;
  r.objects = no;
  r.processes = snapshot.process_count;
  r.files = snapshot.file_count;
  r.allow_rules = snapshot.te_rules.size();
  r.authorized_data_flows = count_authorized_data_flows(snapshot);

  r.te_ivs = ZeroKinds(false);
  for (const auto& t : result.te_ivs) ++r.te_ivs[std::string(IvKindName(t.kind))];
  r.valid_ivs = ZeroKinds(true);
  r.valid_label_ivs = ZeroKinds(true);
  std::set<std::tuple<IvKind, TypeId, TypeId>> label_pairs;
  for (const auto& iv : result.ivs) {
    ++r.valid_ivs[std::string(IvKindName(iv.kind))];
    label_pairs.emplace(iv.kind, snapshot.subject_types[iv.victim],
                        snapshot.object_types[iv.object]);
  }
  for (const auto& [kind, v, o] : label_pairs) ++r.valid_label_ivs[std::string(IvKindName(kind))];
  r.total_ivs = r.valid_ivs["read"] + r.valid_ivs["pathname"];
  r.total_ivs_all_kinds = result.ivs.size();

  for (auto t : kAllOpTypes) {
    r.attack_ops[std::string(OpTypeName(t))] = 0;
    r.attack_ops_distinct[std::string(OpTypeName(t))] = 0;
  }
  std::set<std::tuple<IvKind, SubjectId, ObjectId>> ivs_with_ops;
  std::set<std::tuple<OpType, SubjectId, ObjectId>> distinct_ops;
  for (const auto& op : result.ops) {
    ++r.attack_ops[std::string(OpTypeName(op.type))];
    ivs_with_ops.emplace(op.source_kind, op.victim, op.object);
    distinct_ops.emplace(op.type, op.victim, op.object);
  }
  for (const auto& [type, v, o] : distinct_ops) {
    ++r.attack_ops_distinct[std::string(OpTypeName(type))];
  }
  r.total_ops = result.ops.size();
  r.ivs_with_ops = ivs_with_ops.size();
  r.avg_ops_defined = r.ivs_with_ops > 0;
  r.avg_ops_per_iv = r.avg_ops_defined
                         ? static_cast<double>(r.total_ops) / static_cast<double>(r.ivs_with_ops)
                         : 0.0;

  r.cross_level = cross_level_matrix(result.ivs, result.levels);
  r.te_iv_total = result.validation.te_iv_count;
  r.skipped_unmapped = result.validation.skipped_unmapped;
  r.skipped_unmapped_pct =
      r.te_iv_total ? 100.0 * static_cast<double>(r.skipped_unmapped) /
                          static_cast<double>(r.te_iv_total)
                    : 0.0;
  r.ipc_source = std::string(IpcSourceName(result.ipc_source));

  for (SubjectId s = 0; s < ns; ++s) {
    const auto& e = result.adversaries.trust.entries[s];
    if (e.consistent) continue;
    TrustViolationRecord t{snapshot.subjects[s].Key(),
                           std::string(PrivilegeLevelName(result.levels.levels[s])),
                           {}};
    for (auto m : e.violations) t.members.push_back(snapshot.subjects[m].Key());
    std::sort(t.members.begin(), t.members.end());
    r.trust_violations.push_back(std::move(t));
  }
  std::sort(r.trust_violations.begin(), r.trust_violations.end());

  std::vector<std::string> labels(options.kernel_labels.begin(), options.kernel_labels.end());
  std::string joined;
  for (const auto& l : labels) joined += (joined.empty() ? "" : ",") + l;
  r.assumptions.push_back("kernel labels: " + joined);
  r.assumptions.push_back(std::string("permission expansion: ") +
                          (options.expansion ? "enabled" : "disabled"));
  r.assumptions.push_back("obtainable permissions: normal, dangerous; signature only for " +
                          std::to_string(options.signed_allowlist.size()) +
                          " allowlisted selector(s)");
  r.assumptions.push_back("file squatting assumes predictable file names");
  r.assumptions.push_back("MLS: category subset check for every access kind");
  if (result.ipc_source == IpcMap::Source::kAllChannels) {
    r.assumptions.push_back("pathname IVs: every ordered subject pair is an IPC channel (upper bound)");
  }
  std::sort(r.assumptions.begin(), r.assumptions.end());

  for (const auto& iv : result.ivs) {
    IvRecord rec{std::string(IvKindName(iv.kind)), snapshot.subjects[iv.victim].Key(),
                 snapshot.objects[iv.object].Key(), {}, ViaNames(iv.via),
                 std::string(PrivilegeLevelName(result.levels.levels[iv.victim]))};
    for (auto a : iv.adversaries) rec.adversaries.push_back(snapshot.subjects[a].Key());
    std::sort(rec.adversaries.begin(), rec.adversaries.end());
    r.ivs.push_back(std::move(rec));
  }
  std::sort(r.ivs.begin(), r.ivs.end());
  for (const auto& op : result.ops) {
    OpRecord rec{std::string(OpTypeName(op.type)), std::string(IvKindName(op.source_kind)),
                 snapshot.subjects[op.victim].Key(), snapshot.objects[op.object].Key(),
                 {}, op.witness_paths};
    for (auto a : op.adversaries) rec.adversaries.push_back(snapshot.subjects[a].Key());
    std::sort(rec.adversaries.begin(), rec.adversaries.end());
    r.ops.push_back(std::move(rec));
  }
  std::sort(r.ops.begin(), r.ops.end());
  return r;
}

// ---- JSON -----------------------------------------------------------------

namespace {

constexpr std::string_view kLevelNames[] = {"T1", "T2", "T3", "T4", "T5"};

json IvToJson(const IvRecord& r) {
  return {{"kind", r.kind}, {"victim", r.victim}, {"object", r.object},
          {"adversaries", r.adversaries}, {"via", r.via}, {"victim_level", r.victim_level}};
}

IvRecord IvFromJson(const json& j) {
  return {j.at("kind").get<std::string>(), j.at("victim").get<std::string>(),
          j.at("object").get<std::string>(),
          j.at("adversaries").get<std::vector<std::string>>(),
          j.at("via").get<std::vector<std::string>>(),
          j.at("victim_level").get<std::string>()};
}

json OpToJson(const OpRecord& r) {
  return {{"type", r.type}, {"source_kind", r.source_kind}, {"victim", r.victim},
          {"object", r.object}, {"adversaries", r.adversaries},
          {"witness_paths", r.witness_paths}};
}

OpRecord OpFromJson(const json& j) {
  return {j.at("type").get<std::string>(), j.at("source_kind").get<std::string>(),
          j.at("victim").get<std::string>(), j.at("object").get<std::string>(),
          j.at("adversaries").get<std::vector<std::string>>(),
          j.at("witness_paths").get<std::vector<std::string>>()};
}

}  // namespace

json report_to_json(const TriageReport& r) {
  json matrix = json::object();
  for (int a = 0; a < 5; ++a) {
    json row = json::object();
    for (int v = 0; v < 5; ++v) row[std::string(kLevelNames[v])] = r.cross_level[a][v];
    matrix[std::string(kLevelNames[a])] = row;
  }
  json trust = json::array();
  for (const auto& t : r.trust_violations) {
    trust.push_back({{"subject", t.subject}, {"level", t.level}, {"members", t.members}});
  }
  json ivs = json::array();
  for (const auto& iv : r.ivs) ivs.push_back(IvToJson(iv));
  json ops = json::array();
  for (const auto& op : r.ops) ops.push_back(OpToJson(op));
  return {
      {"schema_version", r.schema_version},
      {"snapshot_id", r.snapshot_id},
      {"inventory",
       {{"subjects", r.subjects}, {"objects", r.objects}, {"processes", r.processes},
        {"files", r.files}, {"allow_rules", r.allow_rules}}},
      {"authorized_data_flows", r.authorized_data_flows},
      {"te_ivs", r.te_ivs},
      {"valid_label_ivs", r.valid_label_ivs},
      {"valid_ivs", r.valid_ivs},
      {"total_ivs", r.total_ivs},
      {"total_ivs_all_kinds", r.total_ivs_all_kinds},
      {"ivs_with_ops", r.ivs_with_ops},
      {"total_ops", r.total_ops},
      {"avg_ops_per_iv", r.avg_ops_per_iv},
      {"avg_ops_defined", r.avg_ops_defined},
      {"attack_ops", r.attack_ops},
      {"attack_ops_distinct", r.attack_ops_distinct},
      {"cross_level", matrix},
      {"te_iv_total", r.te_iv_total},
      {"skipped_unmapped", r.skipped_unmapped},
      {"skipped_unmapped_pct", r.skipped_unmapped_pct},
      {"ipc_source", r.ipc_source},
      {"trust_violations", trust},
      {"assumptions", r.assumptions},
      {"ivs", ivs},
      {"ops", ops},
  };
}

TriageReport report_from_json(const json& j) {
  try {
    TriageReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.snapshot_id = j.at("snapshot_id").get<std::string>();
    const auto& inv = j.at("inventory");
    r.subjects = inv.at("subjects").get<std::uint64_t>();
    r.objects = inv.at("objects").get<std::uint64_t>();
    r.processes = inv.at("processes").get<std::uint64_t>();
    r.files = inv.at("files").get<std::uint64_t>();
    r.allow_rules = inv.at("allow_rules").get<std::uint64_t>();
    r.authorized_data_flows = j.at("authorized_data_flows").get<std::uint64_t>();
    r.te_ivs = j.at("te_ivs").get<std::map<std::string, std::uint64_t>>();
    r.valid_label_ivs = j.at("valid_label_ivs").get<std::map<std::string, std::uint64_t>>();
    r.valid_ivs = j.at("valid_ivs").get<std::map<std::string, std::uint64_t>>();
    r.total_ivs = j.at("total_ivs").get<std::uint64_t>();
    r.total_ivs_all_kinds = j.at("total_ivs_all_kinds").get<std::uint64_t>();
    r.ivs_with_ops = j.at("ivs_with_ops").get<std::uint64_t>();
    r.total_ops = j.at("total_ops").get<std::uint64_t>();
    r.avg_ops_per_iv = j.at("avg_ops_per_iv").get<double>();
    r.avg_ops_defined = j.at("avg_ops_defined").get<bool>();
    r.attack_ops = j.at("attack_ops").get<std::map<std::string, std::uint64_t>>();
    r.attack_ops_distinct =
        j.at("attack_ops_distinct").get<std::map<std::string, std::uint64_t>>();
    const auto& m = j.at("cross_level");
    for (int a = 0; a < 5; ++a) {
      for (int v = 0; v < 5; ++v) {
        r.cross_level[a][v] =
            m.at(std::string(kLevelNames[a])).at(std::string(kLevelNames[v])).get<std::uint64_t>();
      }
    }
    r.te_iv_total = j.at("te_iv_total").get<std::uint64_t>();
    r.skipped_unmapped = j.at("skipped_unmapped").get<std::uint64_t>();
    r.skipped_unmapped_pct = j.at("skipped_unmapped_pct").get<double>();
    r.ipc_source = j.at("ipc_source").get<std::string>();
    for (const auto& t : j.at("trust_violations")) {
      r.trust_violations.push_back({t.at("subject").get<std::string>(),
                                    t.at("level").get<std::string>(),
                                    t.at("members").get<std::vector<std::string>>()});
    }
    r.assumptions = j.at("assumptions").get<std::vector<std::string>>();
    for (const auto& iv : j.at("ivs")) r.ivs.push_back(IvFromJson(iv));
    for (const auto& op : j.at("ops")) r.ops.push_back(OpFromJson(op));
    return r;
  } catch (const json::exception& e) {
    throw ParseError("report", "json", e.what());
  }
}

std::string render_json(const TriageReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

// ---- CSV / text -----------------------------------------------------------

namespace {

std::string Csv(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string JoinSemicolon(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ";") + s;
  return out;
}

std::string Number(double d) {
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed << d;
  return ss.str();
}

std::vector<std::pair<std::string, std::string>> SummaryRows(const TriageReport& r) {
  return {
      {"snapshot_id", r.snapshot_id},
      {"subjects", std::to_string(r.subjects)},
      {"objects", std::to_string(r.objects)},
      {"processes", std::to_string(r.processes)},
      {"files", std::to_string(r.files)},
      {"allow_rules", std::to_string(r.allow_rules)},
      {"authorized_data_flows", std::to_string(r.authorized_data_flows)},
      {"total_ivs", std::to_string(r.total_ivs)},
      {"total_ivs_all_kinds", std::to_string(r.total_ivs_all_kinds)},
      {"ivs_with_ops", std::to_string(r.ivs_with_ops)},
      {"total_ops", std::to_string(r.total_ops)},
      {"avg_ops_per_iv", r.avg_ops_defined ? Number(r.avg_ops_per_iv) : "undefined"},
      {"te_iv_total", std::to_string(r.te_iv_total)},
      {"skipped_unmapped", std::to_string(r.skipped_unmapped)},
      {"skipped_unmapped_pct", Number(r.skipped_unmapped_pct)},
      {"ipc_source", r.ipc_source},
      {"trust_violations", std::to_string(r.trust_violations.size())},
  };
}

std::map<std::string, std::string> RenderCsv(const TriageReport& r) {
  std::map<std::string, std::string> files;
  std::string s = "metric,value\n";
  for (const auto& [k, v] : SummaryRows(r)) s += k + "," + Csv(v) + "\n";
  files["summary.csv"] = s;

  s = "kind,te_ivs,valid_label_ivs,valid_ivs\n";
  for (const auto& [kind, n] : r.valid_ivs) {
    auto te = r.te_ivs.find(kind);
    auto lbl = r.valid_label_ivs.find(kind);
    s += kind + "," + (te == r.te_ivs.end() ? "" : std::to_string(te->second)) + "," +
         (lbl == r.valid_label_ivs.end() ? "0" : std::to_string(lbl->second)) + "," +
         std::to_string(n) + "\n";
  }
  files["iv_counts.csv"] = s;

  s = "type,operations,distinct_victim_object\n";
  for (const auto& [type, n] : r.attack_ops) {
    s += type + "," + std::to_string(n) + "," +
         std::to_string(r.attack_ops_distinct.count(type) ? r.attack_ops_distinct.at(type) : 0) +
         "\n";
  }
  files["attack_ops.csv"] = s;

  s = "adversary_level,T1,T2,T3,T4,T5\n";
  for (int a = 0; a < 5; ++a) {
    s += std::string(kLevelNames[a]);
    for (int v = 0; v < 5; ++v) s += "," + std::to_string(r.cross_level[a][v]);
    s += "\n";
  }
  files["cross_level.csv"] = s;

  s = "kind,victim,object,adversaries,via,victim_level\n";
  for (const auto& iv : r.ivs) {
    s += iv.kind + "," + Csv(iv.victim) + "," + Csv(iv.object) + "," +
         Csv(JoinSemicolon(iv.adversaries)) + "," + JoinSemicolon(iv.via) + "," +
         iv.victim_level + "\n";
  }
  files["ivs.csv"] = s;

  s = "type,source_kind,victim,object,adversaries,witness_paths\n";
  for (const auto& op : r.ops) {
    s += op.type + "," + op.source_kind + "," + Csv(op.victim) + "," + Csv(op.object) + "," +
         Csv(JoinSemicolon(op.adversaries)) + "," + Csv(JoinSemicolon(op.witness_paths)) + "\n";
  }
  files["ops.csv"] = s;

  s = "subject,level,members\n";
  for (const auto& t : r.trust_violations) {
    s += Csv(t.subject) + "," + t.level + "," + Csv(JoinSemicolon(t.members)) + "\n";
  }
  files["trust.csv"] = s;
  return files;
}

std::string RenderText(const TriageReport& r) {
  std::ostringstream out;
  out << "mactriage report for snapshot " << r.snapshot_id << "\n\n";
  for (const auto& [k, v] : SummaryRows(r)) out << "  " << k << ": " << v << "\n";
  out << "\nIVs by kind (te / label-valid / valid)\n";
  for (const auto& [kind, n] : r.valid_ivs) {
    auto te = r.te_ivs.find(kind);
    out << "  " << kind << ": " << (te == r.te_ivs.end() ? std::string("-") : std::to_string(te->second))
        << " / " << (r.valid_label_ivs.count(kind) ? r.valid_label_ivs.at(kind) : 0) << " / " << n
        << "\n";
  }
  out << "\nAttack operations (records / distinct victim-object)\n";
  for (const auto& [type, n] : r.attack_ops) {
    out << "  " << type << ": " << n << " / "
        << (r.attack_ops_distinct.count(type) ? r.attack_ops_distinct.at(type) : 0) << "\n";
  }
  out << "\nCross-level file+binding IVs (rows adversary, columns victim)\n      ";
  for (auto l : kLevelNames) out << l << "     ";
  out << "\n";
  for (int a = 0; a < 5; ++a) {
    out << "  " << kLevelNames[a];
    for (int v = 0; v < 5; ++v) {
      std::string cell = std::to_string(r.cross_level[a][v]);
      out << std::string(cell.size() < 6 ? 6 - cell.size() : 1, ' ') << cell;
    }
    out << "\n";
  }
  if (!r.trust_violations.empty()) {
    out << "\nTrust inconsistencies\n";
    for (const auto& t : r.trust_violations) {
      out << "  " << t.subject << " (" << t.level << "): " << JoinSemicolon(t.members) << "\n";
    }
  }
  out << "\nAssumptions\n";
  for (const auto& a : r.assumptions) out << "  - " << a << "\n";
  if (!r.ops.empty()) out << "\nOperations\n";
  for (const auto& op : r.ops) {
    out << "  " << op.type << " [" << op.source_kind << "] victim " << op.victim << " object "
        << op.object << " via " << JoinSemicolon(op.witness_paths) << " by "
        << JoinSemicolon(op.adversaries) << "\n";
  }
  return out.str();
}

}  // namespace

std::map<std::string, std::string> render(const TriageReport& report, std::string_view format) {
  if (format == "json") return {{"report.json", render_json(report)}};
  if (format == "csv") return RenderCsv(report);
  if (format == "text") return {{"report.txt", RenderText(report)}};
  throw UsageError("unknown report format '" + std::string(format) + "' (json|csv|text)");
}

// ---- deltas ---------------------------------------------------------------

bool ReportDelta::empty() const { return size() == 0; }

std::size_t ReportDelta::size() const {
  return changed.size() + added_ivs.size() + removed_ivs.size() + added_ops.size() +
         removed_ops.size();
}

namespace {

template <typename T>
void Differences(const std::vector<T>& a, const std::vector<T>& b, std::vector<T>& only_a,
                 std::vector<T>& only_b) {
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
}

template <typename T>
std::vector<T> Apply(const std::vector<T>& base, const std::vector<T>& removed,
                     const std::vector<T>& added) {
  std::vector<T> kept, out;
  std::set_difference(base.begin(), base.end(), removed.begin(), removed.end(),
                      std::back_inserter(kept));
  std::set_union(kept.begin(), kept.end(), added.begin(), added.end(), std::back_inserter(out));
  return out;
}

void CheckSchema(int a, int b) {
  if (a != b) {
    throw IntegrityError("report schema versions differ: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

ReportDelta diff_reports(const TriageReport& old_report, const TriageReport& new_report) {
  CheckSchema(old_report.schema_version, new_report.schema_version);
  ReportDelta d;
  d.schema_version = new_report.schema_version;
  auto a = report_to_json(old_report), b = report_to_json(new_report);
  for (const auto& [key, value] : b.items()) {
    if (key == "ivs" || key == "ops") continue;
    if (!a.contains(key) || a[key] != value) d.changed[key] = value;
  }
  Differences(old_report.ivs, new_report.ivs, d.removed_ivs, d.added_ivs);
  Differences(old_report.ops, new_report.ops, d.removed_ops, d.added_ops);
  return d;
}

TriageReport apply_delta(const TriageReport& old_report, const ReportDelta& delta) {
  CheckSchema(old_report.schema_version, delta.schema_version);
  auto j = report_to_json(old_report);
  for (const auto& [key, value] : delta.changed) j[key] = value;
  auto out = report_from_json(j);
  out.ivs = Apply(old_report.ivs, delta.removed_ivs, delta.added_ivs);
  out.ops = Apply(old_report.ops, delta.removed_ops, delta.added_ops);
  return out;
}

json delta_to_json(const ReportDelta& d) {
  json ivs_added = json::array(), ivs_removed = json::array();
  json ops_added = json::array(), ops_removed = json::array();
  for (const auto& r : d.added_ivs) ivs_added.push_back(IvToJson(r));
  for (const auto& r : d.removed_ivs) ivs_removed.push_back(IvToJson(r));
  for (const auto& r : d.added_ops) ops_added.push_back(OpToJson(r));
  for (const auto& r : d.removed_ops) ops_removed.push_back(OpToJson(r));
  json changed = json::object();
  for (const auto& [k, v] : d.changed) changed[k] = v;
  return {{"schema_version", d.schema_version}, {"changed", changed},
          {"added_ivs", ivs_added},             {"removed_ivs", ivs_removed},
          {"added_ops", ops_added},             {"removed_ops", ops_removed}};
}

}  // namespace mactriage
