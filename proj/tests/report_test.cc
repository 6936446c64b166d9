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
#include <random>

#include <gtest/gtest.h>

#include "mactriage/errors.h"
#include "mactriage/expansion.h"
#include "mactriage/oracle.h"
#include "test_support.h"

namespace mactriage {
namespace {

using testing::MiniSystem;

MiniSystem Fixture() {
  MiniSystem m;
  m.Allow("system_server d_t:dir search")
      .Allow("system_server f_t:file { read open }")
      .Allow("untrusted_app d_t:dir { write add_name }")
      .Allow("untrusted_app f_t:file write")
      .Proc("untrusted_app", "u0_a5")
      .Proc("system_server", "system")
      .File("/data", "drwxrwxrwx u0_a5 u0_a5 u:object_r:d_t:s0 box")
      .File("/data", "-rw-rw-rw- u0_a5 u0_a5 u:object_r:f_t:s0 f")
      .Ipc("untrusted_app -> system_server\n")
      .Fileprovider("system_server\n");
  return m;
}

TriageReport Summarize(const SystemSnapshot& snap, const AnalysisOptions& opt = {}) {
  return summarize(snap, run_analysis(snap, opt), opt);
}

TEST(CountAuthorizedDataFlows, Trivial) {
  auto one = MiniSystem()
                 .Allow("a f_t:file read")
                 .Proc("a", "u0_a5")
                 .File("/data", "-rw-r--r-- root root u:object_r:f_t:s0 f")
                 .Build();
  EXPECT_EQ(count_authorized_data_flows(one), 1u);
  auto none = MiniSystem()
                  .Allow("a f_t:file write")
                  .Proc("a", "u0_a5")
                  .File("/data", "-rw-r--r-- root root u:object_r:f_t:s0 f")
                  .Build();
  EXPECT_EQ(count_authorized_data_flows(none), 0u);
}

TEST(CountAuthorizedDataFlows, MatchesPairwiseEnumeration) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    auto snap = assemble_snapshot(generate_system(spec).inputs);
    std::uint64_t want = 0;
    for (SubjectId s = 0; s < snap.subjects.size(); ++s) {
      for (ObjectId o = 0; o < snap.objects.size(); ++o) {
        want += can_access(snap, s, o, AccessKind::kRead) ||
                can_access(snap, s, o, AccessKind::kExec) ||
                can_access(snap, s, o, AccessKind::kUseBinding);
      }
    }
    EXPECT_EQ(count_authorized_data_flows(snap), want);
  }
}

TEST(Summarize, AverageOperationsPerIv) {
  auto r = Summarize(Fixture().Build());
  // read, binding, pathname IVs; file_mod, file_squat, link_traversal ops.
  EXPECT_EQ(r.total_ivs_all_kinds, 3u);
  EXPECT_EQ(r.total_ivs, 2u);
  EXPECT_EQ(r.total_ops, 3u);
  EXPECT_EQ(r.ivs_with_ops, 2u);
  EXPECT_TRUE(r.avg_ops_defined);
  EXPECT_DOUBLE_EQ(r.avg_ops_per_iv, 1.5);
  EXPECT_EQ(r.attack_ops.at("luring_traversal"), 0u);
  EXPECT_EQ(r.cross_level[0][3], 2u);
  EXPECT_EQ(r.ipc_source, "explicit");
}

TEST(Summarize, EmptyRun) {
  auto r = Summarize(MiniSystem().Proc("a", "u0_a5").Build());
  EXPECT_EQ(r.total_ivs_all_kinds, 0u);
  EXPECT_EQ(r.ivs_with_ops, 0u);
  EXPECT_FALSE(r.avg_ops_defined);
  EXPECT_EQ(r.avg_ops_per_iv, 0.0);
  for (const auto& [k, n] : r.valid_ivs) EXPECT_EQ(n, 0u) << k;
  auto csv = render(r, "csv");
  EXPECT_EQ(csv.at("ivs.csv"), "kind,victim,object,adversaries,via,victim_level\n");
  EXPECT_EQ(csv.at("ops.csv"), "type,source_kind,victim,object,adversaries,witness_paths\n");
  EXPECT_EQ(csv.at("trust.csv"), "subject,level,members\n");
}

TEST(Summarize, UnknownSubjectIsFatal) {
  auto snap = Fixture().Build();
  auto result = run_analysis(snap, {});
  result.ivs.push_back({IvKind::kRead, 99, 0, {0}, kViaNone});
  EXPECT_THROW(summarize(snap, result, {}), IntegrityError);
}

TEST(CrossLevelMatrix, SingleBindingIv) {
  LevelMap levels{{PrivilegeLevel::kT1, PrivilegeLevel::kT3}, {}};
  auto m = cross_level_matrix({{IvKind::kBinding, 1, 0, {0}, kViaNone}}, levels);
  LevelMatrix want{};
  want[0][2] = 1;
  EXPECT_EQ(m, want);
  EXPECT_EQ(cross_level_matrix({}, levels), LevelMatrix{});
  EXPECT_EQ(cross_level_matrix({{IvKind::kPathname, 1, 0, {0}, kViaNone}}, levels), LevelMatrix{});
}

std::vector<TriageReport> GeneratedReports(int n) {
  std::vector<TriageReport> out;
  for (int seed = 0; seed < n; ++seed) {
    GeneratorSpec spec;
    spec.seed = static_cast<std::uint64_t>(seed);
    auto sys = generate_system(spec);
    auto snap = assemble_snapshot(sys.inputs);
    AnalysisOptions opt;
    opt.classifier = LevelClassifier::Parse(sys.levels_conf);
    opt.signed_allowlist = parse_allowlist(sys.signed_allowlist);
    out.push_back(Summarize(snap, opt));
  }
  return out;
}

TEST(Summarize, GeneratedReportConsistency) {
  for (const auto& r : GeneratedReports(20)) {
    std::uint64_t cells = 0;
    for (int a = 0; a < 5; ++a) {
      for (int v = 0; v < 5; ++v) {
        if (a >= v) EXPECT_EQ(r.cross_level[a][v], 0u);
        cells += r.cross_level[a][v];
      }
    }
    EXPECT_EQ(cells, r.valid_ivs.at("read") + r.valid_ivs.at("write") + r.valid_ivs.at("exec") +
                         r.valid_ivs.at("binding"));
    for (const auto& [kind, n] : r.te_ivs) EXPECT_LE(r.valid_label_ivs.at(kind), n) << kind;
    EXPECT_LE(r.ivs_with_ops, r.total_ivs_all_kinds);
    if (r.avg_ops_defined) EXPECT_GE(r.avg_ops_per_iv, 1.0);
  }
}

TEST(Render, CanonicalJson) {
  auto snap = Fixture().Build();
  auto a = render_json(Summarize(snap));
  EXPECT_EQ(a, render_json(Summarize(snap)));
  auto back = report_from_json(nlohmann::json::parse(a));
  EXPECT_EQ(render_json(back), a);
  EXPECT_EQ(render(back, "json").at("report.json"), a);
  EXPECT_THROW(render(back, "xml"), UsageError);
  EXPECT_THROW(report_from_json(nlohmann::json::parse("{\"schema_version\": \"x\"}")), ParseError);
  EXPECT_FALSE(render(back, "text").at("report.txt").empty());
}

TEST(Render, RoundTripOnGeneratedReports) {
  for (const auto& r : GeneratedReports(10)) {
    auto s = render_json(r);
    EXPECT_EQ(render_json(report_from_json(nlohmann::json::parse(s))), s);
  }
}

TEST(DiffReports, IdenticalAndSingleAddition) {
  auto old_r = Summarize(Fixture().Build());
  EXPECT_TRUE(diff_reports(old_r, old_r).empty());
  auto new_r = old_r;
  new_r.ivs.push_back({"read", "x|||", "y|||", {"z"}, {}, "T3"});
  std::sort(new_r.ivs.begin(), new_r.ivs.end());
  auto d = diff_reports(old_r, new_r);
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.added_ivs.size(), 1u);
  EXPECT_EQ(render_json(apply_delta(old_r, d)), render_json(new_r));
  new_r.schema_version = 2;
  EXPECT_THROW(diff_reports(old_r, new_r), IntegrityError);
}

TEST(DiffReports, RandomPairsMatchSetDifference) {
  auto reports = GeneratedReports(12);
  for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
    const auto& a = reports[i];
    const auto& b = reports[i + 1];
    auto d = diff_reports(a, b);
    std::vector<IvRecord> added, removed;
    std::set_difference(b.ivs.begin(), b.ivs.end(), a.ivs.begin(), a.ivs.end(),
                        std::back_inserter(added));
    std::set_difference(a.ivs.begin(), a.ivs.end(), b.ivs.begin(), b.ivs.end(),
                        std::back_inserter(removed));
    EXPECT_EQ(d.added_ivs, added);
    EXPECT_EQ(d.removed_ivs, removed);
    std::vector<OpRecord> added_ops;
    std::set_difference(b.ops.begin(), b.ops.end(), a.ops.begin(), a.ops.end(),
                        std::back_inserter(added_ops));
    EXPECT_EQ(d.added_ops, added_ops);
    EXPECT_EQ(render_json(apply_delta(a, d)), render_json(b));
    EXPECT_FALSE(delta_to_json(d).empty());
  }
}

}  // namespace
}  // namespace mactriage
