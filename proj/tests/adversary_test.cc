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

#include "mactriage/adversary.h"

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mactriage/errors.h"
#include "mactriage/oracle.h"
#include "test_support.h"

namespace mactriage {
namespace {

using testing::MiniSystem;

std::set<std::string> AsSet(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

TEST(PrivilegeLevel, NamesAndParsing) {
  EXPECT_EQ(PrivilegeLevelName(PrivilegeLevel::kT4), "T4");
  EXPECT_EQ(ParsePrivilegeLevel("T0"), PrivilegeLevel::kT1);
  EXPECT_EQ(ParsePrivilegeLevel("T5"), PrivilegeLevel::kT5);
  EXPECT_FALSE(ParsePrivilegeLevel("T6").has_value());
}

TEST(LevelClassifier, ParseGrammar) {
  auto c = LevelClassifier::Parse(
      "# comment\n"
      "match untrusted_app* => T1\n"
      "match * uid:root => T5\n"
      "match uid:system => T4\n"
      "default => T3\n");
  ASSERT_EQ(c.rules().size(), 3u);
  EXPECT_EQ(c.rules()[1].uid_glob, "root");
  EXPECT_FALSE(c.rules()[0].uid_glob.has_value());
  EXPECT_EQ(c.default_level(), PrivilegeLevel::kT3);
  EXPECT_EQ(LevelClassifier::Parse(c.Render()).Render(), c.Render());
  EXPECT_THROW(LevelClassifier::Parse("match x => T1\n"), ParseError);
  EXPECT_THROW(LevelClassifier::Parse("match x => T9\ndefault => T1\n"), ParseError);
  EXPECT_THROW(LevelClassifier::Parse("default => T1\nmatch x => T2\n"), ParseError);
  EXPECT_THROW(LevelClassifier::Parse("match x y => T2\ndefault => T1\n"), ParseError);
}

TEST(AssignPrivilegeLevels, DefaultClassifierExamples) {
  auto snap = MiniSystem()
                  .Allow("untrusted_app app_data_file:file read")
                  .Proc("untrusted_app", "u0_a5", "", "c512")
                  .Proc("mystery_daemon", "root")
                  .Proc("platform_app", "u0_a40")
                  .Proc("mediaserver", "media")
                  .Proc("other", "system")
                  .Build();
  auto levels = assign_privilege_levels(snap, LevelClassifier::AospDefault());
  auto level_of = [&](const char* te) {
    return levels.levels[snap.SelectSubjects(te).at(0)];
  };
  EXPECT_EQ(level_of("untrusted_app"), PrivilegeLevel::kT1);
  EXPECT_EQ(level_of("mystery_daemon"), PrivilegeLevel::kT5);
  EXPECT_EQ(level_of("platform_app"), PrivilegeLevel::kT2);
  EXPECT_EQ(level_of("mediaserver"), PrivilegeLevel::kT3);
  EXPECT_EQ(level_of("other"), PrivilegeLevel::kT4);
}

TEST(AssignPrivilegeLevels, OnlyDefault) {
  auto snap = MiniSystem().Proc("a", "root").Proc("b", "u0_a5").Build();
  auto levels = assign_privilege_levels(snap, LevelClassifier::Parse("default => T2\n"));
  EXPECT_EQ(levels.levels, std::vector<PrivilegeLevel>(2, PrivilegeLevel::kT2));
  EXPECT_EQ(levels.defaulted.size(), 2u);
}

TEST(KernelWriters, SingleWriter) {
  auto snap = MiniSystem()
                  .Allow("t_init rootfs:dir { write add_name }")
                  .Allow("t_other rootfs:file read")
                  .Proc("t_init", "root")
                  .Build();
  EXPECT_EQ(compute_kernel_writers(snap, DefaultKernelLabels()), std::set<std::string>{"t_init"});
  EXPECT_TRUE(compute_kernel_writers(snap, {}).empty());
}

TEST(IntegrityWall, ExecutedLabelWriters) {
  std::vector<MacAllowRule> rules = {
      {"s", "L", "file", {"execute"}},
      {"t_build", "L", "file", {"write"}},
      {"t_init", "rootfs", "file", {"write"}},
      {"idle", "other", "file", {"read"}},
  };
  auto policy = TePolicy::Compile(rules, {}, PermVocabulary::Default());
  auto wall = compute_integrity_wall(policy, DefaultKernelLabels());
  EXPECT_EQ(AsSet(tcb_names(policy, wall, "s")),
            (std::set<std::string>{"t_init", "t_build", "s"}));
  EXPECT_EQ(AsSet(tcb_names(policy, wall, "idle")), (std::set<std::string>{"t_init", "idle"}));
}

// Random 30-type policies against a direct scan of the rules.
TEST(IntegrityWall, RandomPoliciesMatchRuleScan) {
  const std::vector<std::string> perms = {"read", "write", "append", "execute", "add_name",
                                          "search", "getattr", "create"};
  auto vocab = PermVocabulary::Default();
  for (unsigned seed = 0; seed < 30; ++seed) {
    std::mt19937 rng(seed);
    std::vector<MacAllowRule> rules;
    auto type = [&](bool target) {
      if (target && rng() % 10 == 0) return std::string(rng() % 2 ? "rootfs" : "selinuxfs");
      return "t" + std::to_string(rng() % 30);
    };
    for (int i = 0; i < 120; ++i) {
      MacAllowRule r{type(false), type(true), rng() % 2 ? "file" : "dir", {}};
      r.perms.push_back(perms[rng() % perms.size()]);
      if (rng() % 2) r.perms.push_back(perms[rng() % perms.size()]);
      rules.push_back(r);
    }
    auto policy = TePolicy::Compile(rules, {}, vocab);
    auto wall = compute_integrity_wall(policy, DefaultKernelLabels());
    auto has = [&](const MacAllowRule& r, AccessKind k) {
      const auto& want = vocab.Perms(k, r.obj_class);
      return std::any_of(r.perms.begin(), r.perms.end(),
                         [&](const std::string& p) { return want.count(p) > 0; });
    };
    std::set<std::string> kw;
    for (const auto& r : rules) {
      if (DefaultKernelLabels().count(r.target) && has(r, AccessKind::kWrite)) kw.insert(r.source);
    }
    for (const auto& s : policy.type_names()) {
      auto want = kw;
      want.insert(s);
      for (const auto& ex : rules) {
        if (ex.source != s || ex.obj_class != "file" || !has(ex, AccessKind::kExec)) continue;
        for (const auto& w : rules) {
          if (w.target == ex.target && w.obj_class == "file" && has(w, AccessKind::kWrite)) {
            want.insert(w.source);
          }
        }
      }
      EXPECT_EQ(AsSet(tcb_names(policy, wall, s)), want) << "seed " << seed << " type " << s;
    }
  }
}

TEST(ComputeAdversaries, StrictlyLowerLevels) {
  auto snap = MiniSystem()
                  .Proc("l1", "u0_a5")
                  .Proc("l2", "u0_a40")
                  .Proc("l3", "media")
                  .Proc("l4", "system")
                  .Build();
  auto classifier = LevelClassifier::Parse(
      "match l1 => T1\nmatch l2 => T2\nmatch l3 => T3\nmatch l4 => T4\ndefault => T5\n");
  auto levels = assign_privilege_levels(snap, classifier);
  auto wall = compute_integrity_wall(snap.policy, DefaultKernelLabels());
  auto adv = compute_adversaries(snap, levels, wall);
  auto id = [&](const char* te) { return snap.SelectSubjects(te).at(0); };
  auto got = adv.adversaries[id("l3")];
  std::sort(got.begin(), got.end());
  std::vector<SubjectId> want = {id("l1"), id("l2")};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
  EXPECT_TRUE(adv.adversaries[id("l1")].empty());

  auto all_t5 = assign_privilege_levels(snap, LevelClassifier::Parse("default => T5\n"));
  for (const auto& a : compute_adversaries(snap, all_t5, wall).adversaries) {
    EXPECT_TRUE(a.empty());
  }
}

TEST(ComputeAdversaries, LowerWallMemberIsAViolation) {
  auto snap = MiniSystem()
                  .Allow("vold vold_exec:file execute")
                  .Allow("sh vold_exec:file write")
                  .Proc("vold", "root")
                  .Proc("sh", "shell")
                  .Build();
  auto levels = assign_privilege_levels(
      snap, LevelClassifier::Parse("match vold => T5\nmatch sh => T1\ndefault => T3\n"));
  auto wall = compute_integrity_wall(snap.policy, DefaultKernelLabels());
  auto adv = compute_adversaries(snap, levels, wall);
  auto vold = snap.SelectSubjects("vold").at(0);
  auto sh = snap.SelectSubjects("sh").at(0);
  const auto& e = adv.trust.entries[vold];
  EXPECT_FALSE(e.consistent);
  EXPECT_EQ(e.violations, std::vector<SubjectId>{sh});
  EXPECT_TRUE(adv.trust.entries[sh].consistent);
  EXPECT_EQ(adv.trust.inconsistent_count(), 1u);
}

// Properties over generated systems.
TEST(ComputeAdversaries, GeneratedSystemProperties) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    auto sys = generate_system(spec);
    auto snap = assemble_snapshot(sys.inputs);
    auto classifier = LevelClassifier::Parse(sys.levels_conf);
    auto levels = assign_privilege_levels(snap, classifier);
    auto wall = compute_integrity_wall(snap.policy, DefaultKernelLabels());
    auto adv = compute_adversaries(snap, levels, wall);
    auto kw = wall.kernel_writers();
    const auto n = snap.subjects.size();
    for (SubjectId v = 0; v < n; ++v) {
      std::set<SubjectId> av(adv.adversaries[v].begin(), adv.adversaries[v].end());
      for (SubjectId a = 0; a < n; ++a) {
        bool lower = Rank(levels.levels[a]) < Rank(levels.levels[v]);
        EXPECT_EQ(av.count(a) > 0, lower);
        if (lower) {
          const auto& back = adv.adversaries[a];
          EXPECT_EQ(std::count(back.begin(), back.end(), v), 0);
        }
      }
      TypeId t = snap.subject_types[v];
      const auto& tcb = wall.Tcb(t);
      EXPECT_TRUE(tcb.test(t));
      EXPECT_TRUE(kw.is_subset_of(tcb));
      const auto& e = adv.trust.entries[v];
      std::vector<SubjectId> diff;
      std::set_difference(e.worst_case_tcb.begin(), e.worst_case_tcb.end(),
                          e.best_case_trust.begin(), e.best_case_trust.end(),
                          std::back_inserter(diff));
      EXPECT_EQ(diff, e.violations);
      EXPECT_EQ(e.consistent, e.violations.empty());
    }
    // Type-level relation: adversary types of v are those with min rank below v's max.
    TeLevelMap tl(snap, levels, classifier);
    for (TypeId v = 0; v < snap.policy.type_count(); ++v) {
      if (!tl.Mapped(v)) continue;
      for (TypeId a = 0; a < snap.policy.type_count(); ++a) {
        if (!tl.Mapped(a)) continue;
        EXPECT_EQ(tl.AdversariesOf(v).test(a), tl.MinRank(a) < tl.MaxRank(v));
      }
    }
  }
}

}  // namespace
}  // namespace mactriage
