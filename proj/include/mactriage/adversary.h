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


// Per-subject adversaries: worst-case TCBs from the integrity wall,
// best-case trust from privilege levels, and the consistency check between
// the two.

#ifndef MACTRIAGE_ADVERSARY_H_
#define MACTRIAGE_ADVERSARY_H_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mactriage/core_model.h"
#include "mactriage/snapshot.h"

namespace mactriage {

// T1 untrusted/isolated apps, T2 privileged/platform apps, T3 services,
// T4 system, T5 root.
enum class PrivilegeLevel : std::uint8_t { kT1 = 1, kT2, kT3, kT4, kT5 };
inline constexpr int kLevelCount = 5;

inline int Rank(PrivilegeLevel l) { return static_cast<int>(l); }
std::string_view PrivilegeLevelName(PrivilegeLevel l);  // "T1".."T5"
std::optional<PrivilegeLevel> ParsePrivilegeLevel(std::string_view text);

inline const std::set<std::string>& DefaultKernelLabels() {
  static const std::set<std::string> kLabels = {"rootfs", "selinuxfs"};
  return kLabels;
}

// levels.conf:
//   match <te-glob> [uid:<glob>] => T<k>
//   match uid:<glob> => T<k>
//   default => T<k>
// First matching rule wins. uid globs match the symbolic name or the numeric
// id; `uid:@app` and `uid:@isolated` match the Android app uid ranges.
class LevelClassifier {
 public:
  struct Rule {
    std::string te_glob = "*";
    std::optional<std::string> uid_glob;
    PrivilegeLevel level = PrivilegeLevel::kT3;
  };

  LevelClassifier() = default;
  LevelClassifier(std::vector<Rule> rules, PrivilegeLevel default_level)
      : rules_(std::move(rules)), default_(default_level) {}

  // Missing `default` line -> ParseError.
  static LevelClassifier Parse(std::string_view text);
  static LevelClassifier AospDefault();

  // Level and whether a rule (rather than the default) decided it.
  std::pair<PrivilegeLevel, bool> Classify(const Subject& subject,
                                           const IdResolver& ids) const;
  // Level of a TE type with no running process: first rule without a uid
  // condition whose glob matches, else the default.
  PrivilegeLevel ClassifyTe(std::string_view te) const;

  const std::vector<Rule>& rules() const { return rules_; }
  PrivilegeLevel default_level() const { return default_; }
  std::string Render() const;

 private:
  std::vector<Rule> rules_;
  PrivilegeLevel default_ = PrivilegeLevel::kT3;
};

struct LevelMap {
  std::vector<PrivilegeLevel> levels;  // parallel to snapshot.subjects
  std::vector<SubjectId> defaulted;    // subjects no rule matched
};

LevelMap assign_privilege_levels(const SystemSnapshot& snapshot,
                                 const LevelClassifier& classifier);

// TE types holding a write-like (file or dir) authorization on any kernel
// label, as a bitset over the policy's type ids.
Bitset kernel_writer_types(const TePolicy& policy,
                           const std::set<std::string>& kernel_labels);
std::set<std::string> compute_kernel_writers(const SystemSnapshot& snapshot,
                                             const std::set<std::string>& kernel_labels);

// Worst-case TCB per TE type:
//   kernel writers ∪ writers of any file type s may execute ∪ {s}.
class IntegrityWall {
 public:
  IntegrityWall() = default;
  IntegrityWall(Bitset kernel_writers, std::vector<Bitset> tcb)
      : kernel_writers_(std::move(kernel_writers)), tcb_(std::move(tcb)) {}

  const Bitset& kernel_writers() const { return kernel_writers_; }
  const Bitset& Tcb(TypeId t) const { return tcb_[t]; }
  std::size_t type_count() const { return tcb_.size(); }

 private:
  Bitset kernel_writers_;
  std::vector<Bitset> tcb_;
};

IntegrityWall compute_integrity_wall(const TePolicy& policy,
                                     const std::set<std::string>& kernel_labels);
// Name-level view for one type, sorted.
std::vector<std::string> tcb_names(const TePolicy& policy, const IntegrityWall& wall,
                                   std::string_view te);

struct TrustEntry {
  std::vector<SubjectId> worst_case_tcb;   // subjects whose type is in tcb(te)
  std::vector<SubjectId> best_case_trust;  // subjects at the same or higher level
  std::vector<SubjectId> violations;       // worst_case_tcb \ best_case_trust
  bool consistent = true;
};

struct TrustReport {
  std::vector<TrustEntry> entries;  // parallel to snapshot.subjects
  std::size_t inconsistent_count() const;
};

struct AdversaryAnalysis {
  std::vector<std::vector<SubjectId>> adversaries;  // strictly lower level
  TrustReport trust;
};

AdversaryAnalysis compute_adversaries(const SystemSnapshot& snapshot,
                                      const LevelMap& levels,
                                      const IntegrityWall& wall);

// Levels lifted to TE types for the label-level stage. A type carried by
// subjects spans [min, max] of their levels; other types take the
// classifier's label-only level.
class TeLevelMap {
 public:
  TeLevelMap() = default;
  TeLevelMap(const SystemSnapshot& snapshot, const LevelMap& levels,
             const LevelClassifier& classifier);
  // Direct construction from per-type rank ranges (ranks 1..5).
  TeLevelMap(std::vector<int> min_rank, std::vector<int> max_rank, Bitset mapped);

  int MinRank(TypeId t) const { return min_rank_[t]; }
  int MaxRank(TypeId t) const { return max_rank_[t]; }
  bool Mapped(TypeId t) const { return mapped_.test(t); }
  // Types that may act as adversaries of a victim type: min rank below the
  // victim's max rank.
  const Bitset& AdversariesOf(TypeId victim) const {
    return below_[max_rank_[victim]];
  }

 private:
  std::vector<int> min_rank_;
  std::vector<int> max_rank_;
  Bitset mapped_;
  std::array<Bitset, kLevelCount + 1> below_;  // below_[k]: min rank < k

  void BuildPrefixes();
};

}  // namespace mactriage

#endif  // MACTRIAGE_ADVERSARY_H_
