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


// Two-stage integrity-violation computation: label-level TeIvs from the TE
// policy alone, then validation of each TeIv against MLS, DAC and permission
// expansion at subject/object granularity.

#ifndef MACTRIAGE_IV_ENGINE_H_
#define MACTRIAGE_IV_ENGINE_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mactriage/adversary.h"
#include "mactriage/core_model.h"
#include "mactriage/snapshot.h"

namespace mactriage {

enum class IvKind : std::uint8_t { kRead, kWrite, kExec, kBinding, kPathname };
inline constexpr IvKind kAllIvKinds[] = {IvKind::kRead, IvKind::kWrite, IvKind::kExec,
                                         IvKind::kBinding, IvKind::kPathname};

std::string_view IvKindName(IvKind k);  // "read", ..., "pathname"
std::optional<IvKind> ParseIvKind(std::string_view name);
// Victim access checked by the kind, and the object class it applies to.
AccessKind VictimAccess(IvKind k);
ObjClass TargetClass(IvKind k);

struct TeIv {
  IvKind kind = IvKind::kRead;
  TypeId victim = kNoType;
  TypeId object = kNoType;
  std::vector<TypeId> adversaries;  // sorted, non-empty

  friend bool operator==(const TeIv&, const TeIv&) = default;
};

// Read/Write/Exec TeIvs on file-class types and Binding TeIvs on dir-class
// types: the victim type holds the access and some adversary type holds a
// write-like authorization on the same target. Ordered by (kind, object,
// victim).
std::vector<TeIv> compute_te_ivs(const TePolicy& policy, const TeLevelMap& levels);

enum ViaExpansion : std::uint8_t {
  kViaNone = 0,
  kViaAdversary = 1,
  kViaVictim = 2,
};

struct IntegrityViolation {
  IvKind kind = IvKind::kRead;
  SubjectId victim = 0;
  ObjectId object = 0;
  std::vector<SubjectId> adversaries;  // sorted, non-empty
  std::uint8_t via = kViaNone;

  friend auto operator<=>(const IntegrityViolation&, const IntegrityViolation&) = default;
};

// Everything validation reads, precomputed once and shared read-only by the
// partition workers.
struct ValidationContext {
  const SystemSnapshot* snapshot = nullptr;
  const IpcMap* ipc = nullptr;
  bool expansion = true;
  std::vector<int> ranks;                          // per subject
  std::vector<DacIdentity> adversary_identity;     // expanded (or base) per subject
  std::vector<std::vector<SubjectId>> subjects_by_type;
  std::vector<std::vector<ObjectId>> files_by_type;
  std::vector<std::vector<ObjectId>> dirs_by_type;

  // `signed_allowlist` flags subjects that may obtain signature permissions.
  static ValidationContext Build(const SystemSnapshot& snapshot, const LevelMap& levels,
                                 bool expansion, const std::vector<bool>& signed_allowlist,
                                 const IpcMap& ipc);
};

struct ValidationResult {
  std::vector<IntegrityViolation> ivs;  // sorted
  std::size_t te_iv_count = 0;
  std::size_t skipped_unmapped = 0;  // victim type or every adversary type unmapped
};

// Stable bucket of a TeIv among `partitions` workers.
std::size_t partition_of(const TeIv& iv, const TePolicy& policy, std::size_t partitions);

// Result is identical for every partitions >= 1.
ValidationResult validate_te_ivs(const std::vector<TeIv>& te_ivs,
                                 const ValidationContext& ctx, std::size_t partitions);

// Pathname IVs derived from the Binding TeIvs: an IPC channel from the
// adversary, an adversary write on the binding, and victim use either by
// current DAC or by delegation on an adversary-owned binding.
std::vector<IntegrityViolation> compute_pathname_ivs(const std::vector<TeIv>& te_ivs,
                                                     const ValidationContext& ctx,
                                                     std::size_t partitions);

}  // namespace mactriage

#endif  // MACTRIAGE_IV_ENGINE_H_
