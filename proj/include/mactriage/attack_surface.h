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


// Filesystem and program-configuration filters that turn validated IVs into
// attack operations.

#ifndef MACTRIAGE_ATTACK_SURFACE_H_
#define MACTRIAGE_ATTACK_SURFACE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mactriage/iv_engine.h"
#include "mactriage/snapshot.h"

namespace mactriage {

enum class OpType : std::uint8_t { kFileMod, kFileSquat, kLinkTraversal, kLuringTraversal };
inline constexpr OpType kAllOpTypes[] = {OpType::kFileMod, OpType::kFileSquat,
                                         OpType::kLinkTraversal, OpType::kLuringTraversal};

std::string_view OpTypeName(OpType t);  // "file_mod", "file_squat", ...
std::optional<OpType> ParseOpType(std::string_view name);

struct AttackOperation {
  OpType type = OpType::kFileMod;
  IvKind source_kind = IvKind::kRead;  // the IV this op was derived from
  SubjectId victim = 0;
  ObjectId object = 0;
  std::vector<SubjectId> adversaries;
  std::vector<std::string> witness_paths;  // sorted, subset of object paths

  friend auto operator<=>(const AttackOperation&, const AttackOperation&) = default;
};

struct FsPredicateResult {
  std::string path;
  bool writable = true;
  bool symlink_ok = true;
  std::string deciding_mountpoint;
};

// Longest-prefix (component-wise) lookup; later entries for the same
// mountpoint shadow earlier ones.
class MountIndex {
 public:
  explicit MountIndex(const MountTable& table);
  FsPredicateResult Evaluate(std::string_view path) const;

 private:
  std::map<std::string, std::uint8_t, std::less<>> flags_;
};

FsPredicateResult evaluate_path(std::string_view path, const MountTable& mounts);
bool fs_writable(std::string_view path, const MountTable& mounts);
bool symlink_allowed(std::string_view path, const MountTable& mounts);

// FileMod from Read/Write/Exec IVs, FileSquat and LinkTraversal from Binding
// IVs, LuringTraversal from Pathname IVs whose victim does not use
// FileProvider. Sorted.
std::vector<AttackOperation> compute_attack_operations(
    const std::vector<IntegrityViolation>& ivs, const SystemSnapshot& snapshot);

}  // namespace mactriage

#endif  // MACTRIAGE_ATTACK_SURFACE_H_
