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

#include "mactriage/attack_surface.h"

#include <algorithm>

namespace mactriage {

std::string_view OpTypeName(OpType t) {
  switch (t) {
    case OpType::kFileMod: return "file_mod";
    case OpType::kFileSquat: return "file_squat";
    case OpType::kLinkTraversal: return "link_traversal";
    case OpType::kLuringTraversal: return "luring_traversal";
  }
  return "file_mod";
}

std::optional<OpType> ParseOpType(std::string_view name) {
  for (auto t : kAllOpTypes) {
    if (OpTypeName(t) == name) return t;
  }
  return std::nullopt;
}

MountIndex::MountIndex(const MountTable& table) {
  for (const auto& e : table.entries) flags_[e.mountpoint] = e.flags;
  flags_.try_emplace("/", kMountRw);
}

FsPredicateResult MountIndex::Evaluate(std::string_view path) const {
  std::string_view probe = path;
  while (!probe.empty() && probe.size() > 1 && probe.back() == '/') probe.remove_suffix(1);
  while (true) {
    if (auto it = flags_.find(probe); it != flags_.end()) {
      return {std::string(path), !(it->second & kMountRo),
              !(it->second & kMountNoSymlink), it->first};
    }
    auto slash = probe.rfind('/');
    if (slash == std::string_view::npos || probe == "/") break;
    probe = slash == 0 ? std::string_view("/") : probe.substr(0, slash);
  }
  const auto& root = *flags_.find("/");
  return {std::string(path), !(root.second & kMountRo), !(root.second & kMountNoSymlink),
          "/"};
}

FsPredicateResult evaluate_path(std::string_view path, const MountTable& mounts) {
  return MountIndex(mounts).Evaluate(path);
}

bool fs_writable(std::string_view path, const MountTable& mounts) {
  return evaluate_path(path, mounts).writable;
}

bool symlink_allowed(std::string_view path, const MountTable& mounts) {
  return evaluate_path(path, mounts).symlink_ok;
}

std::vector<AttackOperation> compute_attack_operations(
    const std::vector<IntegrityViolation>& ivs, const SystemSnapshot& snapshot) {
  MountIndex index(snapshot.mounts);
  const auto& providers = snapshot.program_config.fileprovider_subjects;
  std::vector<AttackOperation> ops;
  auto emit = [&](OpType type, const IntegrityViolation& iv, std::vector<std::string> w) {
    if (w.empty()) return;
    ops.push_back({type, iv.kind, iv.victim, iv.object, iv.adversaries, std::move(w)});
  };
  for (const auto& iv : ivs) {
    std::vector<std::string> writable, linkable;
    for (const auto& path : snapshot.objects[iv.object].paths) {
      auto r = index.Evaluate(path);
      if (!r.writable) continue;
      writable.push_back(path);
      if (r.symlink_ok) linkable.push_back(path);
    }
    switch (iv.kind) {
      case IvKind::kRead:
      case IvKind::kWrite:
      case IvKind::kExec:
        emit(OpType::kFileMod, iv, std::move(writable));
        break;
      case IvKind::kBinding:
        emit(OpType::kFileSquat, iv, std::move(writable));
        emit(OpType::kLinkTraversal, iv, std::move(linkable));
        break;
      case IvKind::kPathname:
        if (!std::binary_search(providers.begin(), providers.end(), iv.victim)) {
          emit(OpType::kLuringTraversal, iv, std::move(linkable));
        }
        break;
    }
  }
  std::sort(ops.begin(), ops.end());
  return ops;
}

}  // namespace mactriage
