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

#include "mactriage/iv_engine.h"

#include <algorithm>
#include <array>
#include <thread>

#include "mactriage/expansion.h"
#include "text_util.h"

namespace mactriage {

std::string_view IvKindName(IvKind k) {
  switch (k) {
    case IvKind::kRead: return "read";
    case IvKind::kWrite: return "write";
    case IvKind::kExec: return "exec";
    case IvKind::kBinding: return "binding";
    case IvKind::kPathname: return "pathname";
  }
  return "read";
}

std::optional<IvKind> ParseIvKind(std::string_view name) {
  for (auto k : kAllIvKinds) {
    if (IvKindName(k) == name) return k;
  }
  return std::nullopt;
}

AccessKind VictimAccess(IvKind k) {
  switch (k) {
    case IvKind::kRead: return AccessKind::kRead;
    case IvKind::kWrite: return AccessKind::kWrite;
    case IvKind::kExec: return AccessKind::kExec;
    case IvKind::kBinding:
    case IvKind::kPathname: return AccessKind::kUseBinding;
  }
  return AccessKind::kRead;
}

ObjClass TargetClass(IvKind k) {
  return k == IvKind::kBinding || k == IvKind::kPathname ? ObjClass::kDir : ObjClass::kFile;
}

std::vector<TeIv> compute_te_ivs(const TePolicy& policy, const TeLevelMap& levels) {
  std::vector<TeIv> out;
  const std::size_t n = policy.type_count();
  // The adversary list of (victim, target) depends only on the victim's
  // max rank, so build it once per (target, rank).
  std::array<std::vector<TypeId>, kLevelCount + 1> by_rank;
  for (IvKind kind : {IvKind::kRead, IvKind::kWrite, IvKind::kExec, IvKind::kBinding}) {
    auto cls = MacClassOf(TargetClass(kind));
    int use = policy.Slot(VictimAccess(kind), cls);
    int write = policy.Slot(AccessKind::kWrite, cls);
    if (use < 0 || write < 0) continue;
    for (TypeId t = 0; t < n; ++t) {
      const auto& writers = policy.Grantees(write, t);
      if (writers.none()) continue;
      const auto& users = policy.Grantees(use, t);
      if (users.none()) continue;
      for (int k = 0; k <= kLevelCount; ++k) by_rank[k].clear();
      for (auto a = writers.find_first(); a != Bitset::npos; a = writers.find_next(a)) {
        for (int k = levels.MinRank(static_cast<TypeId>(a)) + 1; k <= kLevelCount; ++k) {
          by_rank[k].push_back(static_cast<TypeId>(a));
        }
      }
      for (auto v = users.find_first(); v != Bitset::npos; v = users.find_next(v)) {
        const auto& adv = by_rank[levels.MaxRank(static_cast<TypeId>(v))];
        if (!adv.empty()) out.push_back({kind, static_cast<TypeId>(v), t, adv});
      }
    }
  }
  return out;
}

ValidationContext ValidationContext::Build(const SystemSnapshot& snapshot,
                                           const LevelMap& levels, bool expansion,
                                           const std::vector<bool>& signed_allowlist,
                                           const IpcMap& ipc) {
  ValidationContext ctx;
  ctx.snapshot = &snapshot;
  ctx.ipc = &ipc;
  ctx.expansion = expansion;
  const std::size_t types = snapshot.policy.type_count();
  ctx.subjects_by_type.resize(types);
  ctx.files_by_type.resize(types);
  ctx.dirs_by_type.resize(types);
  for (SubjectId s = 0; s < snapshot.subjects.size(); ++s) {
    ctx.ranks.push_back(Rank(levels.levels[s]));
    bool sig = s < signed_allowlist.size() && signed_allowlist[s];
    ctx.adversary_identity.push_back(
        expansion ? adversary_expand(snapshot.subjects[s], snapshot.perm_map, sig).Effective()
                  : snapshot.subjects[s].dac);
    if (snapshot.subject_types[s] != kNoType) {
      ctx.subjects_by_type[snapshot.subject_types[s]].push_back(s);
    }
  }
  for (ObjectId o = 0; o < snapshot.objects.size(); ++o) {
    TypeId t = snapshot.object_types[o];
    if (t == kNoType) continue;
    if (snapshot.objects[o].obj_class == ObjClass::kFile) ctx.files_by_type[t].push_back(o);
    if (snapshot.objects[o].obj_class == ObjClass::kDir) ctx.dirs_by_type[t].push_back(o);
  }
  return ctx;
}

std::size_t partition_of(const TeIv& iv, const TePolicy& policy, std::size_t partitions) {
  if (partitions <= 1) return 0;
  auto h = text::Fnv1a(IvKindName(iv.kind));
  h = text::Fnv1a(policy.NameOf(iv.victim), text::Fnv1a("|", h));
  h = text::Fnv1a(policy.NameOf(iv.object), text::Fnv1a("|", h));
  return static_cast<std::size_t>(h % partitions);
}

namespace {

bool Skipped(const TeIv& iv, const ValidationContext& ctx) {
  if (ctx.subjects_by_type[iv.victim].empty()) return true;
  return std::all_of(iv.adversaries.begin(), iv.adversaries.end(),
                     [&](TypeId a) { return ctx.subjects_by_type[a].empty(); });
}

const std::vector<ObjectId>& Targets(const TeIv& iv, const ValidationContext& ctx) {
  return TargetClass(iv.kind) == ObjClass::kDir ? ctx.dirs_by_type[iv.object]
                                                : ctx.files_by_type[iv.object];
}

// Adversary write leg: base MLS, then DAC with the base identity and, if
// enabled, the expanded one. Returns the via flag, or nullopt if denied.
std::optional<std::uint8_t> AdversaryWrites(const ValidationContext& ctx, SubjectId a,
                                            ObjectId o) {
  const auto& snap = *ctx.snapshot;
  if (!snap.MlsAllows(a, o)) return std::nullopt;
  const auto& obj = snap.objects[o];
  if (dac_allows(snap.subjects[a].dac, obj, AccessKind::kWrite)) return kViaNone;
  if (ctx.expansion && dac_allows(ctx.adversary_identity[a], obj, AccessKind::kWrite)) {
    return kViaAdversary;
  }
  return std::nullopt;
}

void ValidateOne(const TeIv& iv, const ValidationContext& ctx,
                 std::vector<IntegrityViolation>& out) {
  const auto& snap = *ctx.snapshot;
  const AccessKind access = VictimAccess(iv.kind);
  for (SubjectId v : ctx.subjects_by_type[iv.victim]) {
    for (ObjectId o : Targets(iv, ctx)) {
      if (!can_access(snap, v, o, access)) continue;
      IntegrityViolation found{iv.kind, v, o, {}, kViaNone};
      for (TypeId at : iv.adversaries) {
        for (SubjectId a : ctx.subjects_by_type[at]) {
          if (ctx.ranks[a] >= ctx.ranks[v]) continue;
          if (auto via = AdversaryWrites(ctx, a, o)) {
            found.adversaries.push_back(a);
            found.via |= *via;
          }
        }
      }
      if (found.adversaries.empty()) continue;
      std::sort(found.adversaries.begin(), found.adversaries.end());
      out.push_back(std::move(found));
    }
  }
}

void PathnameOne(const TeIv& iv, const ValidationContext& ctx,
                 std::vector<IntegrityViolation>& out) {
  const auto& snap = *ctx.snapshot;
  for (SubjectId v : ctx.subjects_by_type[iv.victim]) {
    for (ObjectId b : ctx.dirs_by_type[iv.object]) {
      if (!snap.TeAllows(v, b, AccessKind::kUseBinding) || !snap.MlsAllows(v, b)) continue;
      const auto& obj = snap.objects[b];
      const bool victim_dac = dac_allows(snap.subjects[v].dac, obj, AccessKind::kUseBinding);
      IntegrityViolation found{IvKind::kPathname, v, b, {}, kViaNone};
      for (TypeId at : iv.adversaries) {
        for (SubjectId a : ctx.subjects_by_type[at]) {
          if (ctx.ranks[a] >= ctx.ranks[v] || !ctx.ipc->HasChannel(a, v)) continue;
          auto via = AdversaryWrites(ctx, a, b);
          if (!via) continue;
          if (!victim_dac) {
            if (!ctx.expansion || !(obj.owner == snap.subjects[a].dac.uid)) continue;
            *via |= kViaVictim;
          }
          found.adversaries.push_back(a);
          found.via |= *via;
        }
      }
      if (found.adversaries.empty()) continue;
      std::sort(found.adversaries.begin(), found.adversaries.end());
      out.push_back(std::move(found));
    }
  }
}

template <typename Fn>
std::vector<IntegrityViolation> RunPartitioned(const std::vector<TeIv>& te_ivs,
                                               const ValidationContext& ctx,
                                               std::size_t partitions, Fn&& per_iv) {
  partitions = std::max<std::size_t>(partitions, 1);
  std::vector<std::vector<std::size_t>> buckets(partitions);
  for (std::size_t i = 0; i < te_ivs.size(); ++i) {
    buckets[partition_of(te_ivs[i], ctx.snapshot->policy, partitions)].push_back(i);
  }
  std::vector<std::vector<IntegrityViolation>> results(partitions);
  auto work = [&](std::size_t p) {
    for (std::size_t i : buckets[p]) per_iv(te_ivs[i], results[p]);
    std::sort(results[p].begin(), results[p].end());
  };
  if (partitions == 1) {
    work(0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(partitions);
    for (std::size_t p = 0; p < partitions; ++p) workers.emplace_back(work, p);
  }
  // Buckets are disjoint in (kind, victim, object), so a sorted merge is the
  // set union.
  std::vector<IntegrityViolation> merged;
  for (auto& r : results) {
    auto mid = merged.size();
    merged.insert(merged.end(), std::make_move_iterator(r.begin()),
                  std::make_move_iterator(r.end()));
    std::inplace_merge(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(mid),
                       merged.end());
  }
  return merged;
}

}  // namespace

ValidationResult validate_te_ivs(const std::vector<TeIv>& te_ivs,
                                 const ValidationContext& ctx, std::size_t partitions) {
  ValidationResult result;
  result.te_iv_count = te_ivs.size();
  for (const auto& iv : te_ivs) {
    if (Skipped(iv, ctx)) ++result.skipped_unmapped;
  }
  result.ivs = RunPartitioned(te_ivs, ctx, partitions,
                              [&](const TeIv& iv, std::vector<IntegrityViolation>& out) {
                                if (!Skipped(iv, ctx)) ValidateOne(iv, ctx, out);
                              });
  return result;
}

std::vector<IntegrityViolation> compute_pathname_ivs(const std::vector<TeIv>& te_ivs,
                                                     const ValidationContext& ctx,
                                                     std::size_t partitions) {
  return RunPartitioned(te_ivs, ctx, partitions,
                        [&](const TeIv& iv, std::vector<IntegrityViolation>& out) {
                          if (iv.kind == IvKind::kBinding && !Skipped(iv, ctx)) {
                            PathnameOne(iv, ctx, out);
                          }
                        });
}

}  // namespace mactriage
