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

#include "mactriage/expansion.h"

#include <algorithm>

#include "text_util.h"

namespace mactriage {

DacIdentity ExpandedSubject::Effective() const {
  DacIdentity id = base.dac;
  id.supplementary.insert(id.supplementary.end(), gained_groups.begin(),
                          gained_groups.end());
  std::sort(id.supplementary.begin(), id.supplementary.end());
  id.supplementary.erase(std::unique(id.supplementary.begin(), id.supplementary.end()),
                         id.supplementary.end());
  return id;
}

Subject ExpandedSubject::AsSubject() const {
  Subject s = base;
  s.dac = Effective();
  return s;
}

ExpandedSubject adversary_expand(const Subject& subject,
                                 const AndroidPermissionMap& perm_map,
                                 bool signature_obtainable) {
  ExpandedSubject out;
  out.base = subject;
  for (const auto& [name, entry] : perm_map.entries) {
    bool obtainable = entry.level == ProtectionLevel::kNormal ||
                      entry.level == ProtectionLevel::kDangerous || signature_obtainable;
    if (!obtainable) continue;
    for (const auto& g : entry.groups) {
      if (subject.dac.InGroup(g)) continue;
      // map iteration is by name, so the first insert is the smallest name
      if (out.granting_permissions.emplace(g.canonical(), name).second) {
        out.gained_groups.push_back(g);
      }
    }
  }
  std::sort(out.gained_groups.begin(), out.gained_groups.end());
  return out;
}

std::vector<std::string> parse_allowlist(std::string_view text) {
  std::vector<std::string> out;
  for (auto raw : text::Lines(text)) {
    auto line = text::StripComment(raw);
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

std::vector<bool> resolve_allowlist(const SystemSnapshot& snapshot,
                                    const std::vector<std::string>& selectors,
                                    std::vector<std::string>* unmatched) {
  std::vector<bool> flags(snapshot.subjects.size(), false);
  for (const auto& sel : selectors) {
    auto ids = snapshot.SelectSubjects(sel);
    if (ids.empty() && unmatched) unmatched->push_back(sel);
    for (auto id : ids) flags[id] = true;
  }
  return flags;
}

std::vector<DelegationTarget> victim_expansion_targets(const SystemSnapshot& snapshot,
                                                       SubjectId adversary,
                                                       SubjectId victim) {
  std::vector<DelegationTarget> out;
  const auto& owner = snapshot.subjects[adversary].dac.uid;
  for (ObjectId o = 0; o < snapshot.objects.size(); ++o) {
    const auto& obj = snapshot.objects[o];
    if (!(obj.owner == owner)) continue;
    if (!snapshot.MlsAllows(victim, o)) continue;
    DelegationTarget t{adversary, victim, o, {}};
    for (auto kind : kAllAccessKinds) {
      if (snapshot.TeAllows(victim, o, kind)) t.kinds.push_back(kind);
    }
    if (!t.kinds.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace mactriage
