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


// Adversary self-expansion through Android-permission DAC groups, and victim
// expansion through DAC delegation on adversary-owned objects.

#ifndef MACTRIAGE_EXPANSION_H_
#define MACTRIAGE_EXPANSION_H_

#include <map>
#include <string>
#include <vector>

#include "mactriage/core_model.h"
#include "mactriage/snapshot.h"

namespace mactriage {

struct ExpandedSubject {
  Subject base;
  std::vector<DacId> gained_groups;  // sorted, disjoint from base groups
  // canonical group -> first (by name) permission granting it
  std::map<std::string, std::string> granting_permissions;

  // base identity with the gained groups added to the supplementary set.
  DacIdentity Effective() const;
  // The base subject carrying the effective identity.
  Subject AsSubject() const;
};

// Groups of every normal or dangerous permission; signature-level
// permissions only when `signature_obtainable` (the subject is on the signed
// allowlist). Expanding an already expanded subject adds nothing.
ExpandedSubject adversary_expand(const Subject& subject,
                                 const AndroidPermissionMap& perm_map,
                                 bool signature_obtainable = false);

// Subjects named by allowlist selectors (full keys or bare TE types), as a
// per-subject flag. Unmatched selectors are appended to `unmatched`.
std::vector<bool> resolve_allowlist(const SystemSnapshot& snapshot,
                                    const std::vector<std::string>& selectors,
                                    std::vector<std::string>* unmatched = nullptr);
std::vector<std::string> parse_allowlist(std::string_view text);

struct DelegationTarget {
  SubjectId adversary = 0;
  SubjectId victim = 0;
  ObjectId object = 0;
  std::vector<AccessKind> kinds;  // kinds TE and MLS allow for the victim

  friend bool operator==(const DelegationTarget&, const DelegationTarget&) = default;
};

// Objects owned by the adversary's uid that the victim may use under TE and
// MLS for some kind, whatever the current DAC bits say.
std::vector<DelegationTarget> victim_expansion_targets(const SystemSnapshot& snapshot,
                                                       SubjectId adversary,
                                                       SubjectId victim);

}  // namespace mactriage

#endif  // MACTRIAGE_EXPANSION_H_
