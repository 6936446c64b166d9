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

#include "mactriage/analysis.h"

#include <algorithm>

#include "mactriage/expansion.h"

namespace mactriage {

AnalysisResult run_analysis(const SystemSnapshot& snapshot, const AnalysisOptions& options) {
  AnalysisResult r;
  r.levels = assign_privilege_levels(snapshot, options.classifier);
  for (SubjectId s : r.levels.defaulted) {
    r.warnings.push_back("no level rule matched " + snapshot.subjects[s].Key() +
                         "; default " +
                         std::string(PrivilegeLevelName(options.classifier.default_level())));
  }
  r.wall = compute_integrity_wall(snapshot.policy, options.kernel_labels);
  r.adversaries = compute_adversaries(snapshot, r.levels, r.wall);
  for (SubjectId s = 0; s < snapshot.subjects.size(); ++s) {
    if (!r.adversaries.trust.entries[s].consistent) {
      r.warnings.push_back("trust inconsistency for " + snapshot.subjects[s].Key() +
                           ": worst-case TCB exceeds best-case trust");
    }
  }

  TeLevelMap te_levels(snapshot, r.levels, options.classifier);
  r.te_ivs = compute_te_ivs(snapshot.policy, te_levels);

  std::vector<std::string> unmatched;
  auto allow = resolve_allowlist(snapshot, options.signed_allowlist, &unmatched);
  for (const auto& u : unmatched) r.warnings.push_back("allowlist: no subject matches '" + u + "'");

  const IpcMap& ipc = options.ipc_override ? *options.ipc_override : snapshot.ipc_map;
  r.ipc_source = ipc.source;
  auto ctx = ValidationContext::Build(snapshot, r.levels, options.expansion, allow, ipc);
  r.validation = validate_te_ivs(r.te_ivs, ctx, options.partitions);
  r.pathname_ivs = compute_pathname_ivs(r.te_ivs, ctx, options.partitions);

  r.ivs = r.validation.ivs;
  r.ivs.insert(r.ivs.end(), r.pathname_ivs.begin(), r.pathname_ivs.end());
  std::sort(r.ivs.begin(), r.ivs.end());
  r.ops = compute_attack_operations(r.ivs, snapshot);
  return r;
}

}  // namespace mactriage
