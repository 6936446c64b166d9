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


// Runs the full pipeline over one snapshot: levels, integrity wall,
// adversaries, label-level IVs, partitioned validation, pathname IVs and
// attack operations.

#ifndef MACTRIAGE_ANALYSIS_H_
#define MACTRIAGE_ANALYSIS_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mactriage/adversary.h"
#include "mactriage/attack_surface.h"
#include "mactriage/iv_engine.h"
#include "mactriage/snapshot.h"

namespace mactriage {

struct AnalysisOptions {
  std::size_t partitions = 1;
  bool expansion = true;
  std::vector<std::string> signed_allowlist;  // subject selectors
  std::set<std::string> kernel_labels = DefaultKernelLabels();
  LevelClassifier classifier = LevelClassifier::AospDefault();
  // Replaces snapshot.ipc_map, e.g. with an all-channels map.
  std::optional<IpcMap> ipc_override;
};

struct AnalysisResult {
  LevelMap levels;
  IntegrityWall wall;
  AdversaryAnalysis adversaries;
  std::vector<TeIv> te_ivs;
  ValidationResult validation;                 // read/write/exec/binding
  std::vector<IntegrityViolation> pathname_ivs;
  std::vector<IntegrityViolation> ivs;         // all kinds, sorted
  std::vector<AttackOperation> ops;
  IpcMap::Source ipc_source = IpcMap::Source::kAllChannels;
  std::vector<std::string> warnings;
};

AnalysisResult run_analysis(const SystemSnapshot& snapshot, const AnalysisOptions& options);

}  // namespace mactriage

#endif  // MACTRIAGE_ANALYSIS_H_
