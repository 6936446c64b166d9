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


// Random small systems and a direct, unstaged evaluation of the IV and
// attack-operation rules used as the reference for the pipeline.

#ifndef MACTRIAGE_ORACLE_H_
#define MACTRIAGE_ORACLE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "mactriage/analysis.h"
#include "mactriage/attack_surface.h"
#include "mactriage/iv_engine.h"
#include "mactriage/snapshot.h"

namespace mactriage {

struct GeneratorSpec {
  std::uint64_t seed = 0;
  int n_subjects = 10;
  int n_objects = 40;
  int n_rules = 120;
  int n_mounts = 4;
  int n_permissions = 6;
  // Relative weights of T1..T5; levels with weight 0 are not generated.
  std::vector<double> level_distribution = {1, 1, 1, 1, 1};
  double ipc_density = 0.3;

  // Non-positive counts, density outside [0,1] or no weighted level ->
  // UsageError.
  void Validate() const;
};

struct GeneratedSystem {
  SnapshotInputs inputs;
  std::string levels_conf;        // `match l<k>_* => T<k>` lines
  std::string signed_allowlist;   // bare TE selectors
};

// Deterministic in the spec. Domain types are named l<k>_d<i> (k = level),
// domains with rules but no process l<k>_u<i>. At least one subject per
// weighted level (while subjects last) and one adversary-writable object.
GeneratedSystem generate_system(const GeneratorSpec& spec);
// Writes the snapshot files plus levels.conf and signed_allowlist.txt.
void write_system(const GeneratedSystem& system, const std::filesystem::path& dir);

// Rank encoded in a generated type name (l<k>_...), 0 if absent.
int generated_rank(std::string_view te);

struct OracleOptions {
  bool expansion = true;
  std::vector<std::string> signed_allowlist;  // bare TE names or full keys
  std::function<int(const Subject&)> rank_of;
  const IpcMap* ipc = nullptr;  // defaults to snapshot.ipc_map
};

struct OracleResult {
  std::vector<IntegrityViolation> ivs;  // sorted
  std::vector<AttackOperation> ops;     // sorted
};

// Triple loop over (victim, object, adversary) applying the rules directly.
std::vector<IntegrityViolation> brute_force_ivs(const SystemSnapshot& snapshot,
                                                const OracleOptions& options);
std::vector<AttackOperation> brute_force_ops(const SystemSnapshot& snapshot,
                                             const std::vector<IntegrityViolation>& ivs);

struct EquivalenceOptions {
  AnalysisOptions analysis;  // partitions is overridden
  OracleOptions oracle;      // expansion/allowlist/ipc copied from analysis
  std::vector<std::size_t> partitions = {1, 2, 4, 8};
  // Applied to every pipeline result before comparison (mutation testing).
  std::function<void(AnalysisResult&)> corrupt;
};

struct EquivalenceReport {
  bool pass = true;
  std::string counterexample;  // first differing tuple
  std::size_t ivs = 0;
  std::size_t ops = 0;
};

EquivalenceReport check_equivalence(const SystemSnapshot& snapshot,
                                    const EquivalenceOptions& options);

// Human-readable tuple for messages.
std::string describe(const SystemSnapshot& snapshot, const IntegrityViolation& iv);
std::string describe(const SystemSnapshot& snapshot, const AttackOperation& op);

}  // namespace mactriage

#endif  // MACTRIAGE_ORACLE_H_
