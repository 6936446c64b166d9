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

// Parsers for the collected text artifacts and assembly of the immutable
// SystemSnapshot that every analysis stage reads.
//
// Snapshot directory layout:
//   sepolicy_allow.txt       sesearch -A output
//   attributes.txt           seinfo -a -x output
//   files.txt                ls -lRZ output (MODE USER GROUP LABEL NAME)
//   procs.txt                ps -A -o label,user,group,COMMAND (+ pid)
//   proc_groups.txt          `PID g1 g2 ...` from /proc/<pid>/status
//   platform_permissions.xml platform.xml permission -> gid mapping
//   mounts.txt               mount output
// Optional: protection_levels.txt, fileprovider.txt, ipc.txt,
// init_groups.txt, types.txt, pathname_receivers.txt.

#ifndef MACTRIAGE_SNAPSHOT_H_
#define MACTRIAGE_SNAPSHOT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mactriage/core_model.h"

namespace mactriage {

using SubjectId = std::uint32_t;
using ObjectId = std::uint32_t;

// ---- sesearch / seinfo -------------------------------------------------

// `allow SRC TGT:CLASS PERM;` or `allow SRC TGT:CLASS { P1 P2 };`. Other
// rule keywords (dontaudit, auditallow, neverallow, allowxperm,
// type_transition, ...) are skipped. Result is sorted with exact duplicates
// merged.
std::vector<MacAllowRule> parse_allow_rules(std::string_view text);
std::string render_allow_rules(const std::vector<MacAllowRule>& rules);

// `attribute NAME;` headers followed by one member type per line.
AttributeMap parse_attribute_map(std::string_view text);
std::string render_attribute_map(const AttributeMap& attributes);

// seinfo -t style type list: one identifier per line, an optional
// `Types: N` header.
std::set<std::string> parse_type_list(std::string_view text);

// ---- ls -lRZ ------------------------------------------------------------

struct RawFileRecord {
  std::string path;
  Mode mode;
  ObjClass obj_class = ObjClass::kFile;
  std::string owner;
  std::string group;
  std::string te;
  MlsContext mls;

  friend auto operator<=>(const RawFileRecord&, const RawFileRecord&) = default;
};

std::vector<RawFileRecord> parse_file_listing(std::string_view text);
std::string render_file_listing(const std::vector<RawFileRecord>& records);

// ---- ps + /proc groups --------------------------------------------------

struct RawProcessRecord {
  std::string te;
  MlsContext mls;
  std::string user;
  std::string group;
  std::string command;
  std::optional<std::uint64_t> pid;
  std::vector<std::string> supplementary;
  bool groups_known = false;

  friend auto operator<=>(const RawProcessRecord&,
                          const RawProcessRecord&) = default;
};

struct ProcessListing {
  std::vector<RawProcessRecord> records;
  std::vector<std::string> warnings;
};

ProcessListing parse_process_listing(std::string_view ps_text,
                                     std::string_view groups_text);
// Returns {ps_text, groups_text}. Records with groups_known get a groups
// line.
std::pair<std::string, std::string> render_process_listing(
    const std::vector<RawProcessRecord>& records);

// ---- platform.xml --------------------------------------------------------

enum class ProtectionLevel : std::uint8_t {
  kNormal,
  kDangerous,
  kSignature,
  kSignaturePrivileged,
};

std::string_view ProtectionLevelName(ProtectionLevel level);
std::optional<ProtectionLevel> ParseProtectionLevel(std::string_view text);

struct PermissionEntry {
  std::vector<DacId> groups;  // sorted, non-empty
  ProtectionLevel level = ProtectionLevel::kSignature;

  friend bool operator==(const PermissionEntry&, const PermissionEntry&) = default;
};

struct AndroidPermissionMap {
  std::map<std::string, PermissionEntry> entries;
  std::vector<std::string> warnings;
};

// `<permission name=.. [protectionLevel=..]><group gid=../></permission>`.
// Levels missing inline come from `levels_text` (`name level` lines) and
// default to signature with a warning. Permissions without groups are
// omitted.
AndroidPermissionMap parse_permission_map(
    std::string_view xml_text, std::string_view levels_text = {},
    const IdResolver& ids = IdResolver::Aosp());
std::string render_permission_map(const AndroidPermissionMap& map);

// ---- mount ----------------------------------------------------------------

enum MountFlag : std::uint8_t {
  kMountRw = 1,
  kMountRo = 2,
  kMountNoSymlink = 4,
};

struct MountEntry {
  std::string mountpoint;
  std::uint8_t flags = kMountRw;
  std::string device = "none";
  std::string fstype = "unknown";

  friend auto operator<=>(const MountEntry&, const MountEntry&) = default;
};

struct MountTable {
  std::vector<MountEntry> entries;  // mount order; later entries shadow
};

// `DEV on MOUNTPOINT type FSTYPE (flag1,flag2,...)`. Flags other than ro,
// rw and nosymlink are dropped; a `/` rw entry is synthesized if absent.
MountTable parse_mounts(std::string_view text);
std::string render_mounts(const MountTable& table);

// ---- init.rc groups sidecar -------------------------------------------------

// `service NAME group g1 g2 ...` -> NAME -> groups.
std::map<std::string, std::vector<std::string>> parse_init_groups(
    std::string_view text);

// ---- assembled snapshot -------------------------------------------------------

struct ProgramConfig {
  std::vector<SubjectId> fileprovider_subjects;  // sorted
};

struct IpcMap {
  enum class Source : std::uint8_t {
    kExplicit,     // ipc.txt
    kReceivers,    // pathname_receivers.txt
    kAllChannels,  // no metadata: every ordered pair, an upper bound
  };
  Source source = Source::kAllChannels;
  std::set<std::pair<SubjectId, SubjectId>> channels;  // (adversary, victim)
  std::vector<bool> receivers;                         // kReceivers only

  bool HasChannel(SubjectId adversary, SubjectId victim) const;
};

std::string_view IpcSourceName(IpcMap::Source s);

struct SnapshotInputs {
  std::string allow_rules;
  std::string attributes;
  std::string files;
  std::string procs;
  std::string proc_groups;
  std::string platform_xml;
  std::string mounts;
  std::optional<std::string> protection_levels;
  std::optional<std::string> fileprovider;
  std::optional<std::string> ipc;
  std::optional<std::string> init_groups;
  std::optional<std::string> types;
  std::optional<std::string> pathname_receivers;

  // Reads the layout above. Missing mandatory file -> IngestError naming it.
  static SnapshotInputs ReadDirectory(const std::filesystem::path& dir);
};

struct SnapshotOptions {
  AccessConfig access;
  IdResolver ids;
};

class SystemSnapshot {
 public:
  std::string id;  // content hash of the inputs

  std::vector<MacAllowRule> te_rules;
  AttributeMap attr_map;
  AccessConfig access;
  TePolicy policy;

  std::vector<Subject> subjects;      // sorted by Key()
  std::vector<ObjectEntity> objects;  // sorted by Key()
  std::vector<TypeId> subject_types;  // policy ids, parallel to subjects
  std::vector<TypeId> object_types;   // policy ids, parallel to objects

  AndroidPermissionMap perm_map;
  MountTable mounts;
  ProgramConfig program_config;
  IpcMap ipc_map;
  IdResolver ids;

  std::size_t process_count = 0;
  std::size_t file_count = 0;
  // Rule-source TE types that no running process carries.
  std::vector<std::string> unmapped_te_types;
  // Subject/object TE types the policy never mentions.
  std::vector<std::string> unknown_te_types;
  std::vector<std::string> warnings;

  // Exact key lookup.
  std::optional<SubjectId> FindSubject(std::string_view key) const;
  std::optional<ObjectId> FindObject(std::string_view key) const;
  // A full subject key, or a bare TE type selecting every subject of it.
  std::vector<SubjectId> SelectSubjects(std::string_view selector) const;

  int AccessSlot(AccessKind kind, ObjClass cls) const {
    return slots_[static_cast<int>(kind)][static_cast<int>(cls)];
  }
  bool TeAllows(SubjectId s, ObjectId o, AccessKind kind) const {
    return policy.Allows(subject_types[s], object_types[o],
                         AccessSlot(kind, objects[o].obj_class));
  }
  bool MlsAllows(SubjectId s, ObjectId o) const {
    return subject_mls_trusted_[s] || object_mls_trusted_[o] ||
           mls_allows(subjects[s].mls, objects[o].mls);
  }

  // Recomputes the cached slot table and bypass flags.
  void Reindex();

 private:
  int slots_[4][4] = {};
  std::vector<bool> subject_mls_trusted_;
  std::vector<bool> object_mls_trusted_;
};

SystemSnapshot assemble_snapshot(const SnapshotInputs& inputs,
                                 const SnapshotOptions& options = {});
SystemSnapshot build_snapshot(const std::filesystem::path& dir,
                              const SnapshotOptions& options = {});

// te_allows ∧ mls_allows ∧ dac_allows.
bool can_access(const SystemSnapshot& snapshot, SubjectId subject,
                ObjectId object, AccessKind kind);
bool can_access(const SystemSnapshot& snapshot, const Subject& subject,
                const ObjectEntity& object, AccessKind kind);

}  // namespace mactriage

#endif  // MACTRIAGE_SNAPSHOT_H_
