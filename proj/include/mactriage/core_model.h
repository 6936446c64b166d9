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

// Domain types shared by every stage, and the three base access predicates
// (TE, MLS, DAC) that all integrity-violation rules compose.

#ifndef MACTRIAGE_CORE_MODEL_H_
#define MACTRIAGE_CORE_MODEL_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace mactriage {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

// Dense index of a TE type inside a compiled policy.
using TypeId = std::uint32_t;
inline constexpr TypeId kNoType = static_cast<TypeId>(-1);

struct TeType {
  std::string name;

  friend auto operator<=>(const TeType&, const TeType&) = default;
};

// MLS category set; kept sorted and unique.
class MlsContext {
 public:
  MlsContext() = default;
  explicit MlsContext(std::vector<std::string> categories);

  const std::vector<std::string>& categories() const { return categories_; }
  bool empty() const { return categories_.empty(); }
  // True iff every category of `other` is also in this context.
  bool Dominates(const MlsContext& other) const;
  std::string ToString() const;  // "c1,c2"

  friend auto operator<=>(const MlsContext&, const MlsContext&) = default;

 private:
  std::vector<std::string> categories_;
};

// Maps symbolic Android user/group names to numeric ids. Unknown names stay
// symbolic and compare by string equality.
class IdResolver {
 public:
  // Ships with the AOSP android_filesystem_config names plus the app
  // (u<N>_a<M>) and isolated (u<N>_i<M>) patterns.
  IdResolver();

  static const IdResolver& Aosp();

  // `name number` per line, '#' comments. Entries override defaults.
  void Load(std::string_view text);
  std::optional<std::uint32_t> Resolve(std::string_view name) const;

 private:
  std::unordered_map<std::string, std::uint32_t> names_;
};

// A UID or GID. Equality is on the canonical form: the numeric id when the
// name resolves, the name otherwise.
class DacId {
 public:
  DacId() = default;
  explicit DacId(std::string_view name,
                 const IdResolver& ids = IdResolver::Aosp());

  const std::string& name() const { return name_; }
  const std::string& canonical() const { return canonical_; }

  friend bool operator==(const DacId& a, const DacId& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const DacId& a, const DacId& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  std::string name_;
  std::string canonical_;
};

struct DacIdentity {
  DacId uid;
  DacId gid;
  std::vector<DacId> supplementary;  // sorted, unique

  // gid ∪ supplementary, sorted.
  std::vector<DacId> Groups() const;
  bool InGroup(const DacId& group) const;
};

enum class ObjClass : std::uint8_t { kFile, kDir, kSymlink, kOther };

std::string_view ObjClassName(ObjClass c);  // "file", "dir", "symlink", "other"
std::optional<ObjClass> ParseObjClass(std::string_view name);
// SELinux class string used to look up TE rules; empty for kOther.
std::string_view MacClassOf(ObjClass c);

// Nine permission bits, standard octal layout (owner 0700, group 070,
// other 07).
struct Mode {
  std::uint16_t bits = 0;

  std::string ToString() const;  // "rw-rw-r--"
  friend auto operator<=>(const Mode&, const Mode&) = default;
};

enum class AccessKind : std::uint8_t { kRead, kWrite, kExec, kUseBinding };
inline constexpr AccessKind kAllAccessKinds[] = {
    AccessKind::kRead, AccessKind::kWrite, AccessKind::kExec,
    AccessKind::kUseBinding};

std::string_view AccessKindName(AccessKind k);  // "read", "write", ...
std::optional<AccessKind> ParseAccessKind(std::string_view name);

struct Subject {
  TeType te;
  MlsContext mls;
  DacIdentity dac;
  std::vector<std::string> origin;  // commands / config sources, sorted

  // "te|cats|uid|groups", groups being gid ∪ supplementary.
  std::string Key() const;
};

struct ObjectEntity {
  TeType te;
  MlsContext mls;
  DacId owner;
  DacId group;
  Mode mode;
  ObjClass obj_class = ObjClass::kFile;
  std::vector<std::string> paths;  // sorted, absolute

  // "te|cats|owner|group|octal-mode|class".
  std::string Key() const;
};

struct MacAllowRule {
  std::string source;
  std::string target;
  std::string obj_class;
  std::vector<std::string> perms;  // sorted, unique, non-empty

  friend auto operator<=>(const MacAllowRule&, const MacAllowRule&) = default;
};

using AttributeMap = std::map<std::string, std::vector<std::string>>;

// Which MAC permission strings realize each (AccessKind, class) pair.
class PermVocabulary {
 public:
  // Standard SELinux file/dir semantics:
  //   file read  {read, open, getattr}
  //   file write {write, append, create, unlink, rename, setattr}
  //   file exec  {execute, execute_no_trans}
  //   dir  write {write, add_name, remove_name, rename, create}
  //   dir  use   {search, read, getattr}
  static PermVocabulary Default();

  const std::set<std::string>& Perms(AccessKind kind,
                                     std::string_view mac_class) const;
  void Set(AccessKind kind, std::string mac_class, std::set<std::string> perms);
  const std::map<std::pair<AccessKind, std::string>, std::set<std::string>>&
  table() const {
    return table_;
  }

 private:
  std::map<std::pair<AccessKind, std::string>, std::set<std::string>> table_;
};

// TE types exempt from the MLS category check.
struct MlsBypass {
  std::set<std::string> trusted_subjects;
  std::set<std::string> trusted_objects;
};

struct AccessConfig {
  PermVocabulary vocabulary = PermVocabulary::Default();
  MlsBypass mls_bypass;

  // Lines are `KIND CLASS PERM` (e.g. `read file open`),
  // `mls_trusted_subject TYPE` or `mls_trusted_object TYPE`. Any (kind,
  // class) pair mentioned replaces the default entry for that pair.
  static AccessConfig Parse(std::string_view text);
};

// A TE policy with attributes expanded into per-(kind, class) access
// matrices over a dense type universe.
class TePolicy {
 public:
  TePolicy() = default;

  // Names in rules that are not attributes are concrete types. When
  // `declared_types` is given, a rule name that is neither an attribute nor a
  // declared type raises IngestError.
  static TePolicy Compile(const std::vector<MacAllowRule>& rules,
                          const AttributeMap& attributes,
                          const PermVocabulary& vocabulary,
                          const std::set<std::string>* declared_types = nullptr);

  std::size_t type_count() const { return names_.size(); }
  TypeId IdOf(std::string_view name) const;  // kNoType if absent
  const std::string& NameOf(TypeId id) const { return names_[id]; }
  const std::vector<std::string>& type_names() const { return names_; }

  // -1 when the vocabulary has no permissions for the pair.
  int Slot(AccessKind kind, std::string_view mac_class) const;

  bool Allows(TypeId source, TypeId target, int slot) const {
    return slot >= 0 && source != kNoType && target != kNoType &&
           grantees_[slot][target].test(source);
  }
  bool Allows(std::string_view source, std::string_view target,
              std::string_view mac_class, AccessKind kind) const;

  // Every source type holding `slot` access on `target`.
  const Bitset& Grantees(int slot, TypeId target) const {
    return grantees_[slot][target];
  }
  // Types appearing (after expansion) as the source of some rule.
  const Bitset& rule_sources() const { return rule_sources_; }
  std::size_t rule_count() const { return rule_count_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, TypeId> ids_;
  std::map<std::pair<AccessKind, std::string>, int> slots_;
  std::vector<std::vector<Bitset>> grantees_;  // [slot][target] -> sources
  Bitset rule_sources_;
  std::size_t rule_count_ = 0;
};

bool te_allows(const TePolicy& policy, std::string_view source,
               std::string_view target, std::string_view mac_class,
               AccessKind kind);

// object ⊆ subject on categories.
bool mls_allows(const MlsContext& subject, const MlsContext& object);
bool mls_allows(const Subject& subject, const ObjectEntity& object,
                const MlsBypass& bypass);

// First-match UNIX semantics: owner triple if the uid matches, else group
// triple if the file group is among the subject's groups, else other.
// UseBinding checks the search (x) bit.
bool dac_allows(const DacIdentity& subject, const ObjectEntity& object,
                AccessKind kind);

}  // namespace mactriage

#endif  // MACTRIAGE_CORE_MODEL_H_
