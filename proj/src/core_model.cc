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

#include "mactriage/core_model.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include "mactriage/errors.h"
#include "text_util.h"

namespace mactriage {

MlsContext::MlsContext(std::vector<std::string> categories)
    : categories_(std::move(categories)) {
  std::sort(categories_.begin(), categories_.end());
  categories_.erase(std::unique(categories_.begin(), categories_.end()),
                    categories_.end());
}

bool MlsContext::Dominates(const MlsContext& other) const {
  return std::includes(categories_.begin(), categories_.end(),
                       other.categories_.begin(), other.categories_.end());
}

std::string MlsContext::ToString() const { return text::Join(categories_, ","); }

namespace {

struct NamedId {
  const char* name;
  std::uint32_t id;
};

// system/core/libcutils/include/private/android_filesystem_config.h
constexpr std::array kAospIds = {
    NamedId{"root", 0},          NamedId{"system", 1000},
    NamedId{"radio", 1001},      NamedId{"bluetooth", 1002},
    NamedId{"graphics", 1003},   NamedId{"input", 1004},
    NamedId{"audio", 1005},      NamedId{"camera", 1006},
    NamedId{"log", 1007},        NamedId{"compass", 1008},
    NamedId{"mount", 1009},      NamedId{"wifi", 1010},
    NamedId{"adb", 1011},        NamedId{"install", 1012},
    NamedId{"media", 1013},      NamedId{"dhcp", 1014},
    NamedId{"sdcard_rw", 1015},  NamedId{"vpn", 1016},
    NamedId{"keystore", 1017},   NamedId{"usb", 1018},
    NamedId{"drm", 1019},        NamedId{"mdnsr", 1020},
    NamedId{"gps", 1021},        NamedId{"media_rw", 1023},
    NamedId{"mtp", 1024},        NamedId{"drmrpc", 1026},
    NamedId{"nfc", 1027},        NamedId{"sdcard_r", 1028},
    NamedId{"clat", 1029},       NamedId{"loop_radio", 1030},
    NamedId{"media_drm", 1031},  NamedId{"package_info", 1032},
    NamedId{"sdcard_pics", 1033}, NamedId{"sdcard_av", 1034},
    NamedId{"sdcard_all", 1035}, NamedId{"logd", 1036},
    NamedId{"shared_relro", 1037}, NamedId{"dbus", 1038},
    NamedId{"tlsdate", 1039},    NamedId{"media_ex", 1040},
    NamedId{"audioserver", 1041}, NamedId{"metrics_coll", 1042},
    NamedId{"metricsd", 1043},   NamedId{"webserv", 1044},
    NamedId{"debuggerd", 1045},  NamedId{"media_codec", 1046},
    NamedId{"cameraserver", 1047}, NamedId{"firewall", 1048},
    NamedId{"trunks", 1049},     NamedId{"nvram", 1050},
    NamedId{"dns", 1051},        NamedId{"dns_tether", 1052},
    NamedId{"webview_zygote", 1053}, NamedId{"vehicle_network", 1054},
    NamedId{"media_audio", 1055}, NamedId{"media_video", 1056},
    NamedId{"media_image", 1057}, NamedId{"tombstoned", 1058},
    NamedId{"media_obb", 1059},  NamedId{"ese", 1060},
    NamedId{"ota_update", 1061}, NamedId{"automotive_evs", 1062},
    NamedId{"lowpan", 1063},     NamedId{"hsm", 1064},
    NamedId{"reserved_disk", 1065}, NamedId{"statsd", 1066},
    NamedId{"incidentd", 1067},  NamedId{"secure_element", 1068},
    NamedId{"lmkd", 1069},       NamedId{"llkd", 1070},
    NamedId{"iorapd", 1071},     NamedId{"gpu_service", 1072},
    NamedId{"network_stack", 1073}, NamedId{"shell", 2000},
    NamedId{"cache", 2001},      NamedId{"diag", 2002},
    NamedId{"net_bt_admin", 3001}, NamedId{"net_bt", 3002},
    NamedId{"inet", 3003},       NamedId{"net_raw", 3004},
    NamedId{"net_admin", 3005},  NamedId{"net_bw_stats", 3006},
    NamedId{"net_bw_acct", 3007}, NamedId{"readproc", 3009},
    NamedId{"wakelock", 3010},   NamedId{"uhid", 3011},
    NamedId{"everybody", 9997},  NamedId{"misc", 9998},
    NamedId{"nobody", 9999},
};

// u<user>_a<app> and u<user>_i<isolated>.
std::optional<std::uint32_t> ResolveAppName(std::string_view name) {
  if (name.size() < 4 || name[0] != 'u') return std::nullopt;
  auto us = name.find('_');
  if (us == std::string_view::npos || us + 2 >= name.size()) return std::nullopt;
  auto user = text::ParseUnsigned(name.substr(1, us - 1));
  auto idx = text::ParseUnsigned(name.substr(us + 2));
  if (!user || !idx) return std::nullopt;
  char kind = name[us + 1];
  if (kind == 'a') return static_cast<std::uint32_t>(*user * 100000 + 10000 + *idx);
  if (kind == 'i') return static_cast<std::uint32_t>(*user * 100000 + 99000 + *idx);
  return std::nullopt;
}

}  // namespace

IdResolver::IdResolver() {
  for (const auto& e : kAospIds) names_.emplace(e.name, e.id);
}

const IdResolver& IdResolver::Aosp() {
  static const IdResolver kInstance;
  return kInstance;
}

void IdResolver::Load(std::string_view text) {
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    std::optional<std::uint64_t> num;
    if (toks.size() == 2) num = text::ParseUnsigned(toks[1]);
    if (!num) throw ParseError("id map", std::to_string(lineno),
                               "expected `name number`");
    names_[std::string(toks[0])] = static_cast<std::uint32_t>(*num);
  }
}

std::optional<std::uint32_t> IdResolver::Resolve(std::string_view name) const {
  if (auto n = text::ParseUnsigned(name)) return static_cast<std::uint32_t>(*n);
  // platform.xml style "AID_LOG".
  std::string lowered;
  if (name.starts_with("AID_")) {
    for (char c : name.substr(4)) {
      lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    name = lowered;
  }
  if (auto it = names_.find(std::string(name)); it != names_.end()) {
    return it->second;
  }
  return ResolveAppName(name);
}

DacId::DacId(std::string_view name, const IdResolver& ids) : name_(name) {
  auto id = ids.Resolve(name);
  canonical_ = id ? std::to_string(*id) : std::string(name);
}

std::vector<DacId> DacIdentity::Groups() const {
  std::vector<DacId> out = supplementary;
  out.push_back(gid);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool DacIdentity::InGroup(const DacId& group) const {
  return gid == group ||
         std::binary_search(supplementary.begin(), supplementary.end(), group);
}

std::string_view ObjClassName(ObjClass c) {
  switch (c) {
    case ObjClass::kFile: return "file";
    case ObjClass::kDir: return "dir";
    case ObjClass::kSymlink: return "symlink";
    case ObjClass::kOther: return "other";
  }
  return "other";
}

std::optional<ObjClass> ParseObjClass(std::string_view name) {
  for (auto c : {ObjClass::kFile, ObjClass::kDir, ObjClass::kSymlink,
                 ObjClass::kOther}) {
    if (ObjClassName(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view MacClassOf(ObjClass c) {
  switch (c) {
    case ObjClass::kFile: return "file";
    case ObjClass::kDir: return "dir";
    case ObjClass::kSymlink: return "lnk_file";
    case ObjClass::kOther: return "";
  }
  return "";
}

std::string Mode::ToString() const {
  std::string out(9, '-');
  const char* letters = "rwx";
  for (int i = 0; i < 9; ++i) {
    if (bits & (0400 >> i)) out[i] = letters[i % 3];
  }
  return out;
}

std::string_view AccessKindName(AccessKind k) {
  switch (k) {
    case AccessKind::kRead: return "read";
    case AccessKind::kWrite: return "write";
    case AccessKind::kExec: return "exec";
    case AccessKind::kUseBinding: return "use";
  }
  return "read";
}

std::optional<AccessKind> ParseAccessKind(std::string_view name) {
  for (auto k : kAllAccessKinds) {
    if (AccessKindName(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

std::string JoinGroupNames(const std::vector<DacId>& groups) {
  std::vector<std::string> names;
  names.reserve(groups.size());
  for (const auto& g : groups) names.push_back(g.name());
  return text::Join(names, ",");
}

}  // namespace

std::string Subject::Key() const {
  return te.name + "|" + mls.ToString() + "|" + dac.uid.name() + "|" +
         JoinGroupNames(dac.Groups());
}

std::string ObjectEntity::Key() const {
  char octal[8];
  std::snprintf(octal, sizeof(octal), "%03o", static_cast<unsigned>(mode.bits));
  return te.name + "|" + mls.ToString() + "|" + owner.name() + "|" +
         group.name() + "|" + octal + "|" + std::string(ObjClassName(obj_class));
}

PermVocabulary PermVocabulary::Default() {
  PermVocabulary v;
  v.Set(AccessKind::kRead, "file", {"read", "open", "getattr"});
  v.Set(AccessKind::kWrite, "file",
        {"write", "append", "create", "unlink", "rename", "setattr"});
  v.Set(AccessKind::kExec, "file", {"execute", "execute_no_trans"});
  v.Set(AccessKind::kWrite, "dir",
        {"write", "add_name", "remove_name", "rename", "create"});
  v.Set(AccessKind::kUseBinding, "dir", {"search", "read", "getattr"});
  return v;
}

const std::set<std::string>& PermVocabulary::Perms(
    AccessKind kind, std::string_view mac_class) const {
  static const std::set<std::string> kEmpty;
  auto it = table_.find({kind, std::string(mac_class)});
  return it == table_.end() ? kEmpty : it->second;
}

void PermVocabulary::Set(AccessKind kind, std::string mac_class,
                         std::set<std::string> perms) {
  if (perms.empty()) {
    table_.erase({kind, mac_class});
  } else {
    table_[{kind, std::move(mac_class)}] = std::move(perms);
  }
}

AccessConfig AccessConfig::Parse(std::string_view text) {
  AccessConfig cfg;
  std::map<std::pair<AccessKind, std::string>, std::set<std::string>> seen;
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    if (toks.size() == 2 && toks[0] == "mls_trusted_subject") {
      cfg.mls_bypass.trusted_subjects.emplace(toks[1]);
      continue;
    }
    if (toks.size() == 2 && toks[0] == "mls_trusted_object") {
      cfg.mls_bypass.trusted_objects.emplace(toks[1]);
      continue;
    }
    auto kind = toks.size() == 3 ? ParseAccessKind(toks[0]) : std::nullopt;
    if (!kind) {
      throw ParseError("access config", std::to_string(lineno),
                       "expected `kind class perm` or an mls_trusted_* line");
    }
    seen[{*kind, std::string(toks[1])}].emplace(toks[2]);
  }
  for (auto& [key, perms] : seen) {
    cfg.vocabulary.Set(key.first, key.second, std::move(perms));
  }
  return cfg;
}

TePolicy TePolicy::Compile(const std::vector<MacAllowRule>& rules,
                           const AttributeMap& attributes,
                           const PermVocabulary& vocabulary,
                           const std::set<std::string>* declared_types) {
  TePolicy p;
  auto check_name = [&](const std::string& name) {
    if (name == "self" || attributes.contains(name)) return;
    if (declared_types && !declared_types->contains(name)) {
      throw IngestError("unknown attribute or type '" + name +
                        "' referenced by an allow rule");
    }
  };

  std::set<std::string> universe;
  for (const auto& [attr, members] : attributes) {
    universe.insert(members.begin(), members.end());
  }
  if (declared_types) universe.insert(declared_types->begin(), declared_types->end());
  for (const auto& r : rules) {
    check_name(r.source);
    check_name(r.target);
    if (!attributes.contains(r.source) && r.source != "self") universe.insert(r.source);
    if (!attributes.contains(r.target) && r.target != "self") universe.insert(r.target);
  }
  p.names_.assign(universe.begin(), universe.end());
  p.ids_.reserve(p.names_.size());
  for (TypeId i = 0; i < p.names_.size(); ++i) p.ids_.emplace(p.names_[i], i);

  const std::size_t n = p.names_.size();
  for (const auto& [key, perms] : vocabulary.table()) {
    p.slots_.emplace(key, static_cast<int>(p.grantees_.size()));
    p.grantees_.emplace_back(n, Bitset(n));
  }
  p.rule_sources_ = Bitset(n);
  p.rule_count_ = rules.size();

  auto expand = [&](const std::string& name, std::vector<TypeId>& out) {
    out.clear();
    if (auto it = attributes.find(name); it != attributes.end()) {
      for (const auto& m : it->second) out.push_back(p.ids_.at(m));
    } else {
      out.push_back(p.ids_.at(name));
    }
  };

  std::vector<int> rule_slots;
  std::vector<TypeId> sources, targets;
  for (const auto& r : rules) {
    rule_slots.clear();
    for (const auto& [key, slot] : p.slots_) {
      if (key.second != r.obj_class) continue;
      const auto& vocab = vocabulary.Perms(key.first, key.second);
      for (const auto& perm : r.perms) {
        if (vocab.contains(perm)) {
          rule_slots.push_back(slot);
          break;
        }
      }
    }
    if (r.source == "self") continue;
    expand(r.source, sources);
    for (TypeId s : sources) p.rule_sources_.set(s);
    if (rule_slots.empty()) continue;
    const bool self_target = r.target == "self";
    if (!self_target) expand(r.target, targets);
    for (int slot : rule_slots) {
      auto& matrix = p.grantees_[slot];
      if (self_target) {
        for (TypeId s : sources) matrix[s].set(s);
        continue;
      }
      for (TypeId t : targets) {
        auto& row = matrix[t];
        for (TypeId s : sources) row.set(s);
      }
    }
  }
  return p;
}

TypeId TePolicy::IdOf(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? kNoType : it->second;
}

int TePolicy::Slot(AccessKind kind, std::string_view mac_class) const {
  auto it = slots_.find({kind, std::string(mac_class)});
  return it == slots_.end() ? -1 : it->second;
}

bool TePolicy::Allows(std::string_view source, std::string_view target,
                      std::string_view mac_class, AccessKind kind) const {
  return Allows(IdOf(source), IdOf(target), Slot(kind, mac_class));
}

bool te_allows(const TePolicy& policy, std::string_view source,
               std::string_view target, std::string_view mac_class,
               AccessKind kind) {
  return policy.Allows(source, target, mac_class, kind);
}

bool mls_allows(const MlsContext& subject, const MlsContext& object) {
  return subject.Dominates(object);
}

bool mls_allows(const Subject& subject, const ObjectEntity& object,
                const MlsBypass& bypass) {
  return bypass.trusted_subjects.contains(subject.te.name) ||
         bypass.trusted_objects.contains(object.te.name) ||
         mls_allows(subject.mls, object.mls);
}

bool dac_allows(const DacIdentity& subject, const ObjectEntity& object,
                AccessKind kind) {
  unsigned bit = 0;
  switch (kind) {
    case AccessKind::kRead: bit = 4; break;
    case AccessKind::kWrite: bit = 2; break;
    case AccessKind::kExec:
    case AccessKind::kUseBinding: bit = 1; break;
  }
  unsigned triple;
  if (subject.uid == object.owner) {
    triple = (object.mode.bits >> 6) & 7u;
  } else if (subject.InGroup(object.group)) {
    triple = (object.mode.bits >> 3) & 7u;
  } else {
    triple = object.mode.bits & 7u;
  }
  return (triple & bit) != 0;
}

}  // namespace mactriage
