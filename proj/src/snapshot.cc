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

#include "mactriage/snapshot.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "mactriage/errors.h"
#include "text_util.h"

namespace mactriage {
namespace {

constexpr std::string_view kSkippedRuleKeywords[] = {
    "auditallow", "dontaudit",   "neverallow",     "allowxperm",
    "auditallowxperm", "dontauditxperm", "neverallowxperm",
    "type_transition", "type_change", "type_member", "role", "allow_role",
};

bool IsIdentifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.')) {
      return false;
    }
  }
  return true;
}

// "c0.c3" -> c0..c3; "c512" -> c512.
bool AppendCategories(std::string_view list, std::vector<std::string>& out) {
  for (auto item : text::Split(list, ',')) {
    item = text::Trim(item);
    if (item.empty()) return false;
    auto dot = item.find('.');
    if (dot == std::string_view::npos) {
      if (item[0] != 'c' || !text::ParseUnsigned(item.substr(1))) return false;
      out.emplace_back(item);
      continue;
    }
    auto lo_s = item.substr(0, dot), hi_s = item.substr(dot + 1);
    if (lo_s.size() < 2 || hi_s.size() < 2 || lo_s[0] != 'c' || hi_s[0] != 'c') {
      return false;
    }
    auto lo = text::ParseUnsigned(lo_s.substr(1));
    auto hi = text::ParseUnsigned(hi_s.substr(1));
    if (!lo || !hi || *lo > *hi) return false;
    for (auto c = *lo; c <= *hi; ++c) out.push_back("c" + std::to_string(c));
  }
  return true;
}

struct Label {
  std::string te;
  MlsContext mls;
};

// user:role:type:levels, levels = sN[:cats] or low-high.
std::optional<Label> ParseLabel(std::string_view label, std::string_view role) {
  auto parts = text::Split(label, ':');
  if (parts.size() < 4 || parts[1] != role || !IsIdentifier(parts[2])) {
    return std::nullopt;
  }
  std::string_view levels =
      label.substr(parts[0].size() + parts[1].size() + parts[2].size() + 3);
  if (auto dash = levels.find('-'); dash != std::string_view::npos) {
    levels = levels.substr(dash + 1);
  }
  auto colon = levels.find(':');
  auto sens = levels.substr(0, colon);
  if (sens.size() < 2 || sens[0] != 's' || !text::ParseUnsigned(sens.substr(1))) {
    return std::nullopt;
  }
  std::vector<std::string> cats;
  if (colon != std::string_view::npos &&
      !AppendCategories(levels.substr(colon + 1), cats)) {
    return std::nullopt;
  }
  return Label{std::string(parts[2]), MlsContext(std::move(cats))};
}

std::string RenderLabel(std::string_view role, const std::string& te,
                        const MlsContext& mls) {
  std::string out = "u:" + std::string(role) + ":" + te + ":s0";
  if (!mls.empty()) out += ":" + mls.ToString();
  return out;
}

// "-rw-rw-r--" (optionally with a trailing ACL/label marker).
std::optional<std::pair<ObjClass, Mode>> ParseModeString(std::string_view s) {
  if (s.size() == 11 && (s.back() == '.' || s.back() == '+' || s.back() == '@')) {
    s.remove_suffix(1);
  }
  if (s.size() != 10) return std::nullopt;
  ObjClass cls;
  switch (s[0]) {
    case '-': cls = ObjClass::kFile; break;
    case 'd': cls = ObjClass::kDir; break;
    case 'l': cls = ObjClass::kSymlink; break;
    case 'c': case 'b': case 's': case 'p': cls = ObjClass::kOther; break;
    default: return std::nullopt;
  }
  Mode mode;
  for (int i = 0; i < 9; ++i) {
    char c = s[1 + i];
    int pos = i % 3;
    bool set;
    if (c == '-') {
      set = false;
    } else if (pos == 0) {
      if (c != 'r') return std::nullopt;
      set = true;
    } else if (pos == 1) {
      if (c != 'w') return std::nullopt;
      set = true;
    } else if (c == 'x' || c == 's' || c == 't') {
      set = true;
    } else if (c == 'S' || c == 'T') {
      set = false;
    } else {
      return std::nullopt;
    }
    if (set) mode.bits |= static_cast<std::uint16_t>(0400 >> i);
  }
  return std::make_pair(cls, mode);
}

char ModeTypeChar(ObjClass c) {
  switch (c) {
    case ObjClass::kFile: return '-';
    case ObjClass::kDir: return 'd';
    case ObjClass::kSymlink: return 'l';
    case ObjClass::kOther: return 'c';
  }
  return '-';
}

std::string ParentOf(const std::string& path) {
  auto pos = path.rfind('/');
  return pos == 0 ? std::string("/") : path.substr(0, pos);
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IngestError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---- sesearch / seinfo -------------------------------------------------

std::vector<MacAllowRule> parse_allow_rules(std::string_view text) {
  std::vector<MacAllowRule> rules;
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    if (toks[0] != "allow") {
      if (std::find(std::begin(kSkippedRuleKeywords), std::end(kSkippedRuleKeywords),
                    toks[0]) != std::end(kSkippedRuleKeywords)) {
        continue;
      }
      throw ParseError("sepolicy_allow", std::to_string(lineno),
                       "expected an allow rule");
    }
    auto fail = [&](const std::string& why) {
      throw ParseError("sepolicy_allow", std::to_string(lineno), why);
    };
    // Conditional suffix "[ bool ]:True" is ignored (booleans not modeled).
    auto semi = line.find(';');
    if (semi == std::string_view::npos) fail("missing ';'");
    auto body = text::Trim(line.substr(5, semi - 5));
    auto btoks = text::Tokens(body);
    if (btoks.size() < 3) fail("expected `allow SRC TGT:CLASS PERMS;`");
    MacAllowRule rule;
    rule.source = std::string(btoks[0]);
    auto tc = text::Split(btoks[1], ':');
    if (tc.size() != 2 || !IsIdentifier(rule.source) || !IsIdentifier(tc[0]) ||
        !IsIdentifier(tc[1])) {
      fail("malformed source or TGT:CLASS");
    }
    rule.target = std::string(tc[0]);
    rule.obj_class = std::string(tc[1]);
    auto perms_text = body.substr(btoks[2].data() - body.data());
    std::string flat(perms_text);
    auto open = std::count(flat.begin(), flat.end(), '{');
    auto close = std::count(flat.begin(), flat.end(), '}');
    if (open > 1 || open != close) fail("unbalanced permission braces");
    if (open == 1 && (text::Trim(flat).front() != '{' || text::Trim(flat).back() != '}')) {
      fail("unbalanced permission braces");
    }
    std::replace(flat.begin(), flat.end(), '{', ' ');
    std::replace(flat.begin(), flat.end(), '}', ' ');
    for (auto p : text::Tokens(flat)) {
      if (!IsIdentifier(p)) fail("malformed permission '" + std::string(p) + "'");
      rule.perms.emplace_back(p);
    }
    if (rule.perms.empty()) fail("empty permission set");
    if (open == 0 && rule.perms.size() != 1) fail("multiple permissions need braces");
    std::sort(rule.perms.begin(), rule.perms.end());
    rule.perms.erase(std::unique(rule.perms.begin(), rule.perms.end()),
                     rule.perms.end());
    rules.push_back(std::move(rule));
  }
  std::sort(rules.begin(), rules.end());
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  return rules;
}

std::string render_allow_rules(const std::vector<MacAllowRule>& rules) {
  std::string out;
  for (const auto& r : rules) {
    out += "allow " + r.source + " " + r.target + ":" + r.obj_class + " ";
    if (r.perms.size() == 1) {
      out += r.perms[0];
    } else {
      out += "{ " + text::Join(r.perms, " ") + " }";
    }
    out += ";\n";
  }
  return out;
}

AttributeMap parse_attribute_map(std::string_view text) {
  AttributeMap attrs;
  std::vector<std::string>* current = nullptr;
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty() || line.starts_with("Attributes:")) continue;
    auto toks = text::Tokens(line);
    if (toks[0] == "attribute") {
      if (toks.size() != 2) {
        throw ParseError("attributes", std::to_string(lineno),
                         "expected `attribute NAME;`");
      }
      auto name = toks[1];
      if (name.ends_with(';')) name.remove_suffix(1);
      if (!IsIdentifier(name)) {
        throw ParseError("attributes", std::to_string(lineno),
                         "malformed attribute name");
      }
      current = &attrs[std::string(name)];
      continue;
    }
    if (current == nullptr) {
      throw ParseError("attributes", std::to_string(lineno),
                       "member type listed under no attribute header");
    }
    for (auto t : toks) {
      if (!IsIdentifier(t)) {
        throw ParseError("attributes", std::to_string(lineno),
                         "malformed type name '" + std::string(t) + "'");
      }
      current->emplace_back(t);
    }
  }
  for (auto& [name, members] : attrs) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  return attrs;
}

std::string render_attribute_map(const AttributeMap& attributes) {
  std::string out;
  for (const auto& [name, members] : attributes) {
    out += "attribute " + name + ";\n";
    for (const auto& m : members) out += "    " + m + "\n";
  }
  return out;
}

std::set<std::string> parse_type_list(std::string_view text) {
  std::set<std::string> types;
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty() || line.starts_with("Types:")) continue;
    for (auto t : text::Tokens(line)) {
      if (t == "type") continue;
      if (t.ends_with(';')) t.remove_suffix(1);
      if (!IsIdentifier(t)) {
        throw ParseError("types", std::to_string(lineno), "malformed type name");
      }
      types.emplace(t);
    }
  }
  return types;
}

// ---- ls -lRZ ------------------------------------------------------------

std::vector<RawFileRecord> parse_file_listing(std::string_view text) {
  std::vector<RawFileRecord> out;
  std::optional<std::string> dir;
  std::set<std::string> seen;
  for (auto raw : text::Lines(text)) {
    auto line = text::Trim(raw);
    if (line.empty() || line.starts_with("total ")) continue;
    if (line.back() == ':' && (line[0] == '/' || line[0] == '.')) {
      std::string path(line.substr(0, line.size() - 1));
      if (path == ".") path = "/";
      if (path.starts_with("./")) path = path.substr(1);
      while (path.size() > 1 && path.back() == '/') path.pop_back();
      if (path.empty() || path[0] != '/') {
        throw ParseError("files", path, "directory header is not absolute");
      }
      dir = std::move(path);
      continue;
    }
    auto toks = text::Tokens(line);
    std::string where = dir.value_or("?");
    if (toks.size() < 5) throw ParseError("files", where, "short entry line");
    auto name = text::Trim(line.substr(toks[4].data() - line.data()));
    if (!dir) throw ParseError("files", std::string(name), "entry outside a directory block");
    auto mode = ParseModeString(toks[0]);
    if (mode && mode->first == ObjClass::kSymlink) {
      if (auto arrow = name.find(" -> "); arrow != std::string_view::npos) {
        name = name.substr(0, arrow);
      }
    }
    if (name == "..") continue;
    RawFileRecord rec;
    // "." describes the directory itself; it is kept unless the parent
    // listing already produced the same path.
    rec.path = name == "." ? *dir : (*dir == "/" ? "" : *dir) + "/" + std::string(name);
    if (!seen.insert(rec.path).second) continue;
    if (!mode) throw ParseError("files", rec.path, "malformed mode string");
    auto label = ParseLabel(toks[3], "object_r");
    if (!label) throw ParseError("files", rec.path, "malformed security label");
    rec.obj_class = mode->first;
    rec.mode = mode->second;
    rec.owner = std::string(toks[1]);
    rec.group = std::string(toks[2]);
    rec.te = std::move(label->te);
    rec.mls = std::move(label->mls);
    out.push_back(std::move(rec));
  }
  return out;
}

std::string render_file_listing(const std::vector<RawFileRecord>& records) {
  std::map<std::string, std::vector<const RawFileRecord*>> by_dir;
  for (const auto& r : records) by_dir[ParentOf(r.path)].push_back(&r);
  std::string out;
  for (const auto& [dir, entries] : by_dir) {
    if (!out.empty()) out += "\n";
    out += dir + ":\n";
    for (const auto* r : entries) {
      out += ModeTypeChar(r->obj_class);
      out += r->mode.ToString() + " " + r->owner + " " + r->group + " " +
             RenderLabel("object_r", r->te, r->mls) + " " +
             r->path.substr(r->path.rfind('/') + 1) + "\n";
    }
  }
  return out;
}

// ---- ps + /proc groups --------------------------------------------------

ProcessListing parse_process_listing(std::string_view ps_text,
                                     std::string_view groups_text) {
  std::map<std::uint64_t, std::vector<std::string>> groups;
  int lineno = 0;
  for (auto raw : text::Lines(groups_text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    auto pid_tok = toks[0];
    if (pid_tok.ends_with(':')) pid_tok.remove_suffix(1);
    auto pid = text::ParseUnsigned(pid_tok);
    if (!pid) throw ParseError("proc_groups", std::to_string(lineno), "expected a pid");
    auto& g = groups[*pid];
    g.clear();
    for (std::size_t i = 1; i < toks.size(); ++i) g.emplace_back(toks[i]);
  }

  ProcessListing listing;
  lineno = 0;
  for (auto raw : text::Lines(ps_text)) {
    ++lineno;
    auto line = text::Trim(raw);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    if (toks[0] == "LABEL") continue;
    if (toks.size() < 4) {
      throw ParseError("procs", std::to_string(lineno),
                       "expected `LABEL USER GROUP COMMAND [PID]`");
    }
    auto label = ParseLabel(toks[0], "r");
    if (!label) {
      throw ParseError("procs", std::to_string(lineno),
                       "label not in u:r:TYPE:LEVELS form");
    }
    RawProcessRecord rec;
    rec.te = std::move(label->te);
    rec.mls = std::move(label->mls);
    rec.user = std::string(toks[1]);
    rec.group = std::string(toks[2]);
    std::size_t cmd_end = toks.size();
    if (toks.size() >= 5) {
      if (auto pid = text::ParseUnsigned(toks.back())) {
        rec.pid = pid;
        --cmd_end;
      }
    }
    std::vector<std::string_view> cmd(toks.begin() + 3, toks.begin() + cmd_end);
    rec.command = text::Join(cmd, " ");
    if (rec.pid) {
      if (auto it = groups.find(*rec.pid); it != groups.end()) {
        rec.supplementary = it->second;
        rec.groups_known = true;
      }
    }
    if (!rec.groups_known) {
      listing.warnings.push_back("no supplementary groups for " + rec.te + " (" +
                                 rec.command + ")");
    }
    listing.records.push_back(std::move(rec));
  }
  return listing;
}

std::pair<std::string, std::string> render_process_listing(
    const std::vector<RawProcessRecord>& records) {
  std::string ps = "LABEL USER GROUP COMMAND PID\n";
  std::string groups;
  for (const auto& r : records) {
    ps += RenderLabel("r", r.te, r.mls) + " " + r.user + " " + r.group + " " +
          r.command;
    if (r.pid) ps += " " + std::to_string(*r.pid);
    ps += "\n";
    if (r.pid && r.groups_known) {
      groups += std::to_string(*r.pid);
      for (const auto& g : r.supplementary) groups += " " + g;
      groups += "\n";
    }
  }
  return {ps, groups};
}

// ---- platform.xml --------------------------------------------------------

std::string_view ProtectionLevelName(ProtectionLevel level) {
  switch (level) {
    case ProtectionLevel::kNormal: return "normal";
    case ProtectionLevel::kDangerous: return "dangerous";
    case ProtectionLevel::kSignature: return "signature";
    case ProtectionLevel::kSignaturePrivileged: return "signature|privileged";
  }
  return "signature";
}

std::optional<ProtectionLevel> ParseProtectionLevel(std::string_view text) {
  auto parts = text::Split(text::Trim(text), '|');
  auto base = parts[0];
  if (base == "normal") return ProtectionLevel::kNormal;
  if (base == "dangerous") return ProtectionLevel::kDangerous;
  if (base == "signatureOrSystem") return ProtectionLevel::kSignaturePrivileged;
  if (base == "signature") {
    for (auto p : parts) {
      if (p == "privileged") return ProtectionLevel::kSignaturePrivileged;
    }
    return ProtectionLevel::kSignature;
  }
  return std::nullopt;
}

namespace {

using boost::property_tree::ptree;

void CollectPermissions(const ptree& node,
                        std::map<std::string, std::pair<std::vector<std::string>,
                                                        std::optional<std::string>>>& out) {
  for (const auto& [key, child] : node) {
    if (key == "permission") {
      auto name = child.get_optional<std::string>("<xmlattr>.name");
      if (!name) throw ParseError("platform_permissions", "permission", "missing name");
      auto& entry = out[*name];
      if (auto lvl = child.get_optional<std::string>("<xmlattr>.protectionLevel")) {
        entry.second = *lvl;
      }
      for (const auto& [gkey, gchild] : child) {
        if (gkey != "group") continue;
        auto gid = gchild.get_optional<std::string>("<xmlattr>.gid");
        if (!gid) throw ParseError("platform_permissions", *name, "group without gid");
        entry.first.push_back(*gid);
      }
    } else if (key != "<xmlattr>" && key != "<xmlcomment>") {
      CollectPermissions(child, out);
    }
  }
}

}  // namespace

AndroidPermissionMap parse_permission_map(std::string_view xml_text,
                                          std::string_view levels_text,
                                          const IdResolver& ids) {
  ptree tree;
  std::istringstream in{std::string(xml_text)};
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw ParseError("platform_permissions", std::to_string(e.line()), e.message());
  }
  std::map<std::string, std::pair<std::vector<std::string>, std::optional<std::string>>>
      raw;
  CollectPermissions(tree, raw);

  std::map<std::string, std::string> sidecar;
  int lineno = 0;
  for (auto l : text::Lines(levels_text)) {
    ++lineno;
    auto line = text::StripComment(l);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    if (toks.size() != 2) {
      throw ParseError("protection_levels", std::to_string(lineno),
                       "expected `name level`");
    }
    sidecar[std::string(toks[0])] = std::string(toks[1]);
  }

  AndroidPermissionMap map;
  for (auto& [name, data] : raw) {
    if (data.first.empty()) continue;
    PermissionEntry entry;
    std::optional<std::string> level_text = data.second;
    if (!level_text) {
      if (auto it = sidecar.find(name); it != sidecar.end()) level_text = it->second;
    }
    if (level_text) {
      auto level = ParseProtectionLevel(*level_text);
      if (!level) {
        throw ParseError("platform_permissions", name,
                         "unknown protection level '" + *level_text + "'");
      }
      entry.level = *level;
    } else {
      map.warnings.push_back("no protection level for " + name +
                             "; treated as signature");
    }
    for (const auto& g : data.first) entry.groups.emplace_back(g, ids);
    std::sort(entry.groups.begin(), entry.groups.end());
    entry.groups.erase(std::unique(entry.groups.begin(), entry.groups.end()),
                       entry.groups.end());
    map.entries.emplace(name, std::move(entry));
  }
  return map;
}

std::string render_permission_map(const AndroidPermissionMap& map) {
  std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<permissions>\n";
  for (const auto& [name, entry] : map.entries) {
    out += "    <permission name=\"" + name + "\" protectionLevel=\"" +
           std::string(ProtectionLevelName(entry.level)) + "\">\n";
    for (const auto& g : entry.groups) {
      out += "        <group gid=\"" + g.name() + "\" />\n";
    }
    out += "    </permission>\n";
  }
  out += "</permissions>\n";
  return out;
}

// ---- mount ----------------------------------------------------------------

MountTable parse_mounts(std::string_view text) {
  MountTable table;
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    MountEntry e;
    e.device = std::string(toks[0]);
    std::string_view flags_tok;
    if (toks.size() >= 2 && toks[1] == "on") {
      if (toks.size() < 3 || toks[2].empty() || toks[2][0] != '/') {
        throw ParseError("mounts", std::to_string(lineno), "missing mountpoint");
      }
      e.mountpoint = std::string(toks[2]);
      if (toks.size() >= 5 && toks[3] == "type") e.fstype = std::string(toks[4]);
      for (std::size_t i = 3; i < toks.size(); ++i) {
        if (toks[i].starts_with('(')) flags_tok = toks[i];
      }
      if (flags_tok.starts_with('(')) flags_tok.remove_prefix(1);
      if (flags_tok.ends_with(')')) flags_tok.remove_suffix(1);
    } else if (toks.size() >= 4 && toks[1].starts_with('/')) {
      // /proc/mounts: DEV MOUNTPOINT FSTYPE FLAGS 0 0
      e.mountpoint = std::string(toks[1]);
      e.fstype = std::string(toks[2]);
      flags_tok = toks[3];
    } else {
      throw ParseError("mounts", std::to_string(lineno), "missing mountpoint");
    }
    while (e.mountpoint.size() > 1 && e.mountpoint.back() == '/') {
      e.mountpoint.pop_back();
    }
    e.flags = 0;
    for (auto f : text::Split(flags_tok, ',')) {
      if (f == "ro") e.flags |= kMountRo;
      else if (f == "rw") e.flags |= kMountRw;
      else if (f == "nosymlink") e.flags |= kMountNoSymlink;
    }
    table.entries.push_back(std::move(e));
  }
  bool has_root = std::any_of(table.entries.begin(), table.entries.end(),
                              [](const MountEntry& e) { return e.mountpoint == "/"; });
  if (!has_root) {
    MountEntry root;
    root.mountpoint = "/";
    root.device = "rootfs";
    root.fstype = "rootfs";
    root.flags = kMountRw;
    table.entries.insert(table.entries.begin(), root);
  }
  return table;
}

std::string render_mounts(const MountTable& table) {
  std::string out;
  for (const auto& e : table.entries) {
    std::vector<std::string> flags;
    if (e.flags & kMountRo) flags.emplace_back("ro");
    if (e.flags & kMountRw) flags.emplace_back("rw");
    if (e.flags & kMountNoSymlink) flags.emplace_back("nosymlink");
    out += e.device + " on " + e.mountpoint + " type " + e.fstype + " (" +
           text::Join(flags, ",") + ")\n";
  }
  return out;
}

std::map<std::string, std::vector<std::string>> parse_init_groups(
    std::string_view text) {
  std::map<std::string, std::vector<std::string>> out;
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty()) continue;
    auto toks = text::Tokens(line);
    if (toks.size() < 3 || toks[0] != "service" || toks[2] != "group") {
      throw ParseError("init_groups", std::to_string(lineno),
                       "expected `service NAME group g1 g2 ...`");
    }
    auto& groups = out[std::string(toks[1])];
    for (std::size_t i = 3; i < toks.size(); ++i) groups.emplace_back(toks[i]);
  }
  return out;
}

// ---- assembled snapshot -------------------------------------------------------

bool IpcMap::HasChannel(SubjectId adversary, SubjectId victim) const {
  if (adversary == victim) return false;
  switch (source) {
    case Source::kAllChannels: return true;
    case Source::kReceivers: return victim < receivers.size() && receivers[victim];
    case Source::kExplicit: return channels.contains({adversary, victim});
  }
  return false;
}

std::string_view IpcSourceName(IpcMap::Source s) {
  switch (s) {
    case IpcMap::Source::kExplicit: return "explicit";
    case IpcMap::Source::kReceivers: return "receivers";
    case IpcMap::Source::kAllChannels: return "all_channels_upper_bound";
  }
  return "explicit";
}

SnapshotInputs SnapshotInputs::ReadDirectory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IngestError("not a directory: " + dir.string());
  auto mandatory = [&](const char* name) {
    auto p = dir / name;
    if (!fs::exists(p)) throw IngestError("missing snapshot file: " + std::string(name));
    return ReadFile(p);
  };
  auto optional = [&](const char* name) -> std::optional<std::string> {
    auto p = dir / name;
    if (!fs::exists(p)) return std::nullopt;
    return ReadFile(p);
  };
  SnapshotInputs in;
  in.allow_rules = mandatory("sepolicy_allow.txt");
  in.attributes = mandatory("attributes.txt");
  in.files = mandatory("files.txt");
  in.procs = mandatory("procs.txt");
  in.proc_groups = mandatory("proc_groups.txt");
  in.platform_xml = mandatory("platform_permissions.xml");
  in.mounts = mandatory("mounts.txt");
  in.protection_levels = optional("protection_levels.txt");
  in.fileprovider = optional("fileprovider.txt");
  in.ipc = optional("ipc.txt");
  in.init_groups = optional("init_groups.txt");
  in.types = optional("types.txt");
  in.pathname_receivers = optional("pathname_receivers.txt");
  return in;
}

namespace {

std::vector<std::string> Canonicals(const std::vector<DacId>& ids) {
  std::vector<std::string> out;
  for (const auto& i : ids) out.push_back(i.canonical());
  return out;
}

std::string Basename(std::string_view command) {
  auto first = command.substr(0, command.find(' '));
  auto slash = first.rfind('/');
  return std::string(slash == std::string_view::npos ? first : first.substr(slash + 1));
}

// Parsed full subject key, matched component-wise against subjects.
struct SubjectPattern {
  std::string te;
  std::optional<MlsContext> mls;
  std::optional<DacId> uid;
  std::optional<std::vector<std::string>> groups;  // canonical, sorted
};

std::optional<SubjectPattern> ParseSelector(std::string_view selector,
                                            const IdResolver& ids) {
  selector = text::Trim(selector);
  if (selector.empty()) return std::nullopt;
  SubjectPattern p;
  auto fields = text::Split(selector, '|');
  if (fields.size() == 1) {
    p.te = std::string(selector);
    return p;
  }
  if (fields.size() != 4) return std::nullopt;
  p.te = std::string(fields[0]);
  std::vector<std::string> cats;
  if (!fields[1].empty() && !AppendCategories(fields[1], cats)) return std::nullopt;
  p.mls = MlsContext(std::move(cats));
  p.uid = DacId(fields[2], ids);
  std::vector<std::string> groups;
  if (!fields[3].empty()) {
    for (auto g : text::Split(fields[3], ',')) groups.push_back(DacId(g, ids).canonical());
  }
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  p.groups = std::move(groups);
  return p;
}

bool Matches(const SubjectPattern& p, const Subject& s) {
  if (s.te.name != p.te) return false;
  if (p.mls && *p.mls != s.mls) return false;
  if (p.uid && !(*p.uid == s.dac.uid)) return false;
  if (p.groups && *p.groups != Canonicals(s.dac.Groups())) return false;
  return true;
}

}  // namespace

std::optional<SubjectId> SystemSnapshot::FindSubject(std::string_view key) const {
  for (SubjectId i = 0; i < subjects.size(); ++i) {
    if (subjects[i].Key() == key) return i;
  }
  return std::nullopt;
}

std::optional<ObjectId> SystemSnapshot::FindObject(std::string_view key) const {
  for (ObjectId i = 0; i < objects.size(); ++i) {
    if (objects[i].Key() == key) return i;
  }
  return std::nullopt;
}

std::vector<SubjectId> SystemSnapshot::SelectSubjects(std::string_view selector) const {
  std::vector<SubjectId> out;
  auto pattern = ParseSelector(selector, ids);
  if (!pattern) return out;
  for (SubjectId i = 0; i < subjects.size(); ++i) {
    if (Matches(*pattern, subjects[i])) out.push_back(i);
  }
  return out;
}

void SystemSnapshot::Reindex() {
  for (auto kind : kAllAccessKinds) {
    for (auto cls : {ObjClass::kFile, ObjClass::kDir, ObjClass::kSymlink,
                     ObjClass::kOther}) {
      int slot = -1;
      // Symlink inodes are not IV targets; they never carry access here.
      if (cls == ObjClass::kFile || cls == ObjClass::kDir) {
        slot = policy.Slot(kind, MacClassOf(cls));
      }
      slots_[static_cast<int>(kind)][static_cast<int>(cls)] = slot;
    }
  }
  subject_types.assign(subjects.size(), kNoType);
  object_types.assign(objects.size(), kNoType);
  subject_mls_trusted_.assign(subjects.size(), false);
  object_mls_trusted_.assign(objects.size(), false);
  for (SubjectId i = 0; i < subjects.size(); ++i) {
    subject_types[i] = policy.IdOf(subjects[i].te.name);
    subject_mls_trusted_[i] = access.mls_bypass.trusted_subjects.contains(subjects[i].te.name);
  }
  for (ObjectId i = 0; i < objects.size(); ++i) {
    object_types[i] = policy.IdOf(objects[i].te.name);
    object_mls_trusted_[i] = access.mls_bypass.trusted_objects.contains(objects[i].te.name);
  }
}

SystemSnapshot assemble_snapshot(const SnapshotInputs& in,
                                 const SnapshotOptions& options) {
  SystemSnapshot snap;
  snap.ids = options.ids;
  snap.access = options.access;

  std::uint64_t h = text::Fnv1a("mactriage-snapshot");
  for (const std::string* part :
       {&in.allow_rules, &in.attributes, &in.files, &in.procs, &in.proc_groups,
        &in.platform_xml, &in.mounts}) {
    h = text::Fnv1a(*part, text::Fnv1a("\x1f", h));
  }
  for (const auto* opt : {&in.protection_levels, &in.fileprovider, &in.ipc,
                          &in.init_groups, &in.types, &in.pathname_receivers}) {
    h = text::Fnv1a(opt->value_or("\x1e"), text::Fnv1a("\x1f", h));
  }
  char idbuf[17];
  std::snprintf(idbuf, sizeof(idbuf), "%016llx", static_cast<unsigned long long>(h));
  snap.id = idbuf;

  snap.te_rules = parse_allow_rules(in.allow_rules);
  snap.attr_map = parse_attribute_map(in.attributes);
  std::optional<std::set<std::string>> declared;
  if (in.types) declared = parse_type_list(*in.types);
  snap.policy = TePolicy::Compile(snap.te_rules, snap.attr_map,
                                  snap.access.vocabulary,
                                  declared ? &*declared : nullptr);

  // Subjects: one per (te, categories, uid).
  auto listing = parse_process_listing(in.procs, in.proc_groups);
  snap.process_count = listing.records.size();
  std::map<std::string, std::vector<std::string>> init_groups;
  if (in.init_groups) init_groups = parse_init_groups(*in.init_groups);
  for (auto& rec : listing.records) {
    if (rec.groups_known) continue;
    if (auto it = init_groups.find(Basename(rec.command)); it != init_groups.end()) {
      rec.supplementary = it->second;
      rec.groups_known = true;
    } else {
      snap.warnings.push_back("no supplementary groups for " + rec.te + " (" +
                              rec.command + "); using primary gid only");
    }
  }
  struct Pending {
    Subject subject;
    std::optional<std::vector<std::string>> known_groups;  // canonical
  };
  using SubjectKey = std::tuple<std::string, MlsContext, std::string>;
  std::map<SubjectKey, Pending> pending;
  for (const auto& rec : listing.records) {
    if (rec.mls.empty()) {
      auto uid = snap.ids.Resolve(rec.user);
      if (uid && *uid % 100000 >= 10000) {
        snap.warnings.push_back("app process " + rec.te + " (" + rec.command +
                                ") carries no MLS categories");
      }
    }
    DacIdentity dac;
    dac.uid = DacId(rec.user, snap.ids);
    dac.gid = DacId(rec.group, snap.ids);
    for (const auto& g : rec.supplementary) dac.supplementary.emplace_back(g, snap.ids);
    std::sort(dac.supplementary.begin(), dac.supplementary.end());
    dac.supplementary.erase(std::unique(dac.supplementary.begin(), dac.supplementary.end()),
                            dac.supplementary.end());
    SubjectKey key{rec.te, rec.mls, dac.uid.canonical()};
    auto [it, inserted] = pending.try_emplace(key);
    auto& p = it->second;
    if (inserted) {
      p.subject.te = TeType{rec.te};
      p.subject.mls = rec.mls;
      p.subject.dac = dac;
    }
    if (rec.groups_known) {
      auto groups = Canonicals(dac.Groups());
      if (p.known_groups && *p.known_groups != groups) {
        throw IngestError("processes of " + rec.te + " (uid " + rec.user +
                          ") report different group sets; the MAC/DAC mapping "
                          "is not one-to-one");
      }
      if (!p.known_groups) {
        p.known_groups = groups;
        p.subject.dac = dac;
      }
    }
    p.subject.origin.push_back(rec.command);
  }
  for (auto& [key, p] : pending) {
    auto& origin = p.subject.origin;
    std::sort(origin.begin(), origin.end());
    origin.erase(std::unique(origin.begin(), origin.end()), origin.end());
    snap.subjects.push_back(std::move(p.subject));
  }
  std::sort(snap.subjects.begin(), snap.subjects.end(),
            [](const Subject& a, const Subject& b) { return a.Key() < b.Key(); });

  // Objects: one per (te, categories, owner, group, mode, class).
  auto files = parse_file_listing(in.files);
  snap.file_count = files.size();
  using ObjectKey =
      std::tuple<std::string, MlsContext, std::string, std::string, Mode, ObjClass>;
  std::map<ObjectKey, ObjectEntity> objects;
  for (auto& f : files) {
    DacId owner(f.owner, snap.ids), group(f.group, snap.ids);
    ObjectKey key{f.te, f.mls, owner.canonical(), group.canonical(), f.mode, f.obj_class};
    auto [it, inserted] = objects.try_emplace(key);
    if (inserted) {
      it->second.te = TeType{f.te};
      it->second.mls = f.mls;
      it->second.owner = owner;
      it->second.group = group;
      it->second.mode = f.mode;
      it->second.obj_class = f.obj_class;
    }
    it->second.paths.push_back(f.path);
  }
  for (auto& [key, obj] : objects) {
    std::sort(obj.paths.begin(), obj.paths.end());
    obj.paths.erase(std::unique(obj.paths.begin(), obj.paths.end()), obj.paths.end());
    snap.objects.push_back(std::move(obj));
  }
  std::sort(snap.objects.begin(), snap.objects.end(),
            [](const ObjectEntity& a, const ObjectEntity& b) { return a.Key() < b.Key(); });

  snap.Reindex();

  std::set<std::string> unknown;
  for (SubjectId i = 0; i < snap.subjects.size(); ++i) {
    if (snap.subject_types[i] == kNoType) unknown.insert(snap.subjects[i].te.name);
  }
  for (ObjectId i = 0; i < snap.objects.size(); ++i) {
    if (snap.object_types[i] == kNoType) unknown.insert(snap.objects[i].te.name);
  }
  snap.unknown_te_types.assign(unknown.begin(), unknown.end());
  for (const auto& t : unknown) {
    snap.warnings.push_back("TE type " + t + " does not appear in the policy");
  }
  Bitset mapped(snap.policy.type_count());
  for (TypeId t : snap.subject_types) {
    if (t != kNoType) mapped.set(t);
  }
  const auto& sources = snap.policy.rule_sources();
  for (auto t = sources.find_first(); t != Bitset::npos; t = sources.find_next(t)) {
    if (!mapped.test(t)) snap.unmapped_te_types.push_back(snap.policy.NameOf(t));
  }

  snap.perm_map = parse_permission_map(in.platform_xml,
                                       in.protection_levels.value_or(""), snap.ids);
  for (const auto& w : snap.perm_map.warnings) snap.warnings.push_back(w);
  snap.mounts = parse_mounts(in.mounts);

  auto select_lines = [&](const std::string& text, const char* source) {
    std::vector<SubjectId> out;
    for (auto raw : text::Lines(text)) {
      auto line = text::StripComment(raw);
      if (line.empty()) continue;
      auto ids = snap.SelectSubjects(line);
      if (ids.empty()) {
        snap.warnings.push_back(std::string(source) + ": no subject matches '" +
                                std::string(line) + "'");
      }
      out.insert(out.end(), ids.begin(), ids.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  if (in.fileprovider) {
    snap.program_config.fileprovider_subjects = select_lines(*in.fileprovider, "fileprovider");
  }

  if (in.ipc) {
    snap.ipc_map.source = IpcMap::Source::kExplicit;
    int lineno = 0;
    for (auto raw : text::Lines(*in.ipc)) {
      ++lineno;
      auto line = text::StripComment(raw);
      if (line.empty()) continue;
      auto arrow = line.find("->");
      if (arrow == std::string_view::npos) {
        throw ParseError("ipc", std::to_string(lineno), "expected `ADV -> VICTIM`");
      }
      auto advs = snap.SelectSubjects(line.substr(0, arrow));
      auto vics = snap.SelectSubjects(line.substr(arrow + 2));
      if (advs.empty() || vics.empty()) {
        snap.warnings.push_back("ipc:" + std::to_string(lineno) +
                                ": selector matches no subject");
      }
      for (auto a : advs) {
        for (auto v : vics) {
          if (a == v) {
            snap.warnings.push_back("ipc:" + std::to_string(lineno) +
                                    ": self-channel dropped");
            continue;
          }
          snap.ipc_map.channels.emplace(a, v);
        }
      }
    }
  } else if (in.pathname_receivers) {
    snap.ipc_map.source = IpcMap::Source::kReceivers;
    snap.ipc_map.receivers.assign(snap.subjects.size(), false);
    for (auto v : select_lines(*in.pathname_receivers, "pathname_receivers")) {
      snap.ipc_map.receivers[v] = true;
    }
  } else {
    snap.ipc_map.source = IpcMap::Source::kAllChannels;
  }
  return snap;
}

SystemSnapshot build_snapshot(const std::filesystem::path& dir,
                              const SnapshotOptions& options) {
  return assemble_snapshot(SnapshotInputs::ReadDirectory(dir), options);
}

bool can_access(const SystemSnapshot& snapshot, SubjectId subject, ObjectId object,
                AccessKind kind) {
  return snapshot.TeAllows(subject, object, kind) &&
         snapshot.MlsAllows(subject, object) &&
         dac_allows(snapshot.subjects[subject].dac, snapshot.objects[object], kind);
}

bool can_access(const SystemSnapshot& snapshot, const Subject& subject,
                const ObjectEntity& object, AccessKind kind) {
  if (object.obj_class != ObjClass::kFile && object.obj_class != ObjClass::kDir) {
    return false;
  }
  return te_allows(snapshot.policy, subject.te.name, object.te.name,
                   MacClassOf(object.obj_class), kind) &&
         mls_allows(subject, object, snapshot.access.mls_bypass) &&
         dac_allows(subject.dac, object, kind);
}

}  // namespace mactriage
