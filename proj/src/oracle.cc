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

#include "mactriage/oracle.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "mactriage/errors.h"

namespace mactriage {

void GeneratorSpec::Validate() const {
  if (n_subjects <= 0 || n_objects <= 0 || n_rules <= 0 || n_mounts <= 0 ||
      n_permissions <= 0) {
    throw UsageError("generator counts must be positive");
  }
  if (!(ipc_density >= 0.0 && ipc_density <= 1.0)) {
    throw UsageError("ipc density must lie in [0, 1]");
  }
  if (level_distribution.size() > 5) throw UsageError("at most five privilege levels");
  bool any = false;
  for (double w : level_distribution) {
    if (w < 0) throw UsageError("level weights must be non-negative");
    any = any || w > 0;
  }
  if (!any) throw UsageError("at least one privilege level needs a positive weight");
}

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::size_t Below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool Chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }
  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[Below(v.size())];
  }

 private:
  std::mt19937_64 rng_;
};

const std::vector<std::string> kGroupPool = {"sdcard_rw", "log",    "media_rw",
                                             "inet",      "everybody", "radio",
                                             "system",    "shell",  "net_raw"};
const std::vector<std::string> kServiceUids = {"media", "radio", "log", "bluetooth", "nfc", "drm"};
const std::vector<std::string> kFilePerms = {"read",   "open",    "getattr", "write",
                                             "append", "create",  "unlink",  "execute",
                                             "execute_no_trans", "ioctl", "lock"};
const std::vector<std::string> kDirPerms = {"search", "read",        "getattr", "write",
                                            "add_name", "remove_name", "create",  "ioctl"};

struct GenSubject {
  int rank;
  std::string te;
  std::string uid;
  std::vector<std::string> supplementary;
  MlsContext mls;
};

std::string Octal(unsigned bits) {
  Mode m;
  m.bits = static_cast<std::uint16_t>(bits);
  return m.ToString();
}

std::string LevelsField(const MlsContext& mls) {
  return mls.empty() ? "s0" : "s0:" + mls.ToString();
}

}  // namespace

GeneratedSystem generate_system(const GeneratorSpec& spec) {
  spec.Validate();
  Draw d(spec.seed);

  std::vector<int> ranks;
  double total = 0;
  for (std::size_t i = 0; i < spec.level_distribution.size(); ++i) {
    if (spec.level_distribution[i] > 0) {
      ranks.push_back(static_cast<int>(i) + 1);
      total += spec.level_distribution[i];
    }
  }
  auto weighted_rank = [&] {
    double x = static_cast<double>(d.Below(1u << 30)) / static_cast<double>(1u << 30) * total;
    for (int r : ranks) {
      x -= spec.level_distribution[r - 1];
      if (x < 0) return r;
    }
    return ranks.back();
  };

  // Subjects.
  std::vector<GenSubject> subjects;
  std::map<int, std::vector<std::string>> types_at;
  std::set<std::string> keys;
  int type_counter = 0;
  for (int i = 0; i < spec.n_subjects; ++i) {
    int rank = i < static_cast<int>(ranks.size()) ? ranks[i] : weighted_rank();
    GenSubject s;
    s.rank = rank;
    for (int attempt = 0;; ++attempt) {
      auto& pool = types_at[rank];
      if (attempt < 8 && !pool.empty() && d.Chance(0.3)) {
        s.te = d.Pick(pool);
      } else {
        s.te = "l" + std::to_string(rank) + "_d" + std::to_string(type_counter++);
        pool.push_back(s.te);
      }
      switch (rank) {
        case 1: s.uid = "u0_a" + std::to_string(10 + d.Below(6)); break;
        case 2: s.uid = "u0_a" + std::to_string(40 + d.Below(3)); break;
        case 3: s.uid = d.Pick(kServiceUids); break;
        case 4: s.uid = d.Chance(0.7) ? "system" : "shell"; break;
        default: s.uid = "root"; break;
      }
      std::vector<std::string> cats;
      if (rank <= 2) {
        for (int c = 0; c < 4; ++c) {
          if (d.Chance(0.3)) cats.push_back("c" + std::to_string(c));
        }
      }
      s.mls = MlsContext(cats);
      if (keys.insert(s.te + "|" + s.mls.ToString() + "|" + s.uid).second) break;
    }
    for (const auto& g : kGroupPool) {
      if (g != s.uid && d.Chance(0.2)) s.supplementary.push_back(g);
    }
    subjects.push_back(std::move(s));
  }
  std::vector<std::string> domains;
  for (const auto& [rank, pool] : types_at) domains.insert(domains.end(), pool.begin(), pool.end());
  for (int u = 0, n = 1 + static_cast<int>(d.Below(2)); u < n; ++u) {
    domains.push_back("l" + std::to_string(d.Pick(ranks)) + "_u" + std::to_string(u));
  }

  // Object types and attributes.
  std::vector<std::string> obj_types;
  for (int j = 0, n = std::max(2, spec.n_objects / 4); j < n; ++j) {
    obj_types.push_back("ot" + std::to_string(j));
  }
  AttributeMap attrs;
  for (int a = 0; a < 2; ++a) {
    auto& dm = attrs["dom_attr" + std::to_string(a)];
    for (const auto& t : domains) {
      if (d.Chance(0.3)) dm.push_back(t);
    }
    auto& om = attrs["obj_attr" + std::to_string(a)];
    for (const auto& t : obj_types) {
      if (d.Chance(0.3)) om.push_back(t);
    }
    std::sort(dm.begin(), dm.end());
    std::sort(om.begin(), om.end());
  }

  // Rules.
  std::vector<MacAllowRule> rules;
  for (int r = 0; r < spec.n_rules; ++r) {
    MacAllowRule rule;
    rule.source = d.Chance(0.15) ? "dom_attr" + std::to_string(d.Below(2)) : d.Pick(domains);
    if (d.Chance(0.1)) {
      rule.target = "obj_attr" + std::to_string(d.Below(2));
    } else if (d.Chance(0.05)) {
      rule.target = "rootfs";
    } else {
      rule.target = d.Pick(obj_types);
    }
    bool file = d.Chance(0.55);
    rule.obj_class = file ? "file" : "dir";
    std::set<std::string> perms;
    for (int k = 0, n = 1 + static_cast<int>(d.Below(3)); k < n; ++k) {
      perms.insert(d.Pick(file ? kFilePerms : kDirPerms));
    }
    rule.perms.assign(perms.begin(), perms.end());
    rules.push_back(std::move(rule));
  }

  // Forced adversary-writable file: lowest-level subject writes, highest reads.
  const GenSubject* low = &subjects.front();
  const GenSubject* high = &subjects.front();
  for (const auto& s : subjects) {
    if (s.rank < low->rank) low = &s;
    if (s.rank > high->rank) high = &s;
  }
  rules.push_back({low->te, "ot_forced", "file", {"write"}});
  rules.push_back({high->te, "ot_forced", "file", {"open", "read"}});

  // Mounts.
  std::vector<std::string> mountpoints = {"/data"};
  std::string mounts;
  for (int i = 0; i < spec.n_mounts; ++i) {
    auto flags = [&] {
      std::string f = d.Chance(0.4) ? "ro" : "rw";
      if (d.Chance(0.3)) f += ",nosymlink";
      return f + ",seclabel";
    };
    std::string mp = "/m" + std::to_string(i);
    mounts += "/dev/block/b" + std::to_string(i) + " on " + mp + " type ext4 (" + flags() + ")\n";
    mountpoints.push_back(mp);
    if (d.Chance(0.3)) {
      mounts += "tmpfs on " + mp + "/n type tmpfs (" + flags() + ")\n";
      mountpoints.push_back(mp + "/n");
    }
  }

  // Objects.
  std::vector<std::string> owners;
  for (const auto& s : subjects) owners.push_back(s.uid);
  const std::vector<std::string> system_owners = {"root", "system", "media_rw", "shell"};
  std::vector<RawFileRecord> files;
  files.push_back({"/data/forced/f0", Mode{0666}, ObjClass::kFile, low->uid, low->uid,
                   "ot_forced", MlsContext()});
  for (int i = 1; i < spec.n_objects; ++i) {
    RawFileRecord f;
    f.obj_class = d.Chance(0.4) ? ObjClass::kDir : ObjClass::kFile;
    f.te = d.Chance(0.05) ? "rootfs" : d.Pick(obj_types);
    f.owner = d.Chance(0.5) ? d.Pick(owners) : d.Pick(system_owners);
    f.group = d.Chance(0.5) ? d.Pick(kGroupPool) : f.owner;
    f.mode.bits = static_cast<std::uint16_t>(d.Below(512));
    if (d.Chance(0.2)) {
      std::vector<std::string> cats;
      for (int c = 0; c < 4; ++c) {
        if (d.Chance(0.4)) cats.push_back("c" + std::to_string(c));
      }
      f.mls = MlsContext(cats);
    }
    f.path = d.Pick(mountpoints) + "/e" + std::to_string(i);
    files.push_back(f);
    if (d.Chance(0.25)) {
      f.path = d.Pick(mountpoints) + "/e" + std::to_string(i) + "b";
      files.push_back(f);
    }
  }

  // Processes.
  std::vector<RawProcessRecord> procs;
  std::uint64_t pid = 100;
  for (const auto& s : subjects) {
    for (int k = 0, n = 1 + static_cast<int>(d.Below(2)); k < n; ++k) {
      RawProcessRecord p;
      p.te = s.te;
      p.mls = s.mls;
      p.user = s.uid;
      p.group = s.uid;
      p.command = "/bin/" + s.te + "_" + std::to_string(k);
      p.pid = pid++;
      p.supplementary = s.supplementary;
      p.groups_known = true;
      procs.push_back(std::move(p));
    }
  }

  // Permissions; odd-numbered ones carry their level in the sidecar.
  std::string xml = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<permissions>\n";
  std::string levels_sidecar;
  for (int i = 0; i < spec.n_permissions; ++i) {
    auto level = ProtectionLevelName(static_cast<ProtectionLevel>(d.Below(4)));
    std::string name = "gen.permission.P" + std::to_string(i);
    xml += "    <permission name=\"" + name + "\"";
    if (i % 2 == 0) {
      xml += " protectionLevel=\"" + std::string(level) + "\"";
    } else {
      levels_sidecar += name + " " + std::string(level) + "\n";
    }
    xml += ">\n";
    for (int k = 0, n = 1 + static_cast<int>(d.Below(2)); k < n; ++k) {
      xml += "        <group gid=\"" + d.Pick(kGroupPool) + "\" />\n";
    }
    xml += "    </permission>\n";
  }
  xml += "</permissions>\n";

  std::vector<std::string> subject_types;
  for (const auto& s : subjects) subject_types.push_back(s.te);
  std::sort(subject_types.begin(), subject_types.end());
  subject_types.erase(std::unique(subject_types.begin(), subject_types.end()), subject_types.end());
  std::string ipc, fileprovider, allowlist;
  for (const auto& a : subject_types) {
    for (const auto& v : subject_types) {
      if (a != v && d.Chance(spec.ipc_density)) ipc += a + " -> " + v + "\n";
    }
  }
  for (const auto& t : subject_types) {
    if (d.Chance(0.25)) fileprovider += t + "\n";
    if (d.Chance(0.15)) allowlist += t + "\n";
  }

  GeneratedSystem sys;
  sys.inputs.allow_rules = render_allow_rules(rules);
  sys.inputs.attributes = render_attribute_map(attrs);
  sys.inputs.files = render_file_listing(files);
  std::tie(sys.inputs.procs, sys.inputs.proc_groups) = render_process_listing(procs);
  sys.inputs.platform_xml = xml;
  sys.inputs.protection_levels = levels_sidecar;
  sys.inputs.mounts = mounts;
  sys.inputs.ipc = ipc;
  sys.inputs.fileprovider = fileprovider;
  for (int k = 1; k <= 5; ++k) {
    sys.levels_conf += "match l" + std::to_string(k) + "_* => T" + std::to_string(k) + "\n";
  }
  sys.levels_conf += "default => T3\n";
  sys.signed_allowlist = allowlist;
  return sys;
}

void write_system(const GeneratedSystem& system, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IngestError("cannot write " + (dir / name).string());
    out << text;
  };
  const auto& in = system.inputs;
  put("sepolicy_allow.txt", in.allow_rules);
  put("attributes.txt", in.attributes);
  put("files.txt", in.files);
  put("procs.txt", in.procs);
  put("proc_groups.txt", in.proc_groups);
  put("platform_permissions.xml", in.platform_xml);
  put("mounts.txt", in.mounts);
  if (in.protection_levels) put("protection_levels.txt", *in.protection_levels);
  if (in.ipc) put("ipc.txt", *in.ipc);
  if (in.fileprovider) put("fileprovider.txt", *in.fileprovider);
  if (in.init_groups) put("init_groups.txt", *in.init_groups);
  if (in.types) put("types.txt", *in.types);
  if (in.pathname_receivers) put("pathname_receivers.txt", *in.pathname_receivers);
  put("levels.conf", system.levels_conf);
  put("signed_allowlist.txt", system.signed_allowlist);
}

int generated_rank(std::string_view te) {
  if (te.size() >= 3 && te[0] == 'l' && te[2] == '_' && te[1] >= '1' && te[1] <= '5') {
    return te[1] - '0';
  }
  return 0;
}

// ---- reference evaluation ---------------------------------------------------

namespace {

struct OracleState {
  const SystemSnapshot& snap;
  std::vector<int> rank;
  std::vector<DacIdentity> base;
  std::vector<DacIdentity> expanded;
  const IpcMap& ipc;
  bool expansion;
};

OracleState Prepare(const SystemSnapshot& snap, const OracleOptions& opt) {
  OracleState st{snap, {}, {}, {}, opt.ipc ? *opt.ipc : snap.ipc_map, opt.expansion};
  for (const auto& s : snap.subjects) {
    int r = opt.rank_of ? opt.rank_of(s) : generated_rank(s.te.name);
    st.rank.push_back(r == 0 ? 3 : r);
    st.base.push_back(s.dac);
    bool signed_app = false;
    for (const auto& sel : opt.signed_allowlist) {
      if (sel == s.te.name || sel == s.Key()) signed_app = true;
    }
    DacIdentity e = s.dac;
    for (const auto& [name, entry] : snap.perm_map.entries) {
      bool ok = entry.level == ProtectionLevel::kNormal ||
                entry.level == ProtectionLevel::kDangerous || signed_app;
      if (!ok) continue;
      for (const auto& g : entry.groups) {
        if (std::find(e.supplementary.begin(), e.supplementary.end(), g) ==
            e.supplementary.end()) {
          e.supplementary.push_back(g);
        }
      }
    }
    std::sort(e.supplementary.begin(), e.supplementary.end());
    st.expanded.push_back(e);
  }
  return st;
}

bool Allowed(const OracleState& st, const Subject& s, const ObjectEntity& o, AccessKind k,
             const DacIdentity& dac) {
  return te_allows(st.snap.policy, s.te.name, o.te.name, MacClassOf(o.obj_class), k) &&
         mls_allows(s, o, st.snap.access.mls_bypass) && dac_allows(dac, o, k);
}

}  // namespace

std::vector<IntegrityViolation> brute_force_ivs(const SystemSnapshot& snap,
                                                const OracleOptions& options) {
  auto st = Prepare(snap, options);
  std::vector<IntegrityViolation> out;
  const auto& subjects = snap.subjects;
  for (SubjectId v = 0; v < subjects.size(); ++v) {
    for (ObjectId o = 0; o < snap.objects.size(); ++o) {
      const auto& obj = snap.objects[o];
      std::vector<IvKind> kinds;
      if (obj.obj_class == ObjClass::kFile) kinds = {IvKind::kRead, IvKind::kWrite, IvKind::kExec};
      if (obj.obj_class == ObjClass::kDir) kinds = {IvKind::kBinding, IvKind::kPathname};
      for (IvKind kind : kinds) {
        AccessKind use = kind == IvKind::kRead    ? AccessKind::kRead
                         : kind == IvKind::kWrite ? AccessKind::kWrite
                         : kind == IvKind::kExec  ? AccessKind::kExec
                                                  : AccessKind::kUseBinding;
        bool victim_te_mls =
            te_allows(snap.policy, subjects[v].te.name, obj.te.name, MacClassOf(obj.obj_class), use) &&
            mls_allows(subjects[v], obj, snap.access.mls_bypass);
        if (!victim_te_mls) continue;
        bool victim_dac = dac_allows(st.base[v], obj, use);
        if (kind != IvKind::kPathname && !victim_dac) continue;
        IntegrityViolation iv{kind, v, o, {}, kViaNone};
        for (SubjectId a = 0; a < subjects.size(); ++a) {
          if (st.rank[a] >= st.rank[v]) continue;
          if (kind == IvKind::kPathname && (a == v || !st.ipc.HasChannel(a, v))) continue;
          std::uint8_t via = kViaNone;
          if (!Allowed(st, subjects[a], obj, AccessKind::kWrite, st.base[a])) {
            if (!st.expansion ||
                !Allowed(st, subjects[a], obj, AccessKind::kWrite, st.expanded[a])) {
              continue;
            }
            via |= kViaAdversary;
          }
          if (kind == IvKind::kPathname && !victim_dac) {
            if (!st.expansion || !(obj.owner == subjects[a].dac.uid)) continue;
            via |= kViaVictim;
          }
          iv.adversaries.push_back(a);
          iv.via |= via;
        }
        if (!iv.adversaries.empty()) out.push_back(std::move(iv));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AttackOperation> brute_force_ops(const SystemSnapshot& snap,
                                             const std::vector<IntegrityViolation>& ivs) {
  // Linear scan for the longest matching mountpoint; later entries win ties.
  auto decide = [&](const std::string& path) {
    const MountEntry* best = nullptr;
    for (const auto& m : snap.mounts.entries) {
      bool covers = m.mountpoint == "/" || path == m.mountpoint ||
                    (path.size() > m.mountpoint.size() &&
                     path.compare(0, m.mountpoint.size(), m.mountpoint) == 0 &&
                     path[m.mountpoint.size()] == '/');
      if (covers && (!best || m.mountpoint.size() >= best->mountpoint.size())) best = &m;
    }
    return best ? best->flags : static_cast<std::uint8_t>(kMountRw);
  };
  const auto& fp = snap.program_config.fileprovider_subjects;
  std::vector<AttackOperation> out;
  for (const auto& iv : ivs) {
    std::vector<std::string> writable, linkable;
    for (const auto& p : snap.objects[iv.object].paths) {
      auto flags = decide(p);
      if (flags & kMountRo) continue;
      writable.push_back(p);
      if (!(flags & kMountNoSymlink)) linkable.push_back(p);
    }
    auto add = [&](OpType t, const std::vector<std::string>& w) {
      if (!w.empty()) out.push_back({t, iv.kind, iv.victim, iv.object, iv.adversaries, w});
    };
    if (iv.kind == IvKind::kRead || iv.kind == IvKind::kWrite || iv.kind == IvKind::kExec) {
      add(OpType::kFileMod, writable);
    } else if (iv.kind == IvKind::kBinding) {
      add(OpType::kFileSquat, writable);
      add(OpType::kLinkTraversal, linkable);
    } else if (std::find(fp.begin(), fp.end(), iv.victim) == fp.end()) {
      add(OpType::kLuringTraversal, linkable);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string describe(const SystemSnapshot& snap, const IntegrityViolation& iv) {
  std::string s = std::string(IvKindName(iv.kind)) + " IV victim=" +
                  snap.subjects[iv.victim].Key() + " object=" + snap.objects[iv.object].Key() +
                  " adversaries=[";
  for (std::size_t i = 0; i < iv.adversaries.size(); ++i) {
    s += (i ? "; " : "") + snap.subjects[iv.adversaries[i]].Key();
  }
  return s + "] via=" + std::to_string(iv.via);
}

std::string describe(const SystemSnapshot& snap, const AttackOperation& op) {
  std::string s = std::string(OpTypeName(op.type)) + " [" + std::string(IvKindName(op.source_kind)) +
                  "] victim=" + snap.subjects[op.victim].Key() +
                  " object=" + snap.objects[op.object].Key() + " paths=[";
  for (std::size_t i = 0; i < op.witness_paths.size(); ++i) {
    s += (i ? "; " : "") + op.witness_paths[i];
  }
  return s + "]";
}

namespace {

template <typename T>
std::optional<std::string> FirstDifference(const SystemSnapshot& snap, const std::vector<T>& got,
                                           const std::vector<T>& want) {
  std::vector<T> extra, missing;
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(extra));
  std::set_difference(want.begin(), want.end(), got.begin(), got.end(),
                      std::back_inserter(missing));
  if (!missing.empty() && (extra.empty() || missing.front() < extra.front())) {
    return "missing " + describe(snap, missing.front());
  }
  if (!extra.empty()) return "unexpected " + describe(snap, extra.front());
  return std::nullopt;
}

}  // namespace

EquivalenceReport check_equivalence(const SystemSnapshot& snapshot,
                                    const EquivalenceOptions& options) {
  OracleOptions oracle = options.oracle;
  oracle.expansion = options.analysis.expansion;
  oracle.signed_allowlist = options.analysis.signed_allowlist;
  if (options.analysis.ipc_override) oracle.ipc = &*options.analysis.ipc_override;
  auto want_ivs = brute_force_ivs(snapshot, oracle);
  auto want_ops = brute_force_ops(snapshot, want_ivs);

  EquivalenceReport report;
  report.ivs = want_ivs.size();
  report.ops = want_ops.size();
  for (auto p : options.partitions) {
    auto analysis = options.analysis;
    analysis.partitions = p;
    auto result = run_analysis(snapshot, analysis);
    if (options.corrupt) options.corrupt(result);
    auto diff = FirstDifference(snapshot, result.ivs, want_ivs);
    if (!diff) diff = FirstDifference(snapshot, result.ops, want_ops);
    if (diff) {
      report.pass = false;
      report.counterexample = "partitions=" + std::to_string(p) + ": " + *diff;
      return report;
    }
  }
  return report;
}

}  // namespace mactriage
