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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "mactriage/errors.h"

namespace mactriage {
namespace {

namespace fs = std::filesystem;

TEST(ParseFileListing, AppendixEfsSample) {
  auto recs = parse_file_listing(
      "/efs:\n"
      "-rw-rw-r-- radio radio u:object_r:efs_file:s0 authtokcont\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].path, "/efs/authtokcont");
  EXPECT_EQ(recs[0].mode.bits, 0664);
  EXPECT_EQ(recs[0].owner, "radio");
  EXPECT_EQ(recs[0].group, "radio");
  EXPECT_EQ(recs[0].te, "efs_file");
  EXPECT_TRUE(recs[0].mls.empty());
  EXPECT_EQ(recs[0].obj_class, ObjClass::kFile);
}

TEST(ParseFileListing, ClassesCategoriesAndSpecialBits) {
  auto recs = parse_file_listing(
      "/data:\n"
      "total 12\n"
      "drwxrwx--x system system u:object_r:system_data_file:s0 .\n"
      "lrwxrwxrwx root root u:object_r:rootfs:s0 link -> /target\n"
      "drwx--S--- u0_a5 u0_a5 u:object_r:app_data_file:s0:c512,c768 app\n"
      "-rwsr-x--T root shell u:object_r:exec_file:s0-s0:c0.c2 tool\n"
      "crw-rw-rw- root root u:object_r:null_device:s0 null\n");
  ASSERT_EQ(recs.size(), 5u);
  EXPECT_EQ(recs[0].path, "/data");
  recs.erase(recs.begin());
  EXPECT_EQ(recs[0].obj_class, ObjClass::kSymlink);
  EXPECT_EQ(recs[0].path, "/data/link");
  EXPECT_EQ(recs[1].obj_class, ObjClass::kDir);
  EXPECT_EQ(recs[1].mode.bits, 0700);
  EXPECT_EQ(recs[1].mls, MlsContext({"c512", "c768"}));
  EXPECT_EQ(recs[2].mode.bits, 0750);
  EXPECT_EQ(recs[2].mls, MlsContext({"c0", "c1", "c2"}));
  EXPECT_EQ(recs[3].obj_class, ObjClass::kOther);
}

TEST(ParseFileListing, Errors) {
  EXPECT_THROW(parse_file_listing("/d:\n-rw-rw-rz- a b u:object_r:t:s0 f\n"), ParseError);
  EXPECT_THROW(parse_file_listing("/d:\n-rw-rw-r-- a b u:r:t:s0 f\n"), ParseError);
  EXPECT_THROW(parse_file_listing("/d:\n-rw-rw-r-- a b u:object_r:t:x0 f\n"), ParseError);
  EXPECT_THROW(parse_file_listing("-rw-rw-r-- a b u:object_r:t:s0 f\n"), ParseError);
  try {
    parse_file_listing("/efs:\n-rw-rw-r-- a b bogus name\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/efs/name"), std::string::npos);
  }
}

TEST(ParseProcessListing, AppendixInitSample) {
  auto listing = parse_process_listing("u:r:init:s0 root root /init 1\n", "");
  ASSERT_EQ(listing.records.size(), 1u);
  const auto& r = listing.records[0];
  EXPECT_EQ(r.te, "init");
  EXPECT_EQ(r.user, "root");
  EXPECT_EQ(r.group, "root");
  EXPECT_EQ(r.command, "/init");
  ASSERT_TRUE(r.pid.has_value());
  EXPECT_EQ(*r.pid, 1u);
  EXPECT_TRUE(r.supplementary.empty());
  EXPECT_EQ(listing.warnings.size(), 1u);
}

TEST(ParseProcessListing, GroupsJoinByPid) {
  auto listing = parse_process_listing(
      "LABEL USER GROUP COMMAND PID\n"
      "u:r:platform_app:s0:c512,c768 u0_a20 u0_a20 com.android.x 400\n"
      "u:r:logd:s0 logd logd /system/bin/logd 300\n",
      "400 sdcard_rw everybody\n");
  ASSERT_EQ(listing.records.size(), 2u);
  EXPECT_TRUE(listing.records[0].groups_known);
  EXPECT_EQ(listing.records[0].supplementary,
            (std::vector<std::string>{"sdcard_rw", "everybody"}));
  EXPECT_FALSE(listing.records[1].groups_known);
  EXPECT_EQ(listing.warnings.size(), 1u);
  EXPECT_THROW(parse_process_listing("init root root /init 1\n", ""), ParseError);
}

TEST(ParseAllowRules, Grammar) {
  auto rules = parse_allow_rules(
      "# comment\n"
      "allow vA tO:file { read write };\n"
      "\n"
      "allow vA tO:file { write read };\n"
      "dontaudit vA tO:file ioctl;\n"
      "allow vB tO:dir search;\n");
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[0].source, "vA");
  EXPECT_EQ(rules[0].target, "tO");
  EXPECT_EQ(rules[0].obj_class, "file");
  EXPECT_EQ(rules[0].perms, (std::vector<std::string>{"read", "write"}));
  EXPECT_TRUE(parse_allow_rules("").empty());
  try {
    parse_allow_rules("allow a b:file read;\nallow a b file read;\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
  EXPECT_THROW(parse_allow_rules("allow a b:file { read\n"), ParseError);
  EXPECT_THROW(parse_allow_rules("allow a b:file read write;\n"), ParseError);
}

TEST(ParseAttributeMap, Grammar) {
  auto attrs = parse_attribute_map(
      "attribute appdomain;\n"
      "    untrusted_app\n"
      "    platform_app\n"
      "attribute empty_attr;\n");
  ASSERT_EQ(attrs.size(), 2u);
  EXPECT_EQ(attrs["appdomain"].size(), 2u);
  EXPECT_TRUE(attrs["empty_attr"].empty());
  EXPECT_TRUE(parse_attribute_map("").empty());
  EXPECT_THROW(parse_attribute_map("    orphan_type\n"), ParseError);
}

TEST(ParsePermissionMap, LevelsAndGroups) {
  auto map = parse_permission_map(
      "<?xml version=\"1.0\"?>\n<permissions>\n"
      "  <permission name=\"android.permission.READ_LOGS\" >\n"
      "    <group gid=\"log\" />\n  </permission>\n"
      "  <permission name=\"android.permission.WRITE_EXTERNAL_STORAGE\" "
      "protectionLevel=\"dangerous\">\n"
      "    <group gid=\"sdcard_rw\" />\n  </permission>\n"
      "  <permission name=\"android.permission.NOGROUP\" protectionLevel=\"normal\" />\n"
      "  <permission name=\"android.permission.MYSTERY\">\n"
      "    <group gid=\"inet\" />\n  </permission>\n"
      "</permissions>\n",
      "android.permission.READ_LOGS signature|privileged\n");
  ASSERT_EQ(map.entries.size(), 3u);
  const auto& logs = map.entries.at("android.permission.READ_LOGS");
  EXPECT_EQ(logs.groups, std::vector<DacId>{DacId("AID_LOG")});
  EXPECT_EQ(logs.level, ProtectionLevel::kSignaturePrivileged);
  EXPECT_EQ(map.entries.at("android.permission.WRITE_EXTERNAL_STORAGE").level,
            ProtectionLevel::kDangerous);
  EXPECT_FALSE(map.entries.contains("android.permission.NOGROUP"));
  EXPECT_EQ(map.entries.at("android.permission.MYSTERY").level,
            ProtectionLevel::kSignature);
  EXPECT_EQ(map.warnings.size(), 1u);
  EXPECT_THROW(parse_permission_map("<permissions><permission>"), ParseError);
}

TEST(ParseMounts, FlagsAndRoot) {
  auto table = parse_mounts("/dev/x on /system type ext4 (ro,seclabel)\n");
  ASSERT_EQ(table.entries.size(), 2u);
  EXPECT_EQ(table.entries[0].mountpoint, "/");
  EXPECT_EQ(table.entries[0].flags, kMountRw);
  EXPECT_EQ(table.entries[1].mountpoint, "/system");
  EXPECT_EQ(table.entries[1].flags, kMountRo);
  auto proc = parse_mounts("/dev/y /data ext4 rw,nosuid,nosymlink 0 0\n");
  EXPECT_EQ(proc.entries[1].flags, kMountRw | kMountNoSymlink);
  EXPECT_THROW(parse_mounts("/dev/x on\n"), ParseError);
  EXPECT_THROW(parse_mounts("garbage\n"), ParseError);
}

// ---- round trips on randomly drawn records --------------------------------

std::string Pick(std::mt19937_64& rng, const std::vector<std::string>& v) {
  return v[rng() % v.size()];
}

MlsContext RandomMls(std::mt19937_64& rng) {
  std::vector<std::string> cats;
  for (int c = 0; c < 4; ++c) {
    if (rng() % 3 == 0) cats.push_back("c" + std::to_string(c));
  }
  return MlsContext(cats);
}

const std::vector<std::string> kNames = {"root", "system", "radio", "u0_a7", "media_rw",
                                         "shell", "log", "vendor_x"};

TEST(RoundTrip, AllowRules) {
  std::mt19937_64 rng(11);
  std::vector<MacAllowRule> rules;
  const std::vector<std::string> perms = {"read", "write", "open", "search", "ioctl",
                                          "execute", "add_name", "getattr"};
  for (int i = 0; i < 500; ++i) {
    MacAllowRule r{"d" + std::to_string(rng() % 40), "t" + std::to_string(rng() % 60),
                   rng() % 2 ? "file" : "dir", {}};
    std::set<std::string> ps;
    for (int k = 0, n = 1 + rng() % 4; k < n; ++k) ps.insert(Pick(rng, perms));
    r.perms.assign(ps.begin(), ps.end());
    rules.push_back(r);
  }
  std::sort(rules.begin(), rules.end());
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  EXPECT_EQ(parse_allow_rules(render_allow_rules(rules)), rules);
}

TEST(RoundTrip, AttributeMap) {
  std::mt19937_64 rng(12);
  AttributeMap attrs;
  for (int a = 0; a < 50; ++a) {
    std::set<std::string> m;
    for (int k = 0, n = rng() % 6; k < n; ++k) m.insert("t" + std::to_string(rng() % 30));
    attrs["attr" + std::to_string(a)] = {m.begin(), m.end()};
  }
  EXPECT_EQ(parse_attribute_map(render_attribute_map(attrs)), attrs);
}

TEST(RoundTrip, FileListing) {
  std::mt19937_64 rng(13);
  std::vector<RawFileRecord> recs;
  std::set<std::string> used;
  while (recs.size() < 1000) {
    RawFileRecord r;
    std::string dir;
    for (int d = 0, depth = 1 + rng() % 3; d < depth; ++d) {
      dir += "/d" + std::to_string(rng() % 5);
    }
    r.path = dir + "/f" + std::to_string(rng() % 50);
    if (!used.insert(r.path).second) continue;
    r.obj_class = static_cast<ObjClass>(rng() % 4);
    r.mode.bits = static_cast<std::uint16_t>(rng() % 512);
    r.owner = Pick(rng, kNames);
    r.group = Pick(rng, kNames);
    r.te = "t" + std::to_string(rng() % 20);
    r.mls = RandomMls(rng);
    recs.push_back(r);
  }
  auto parsed = parse_file_listing(render_file_listing(recs));
  std::sort(recs.begin(), recs.end());
  std::sort(parsed.begin(), parsed.end());
  EXPECT_EQ(parsed, recs);
}

TEST(RoundTrip, ProcessListing) {
  std::mt19937_64 rng(14);
  std::vector<RawProcessRecord> recs;
  for (std::uint64_t pid = 1; pid <= 40; ++pid) {
    RawProcessRecord r;
    r.te = "d" + std::to_string(rng() % 10);
    r.mls = RandomMls(rng);
    r.user = Pick(rng, kNames);
    r.group = Pick(rng, kNames);
    r.command = "/system/bin/p" + std::to_string(pid);
    if (rng() % 4) r.command += " --flag";
    r.pid = pid * 7;
    r.groups_known = rng() % 5 != 0;
    if (r.groups_known) {
      for (int k = 0, n = rng() % 3; k < n; ++k) r.supplementary.push_back(Pick(rng, kNames));
    }
    recs.push_back(r);
  }
  auto [ps, groups] = render_process_listing(recs);
  EXPECT_EQ(parse_process_listing(ps, groups).records, recs);
}

TEST(RoundTrip, PermissionMap) {
  std::mt19937_64 rng(15);
  AndroidPermissionMap map;
  for (int i = 0; i < 20; ++i) {
    PermissionEntry e;
    std::set<std::string> gs;
    for (int k = 0, n = 1 + rng() % 3; k < n; ++k) gs.insert(Pick(rng, kNames));
    for (const auto& g : gs) e.groups.emplace_back(g);
    std::sort(e.groups.begin(), e.groups.end());
    e.groups.erase(std::unique(e.groups.begin(), e.groups.end()), e.groups.end());
    e.level = static_cast<ProtectionLevel>(rng() % 4);
    map.entries["perm.P" + std::to_string(i)] = e;
  }
  auto parsed = parse_permission_map(render_permission_map(map));
  EXPECT_EQ(parsed.entries, map.entries);
  EXPECT_TRUE(parsed.warnings.empty());
}

TEST(RoundTrip, Mounts) {
  std::mt19937_64 rng(16);
  MountTable table;
  table.entries.push_back({"/", kMountRw, "rootfs", "rootfs"});
  for (int i = 0; i < 15; ++i) {
    std::uint8_t flags = (rng() % 2 ? kMountRo : kMountRw) |
                         (rng() % 3 == 0 ? kMountNoSymlink : 0);
    table.entries.push_back(
        {"/m" + std::to_string(i) + (rng() % 2 ? "/sub" : ""), flags,
         "/dev/block/b" + std::to_string(i), "ext4"});
  }
  EXPECT_EQ(parse_mounts(render_mounts(table)).entries, table.entries);
}

// ---- assembly ---------------------------------------------------------------

SnapshotInputs SmallInputs() {
  SnapshotInputs in;
  in.allow_rules =
      "allow appdomain app_file:file { read write };\n"
      "allow logd log_file:dir { search write add_name };\n"
      "allow ghost_domain log_file:file read;\n";
  in.attributes = "attribute appdomain;\n  untrusted_app\n  platform_app\n";
  in.files =
      "/data/app:\n"
      "-rw-rw---- u0_a5 u0_a5 u:object_r:app_file:s0:c512 a\n"
      "-rw-rw---- u0_a5 u0_a5 u:object_r:app_file:s0:c512 b\n"
      "-rw-rw---- 10005 u0_a5 u:object_r:app_file:s0:c512 c\n"
      "-rw-r----- u0_a5 u0_a5 u:object_r:app_file:s0:c512 d\n"
      "\n/data/log:\n"
      "drwxrwx--- logd log u:object_r:log_file:s0 .\n"
      "-rw-rw---- logd log u:object_r:log_file:s0 last\n";
  in.procs =
      "LABEL USER GROUP COMMAND PID\n"
      "u:r:untrusted_app:s0:c512 u0_a5 u0_a5 com.example.one 100\n"
      "u:r:untrusted_app:s0:c512 u0_a5 u0_a5 com.example.one:remote 101\n"
      "u:r:platform_app:s0:c512 u0_a6 u0_a6 com.android.two 102\n"
      "u:r:logd:s0 logd logd /system/bin/logd 50\n"
      "u:r:stranger:s0 system system /system/bin/stranger 60\n";
  in.proc_groups = "100 inet\n101 inet\n102 inet sdcard_rw\n";
  in.platform_xml = "<permissions/>";
  in.mounts = "/dev/d on /data type ext4 (rw)\n";
  in.init_groups = "service logd group log system\n";
  return in;
}

TEST(AssembleSnapshot, EquivalenceClasses) {
  auto snap = assemble_snapshot(SmallInputs());
  EXPECT_EQ(snap.process_count, 5u);
  EXPECT_EQ(snap.file_count, 6u);
  ASSERT_EQ(snap.subjects.size(), 4u);
  auto one = snap.FindSubject("untrusted_app|c512|u0_a5|u0_a5,inet");
  ASSERT_TRUE(one.has_value());
  EXPECT_EQ(snap.subjects[*one].origin.size(), 2u);
  auto logd = snap.SelectSubjects("logd");
  ASSERT_EQ(logd.size(), 1u);
  EXPECT_TRUE(snap.subjects[logd[0]].dac.InGroup(DacId("log")));
  // a, b, c share a key (10005 == u0_a5); d differs by mode; dir and file differ by class.
  ASSERT_EQ(snap.objects.size(), 4u);
  auto abc = snap.FindObject("app_file|c512|u0_a5|u0_a5|660|file");
  ASSERT_TRUE(abc.has_value());
  EXPECT_EQ(snap.objects[*abc].paths,
            (std::vector<std::string>{"/data/app/a", "/data/app/b", "/data/app/c"}));
  EXPECT_EQ(snap.unmapped_te_types, std::vector<std::string>{"ghost_domain"});
  EXPECT_EQ(snap.unknown_te_types, std::vector<std::string>{"stranger"});
  EXPECT_EQ(snap.ipc_map.source, IpcMap::Source::kAllChannels);
  EXPECT_LE(snap.subjects.size(), snap.process_count);
  EXPECT_LE(snap.objects.size(), snap.file_count);
}

TEST(AssembleSnapshot, DifferingGroupsForOneKeyIsAnError) {
  auto in = SmallInputs();
  in.proc_groups = "100 inet\n101 net_raw\n";
  EXPECT_THROW(assemble_snapshot(in), IngestError);
}

TEST(AssembleSnapshot, IpcFileprovidersAndReceivers) {
  auto in = SmallInputs();
  in.ipc = "untrusted_app -> logd\nlogd -> logd\n";
  in.fileprovider = "platform_app\nnobody_here\n";
  auto snap = assemble_snapshot(in);
  auto app = snap.SelectSubjects("untrusted_app")[0];
  auto logd = snap.SelectSubjects("logd")[0];
  EXPECT_TRUE(snap.ipc_map.HasChannel(app, logd));
  EXPECT_FALSE(snap.ipc_map.HasChannel(logd, app));
  EXPECT_FALSE(snap.ipc_map.HasChannel(logd, logd));
  EXPECT_EQ(snap.program_config.fileprovider_subjects.size(), 1u);

  in.ipc.reset();
  in.pathname_receivers = "logd\n";
  auto r = assemble_snapshot(in);
  EXPECT_EQ(r.ipc_map.source, IpcMap::Source::kReceivers);
  EXPECT_TRUE(r.ipc_map.HasChannel(app, logd));
  EXPECT_FALSE(r.ipc_map.HasChannel(logd, app));
}

TEST(AssembleSnapshot, FullKeySelector) {
  auto snap = assemble_snapshot(SmallInputs());
  auto ids = snap.SelectSubjects("untrusted_app|c512|10005|10005,inet");
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(snap.subjects[ids[0]].te.name, "untrusted_app");
  EXPECT_TRUE(snap.SelectSubjects("untrusted_app||u0_a5|u0_a5,inet").empty());
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("mactriage_snap_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void WriteInputs(const SnapshotInputs& in, const fs::path& dir) {
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream(dir / name) << text;
  };
  put("sepolicy_allow.txt", in.allow_rules);
  put("attributes.txt", in.attributes);
  put("files.txt", in.files);
  put("procs.txt", in.procs);
  put("proc_groups.txt", in.proc_groups);
  put("platform_permissions.xml", in.platform_xml);
  put("mounts.txt", in.mounts);
  if (in.init_groups) put("init_groups.txt", *in.init_groups);
}

TEST(BuildSnapshot, IdempotentAndMissingFileNamed) {
  TempDir dir;
  WriteInputs(SmallInputs(), dir.path());
  auto a = build_snapshot(dir.path());
  auto b = build_snapshot(dir.path());
  EXPECT_EQ(a.id, b.id);
  ASSERT_EQ(a.subjects.size(), b.subjects.size());
  for (std::size_t i = 0; i < a.subjects.size(); ++i) {
    EXPECT_EQ(a.subjects[i].Key(), b.subjects[i].Key());
    EXPECT_EQ(a.subjects[i].origin, b.subjects[i].origin);
  }
  ASSERT_EQ(a.objects.size(), b.objects.size());
  for (std::size_t i = 0; i < a.objects.size(); ++i) {
    EXPECT_EQ(a.objects[i].Key(), b.objects[i].Key());
    EXPECT_EQ(a.objects[i].paths, b.objects[i].paths);
  }
  EXPECT_EQ(a.te_rules, b.te_rules);
  EXPECT_EQ(a.attr_map, b.attr_map);
  EXPECT_EQ(a.mounts.entries, b.mounts.entries);
  EXPECT_EQ(a.warnings, b.warnings);

  fs::remove(dir.path() / "mounts.txt");
  try {
    build_snapshot(dir.path());
    FAIL();
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("mounts.txt"), std::string::npos);
  }
}

// can_access against an independent conjunction of the three predicates.
TEST(CanAccess, RandomSnapshotMatchesPredicateConjunction) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<MacAllowRule> rules;
    const std::vector<std::string> perms = {"read", "write", "execute", "search",
                                            "add_name", "ioctl"};
    for (int i = 0; i < 30; ++i) {
      rules.push_back({"d" + std::to_string(rng() % 4), "t" + std::to_string(rng() % 6),
                       rng() % 2 ? "file" : "dir", {Pick(rng, perms)}});
    }
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    std::vector<RawProcessRecord> procs;
    for (std::uint64_t i = 0; i < 8; ++i) {
      RawProcessRecord p;
      p.te = "d" + std::to_string(i % 4);
      p.mls = RandomMls(rng);
      p.user = kNames[i];
      p.group = Pick(rng, kNames);
      p.command = "p" + std::to_string(i);
      p.pid = i + 1;
      p.groups_known = true;
      if (rng() % 2) p.supplementary.push_back(Pick(rng, kNames));
      procs.push_back(p);
    }
    std::vector<RawFileRecord> files;
    for (int i = 0; i < 20; ++i) {
      RawFileRecord f;
      f.path = "/r/f" + std::to_string(i);
      f.obj_class = rng() % 2 ? ObjClass::kFile : ObjClass::kDir;
      f.mode.bits = static_cast<std::uint16_t>(rng() % 512);
      f.owner = Pick(rng, kNames);
      f.group = Pick(rng, kNames);
      f.te = "t" + std::to_string(rng() % 6);
      f.mls = RandomMls(rng);
      files.push_back(f);
    }
    SnapshotInputs in;
    in.allow_rules = render_allow_rules(rules);
    in.files = render_file_listing(files);
    std::tie(in.procs, in.proc_groups) = render_process_listing(procs);
    in.platform_xml = "<permissions/>";
    auto snap = assemble_snapshot(in);
    for (SubjectId s = 0; s < snap.subjects.size(); ++s) {
      for (ObjectId o = 0; o < snap.objects.size(); ++o) {
        const auto& subj = snap.subjects[s];
        const auto& obj = snap.objects[o];
        for (auto kind : kAllAccessKinds) {
          bool expected = te_allows(snap.policy, subj.te.name, obj.te.name,
                                    MacClassOf(obj.obj_class), kind) &&
                          mls_allows(subj.mls, obj.mls) &&
                          dac_allows(subj.dac, obj, kind);
          EXPECT_EQ(can_access(snap, s, o, kind), expected);
          EXPECT_EQ(can_access(snap, subj, obj, kind), expected);
        }
      }
    }
  }
}

}  // namespace
}  // namespace mactriage
