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

// Tiny text-level snapshot builder for tests.
#ifndef MACTRIAGE_TESTS_TEST_SUPPORT_H_
#define MACTRIAGE_TESTS_TEST_SUPPORT_H_

#include <sstream>
#include <string>

#include "mactriage/snapshot.h"

namespace mactriage::testing {

class MiniSystem {
 public:
  MiniSystem() {
    in_.procs = "LABEL USER GROUP COMMAND PID\n";
    in_.platform_xml = "<permissions/>";
    in_.mounts = "/dev/root on / type ext4 (rw)\n";
  }

  // "src tgt:cls { perms }"
  MiniSystem& Allow(const std::string& rule) {
    in_.allow_rules += "allow " + rule + ";\n";
    return *this;
  }
  MiniSystem& Attribute(const std::string& name, const std::string& members) {
    in_.attributes += "attribute " + name + ";\n";
    std::istringstream in(members);
    for (std::string m; in >> m;) in_.attributes += "  " + m + "\n";
    return *this;
  }
  // `levels` is the part after s0, e.g. "c1,c2" or empty.
  MiniSystem& Proc(const std::string& te, const std::string& user, const std::string& supp = "",
                   const std::string& levels = "", const std::string& group = "") {
    std::string pid = std::to_string(pid_++);
    in_.procs += "u:r:" + te + ":s0" + (levels.empty() ? "" : ":" + levels) + " " + user + " " +
                 (group.empty() ? user : group) + " /bin/" + te + " " + pid + "\n";
    in_.proc_groups += pid + " " + supp + "\n";
    return *this;
  }
  // `entry` is one ls -laZ line naming a child of `dir`.
  MiniSystem& File(const std::string& dir, const std::string& entry) {
    in_.files += dir + ":\n" + entry + "\n\n";
    return *this;
  }
  MiniSystem& Mount(const std::string& line) {
    in_.mounts += line + "\n";
    return *this;
  }
  MiniSystem& Permissions(const std::string& xml) {
    in_.platform_xml = xml;
    return *this;
  }
  MiniSystem& Ipc(const std::string& text) {
    in_.ipc = text;
    return *this;
  }
  MiniSystem& Fileprovider(const std::string& text) {
    in_.fileprovider = text;
    return *this;
  }

  const SnapshotInputs& inputs() const { return in_; }
  SystemSnapshot Build() const { return assemble_snapshot(in_); }

 private:
  SnapshotInputs in_;
  int pid_ = 100;
};

}  // namespace mactriage::testing

#endif  // MACTRIAGE_TESTS_TEST_SUPPORT_H_
