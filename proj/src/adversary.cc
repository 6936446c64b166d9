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

#include "mactriage/adversary.h"

#include <fnmatch.h>

#include <algorithm>

#include "mactriage/errors.h"
#include "text_util.h"

namespace mactriage {

std::string_view PrivilegeLevelName(PrivilegeLevel l) {
  static constexpr std::string_view kNames[] = {"T1", "T2", "T3", "T4", "T5"};
  return kNames[Rank(l) - 1];
}

std::optional<PrivilegeLevel> ParsePrivilegeLevel(std::string_view text) {
  if (text.size() != 2 || (text[0] != 'T' && text[0] != 't')) return std::nullopt;
  int k = text[1] - '0';
  if (k == 0) k = 1;  // T0 is merged into T1
  if (k < 1 || k > kLevelCount) return std::nullopt;
  return static_cast<PrivilegeLevel>(k);
}

namespace {

bool Glob(const std::string& pattern, const std::string& s) {
  return ::fnmatch(pattern.c_str(), s.c_str(), 0) == 0;
}

bool UidMatches(const std::string& glob, const DacId& uid, const IdResolver& ids) {
  if (glob == "@app" || glob == "@isolated") {
    auto n = ids.Resolve(uid.name());
    if (!n) return false;
    auto app = *n % 100000;
    return glob == "@app" ? app >= 10000 && app < 20000 : app >= 99000;
  }
  if (Glob(glob, uid.name()) || Glob(glob, uid.canonical())) return true;
  return DacId(glob, ids) == uid;
}

}  // namespace

LevelClassifier LevelClassifier::Parse(std::string_view text) {
  std::vector<Rule> rules;
  std::optional<PrivilegeLevel> def;
  int lineno = 0;
  for (auto raw : text::Lines(text)) {
    ++lineno;
    auto line = text::StripComment(raw);
    if (line.empty()) continue;
    auto fail = [&](const char* why) {
      throw ParseError("levels", std::to_string(lineno), why);
    };
    auto toks = text::Tokens(line);
    if (toks.size() < 3 || toks[toks.size() - 2] != "=>") {
      fail("expected `match PATTERN => Tk` or `default => Tk`");
    }
    auto level = ParsePrivilegeLevel(toks.back());
    if (!level) fail("unknown privilege level");
    if (toks[0] == "default") {
      if (toks.size() != 3) fail("`default => Tk` takes no pattern");
      def = *level;
      continue;
    }
    if (toks[0] != "match" || toks.size() < 4 || toks.size() > 5) {
      fail("expected `match PATTERN => Tk`");
    }
    if (def) fail("rules after `default` are unreachable");
    Rule r;
    r.level = *level;
    for (std::size_t i = 1; i + 2 < toks.size(); ++i) {
      auto t = toks[i];
      if (t.starts_with("uid:")) {
        r.uid_glob = std::string(t.substr(4));
      } else if (i == 1) {
        r.te_glob = std::string(t);
      } else {
        fail("second pattern must be uid:GLOB");
      }
    }
    rules.push_back(std::move(r));
  }
  if (!def) throw ParseError("levels", "end", "a `default => Tk` line is required");
  return LevelClassifier(std::move(rules), *def);
}

LevelClassifier LevelClassifier::AospDefault() {
  using L = PrivilegeLevel;
  std::vector<Rule> rules;
  auto te = [&](const char* glob, L level) { rules.push_back({glob, std::nullopt, level}); };
  auto uid = [&](const char* glob, L level) { rules.push_back({"*", glob, level}); };
  te("untrusted_app*", L::kT1);
  te("isolated_app*", L::kT1);
  te("ephemeral_app", L::kT1);
  te("sdk_sandbox*", L::kT1);
  te("platform_app", L::kT2);
  te("priv_app", L::kT2);
  uid("@app", L::kT1);
  uid("@isolated", L::kT1);
  uid("root", L::kT5);
  te("init", L::kT5);
  te("kernel", L::kT5);
  uid("system", L::kT4);
  for (const char* service : {"mediaserver", "mediacodec", "mediaextractor", "audioserver",
                              "cameraserver", "drmserver", "keystore", "logd", "netd",
                              "rild", "radio", "surfaceflinger", "installd", "vold",
                              "servicemanager", "bluetooth", "nfc", "gpsd"}) {
    te(service, L::kT3);
  }
  return LevelClassifier(std::move(rules), L::kT3);
}

std::pair<PrivilegeLevel, bool> LevelClassifier::Classify(const Subject& subject,
                                                          const IdResolver& ids) const {
  for (const auto& r : rules_) {
    if (!Glob(r.te_glob, subject.te.name)) continue;
    if (r.uid_glob && !UidMatches(*r.uid_glob, subject.dac.uid, ids)) continue;
    return {r.level, true};
  }
  return {default_, false};
}

PrivilegeLevel LevelClassifier::ClassifyTe(std::string_view te) const {
  std::string name(te);
  for (const auto& r : rules_) {
    if (!r.uid_glob && Glob(r.te_glob, name)) return r.level;
  }
  return default_;
}

std::string LevelClassifier::Render() const {
  std::string out;
  for (const auto& r : rules_) {
    out += "match ";
    if (r.te_glob != "*" || !r.uid_glob) out += r.te_glob + " ";
    if (r.uid_glob) out += "uid:" + *r.uid_glob + " ";
    out += "=> " + std::string(PrivilegeLevelName(r.level)) + "\n";
  }
  out += "default => " + std::string(PrivilegeLevelName(default_)) + "\n";
  return out;
}

LevelMap assign_privilege_levels(const SystemSnapshot& snapshot,
                                 const LevelClassifier& classifier) {
  LevelMap map;
  map.levels.reserve(snapshot.subjects.size());
  for (SubjectId i = 0; i < snapshot.subjects.size(); ++i) {
    auto [level, matched] = classifier.Classify(snapshot.subjects[i], snapshot.ids);
    map.levels.push_back(level);
    if (!matched) map.defaulted.push_back(i);
  }
  return map;
}

Bitset kernel_writer_types(const TePolicy& policy,
                           const std::set<std::string>& kernel_labels) {
  Bitset writers(policy.type_count());
  for (const char* cls : {"file", "dir"}) {
    int slot = policy.Slot(AccessKind::kWrite, cls);
    if (slot < 0) continue;
    for (const auto& label : kernel_labels) {
      TypeId t = policy.IdOf(label);
      if (t != kNoType) writers |= policy.Grantees(slot, t);
    }
  }
  return writers;
}

std::set<std::string> compute_kernel_writers(const SystemSnapshot& snapshot,
                                             const std::set<std::string>& kernel_labels) {
  std::set<std::string> out;
  auto bits = kernel_writer_types(snapshot.policy, kernel_labels);
  for (auto t = bits.find_first(); t != Bitset::npos; t = bits.find_next(t)) {
    out.insert(snapshot.policy.NameOf(static_cast<TypeId>(t)));
  }
  return out;
}

IntegrityWall compute_integrity_wall(const TePolicy& policy,
                                     const std::set<std::string>& kernel_labels) {
  const std::size_t n = policy.type_count();
  Bitset kernel = kernel_writer_types(policy, kernel_labels);
  std::vector<Bitset> tcb(n, kernel);
  for (TypeId s = 0; s < n; ++s) tcb[s].set(s);
  int exec = policy.Slot(AccessKind::kExec, "file");
  int write = policy.Slot(AccessKind::kWrite, "file");
  if (exec >= 0 && write >= 0) {
    for (TypeId label = 0; label < n; ++label) {
      const auto& writers = policy.Grantees(write, label);
      if (writers.none()) continue;
      const auto& executors = policy.Grantees(exec, label);
      for (auto s = executors.find_first(); s != Bitset::npos; s = executors.find_next(s)) {
        tcb[s] |= writers;
      }
    }
  }
  return IntegrityWall(std::move(kernel), std::move(tcb));
}

std::vector<std::string> tcb_names(const TePolicy& policy, const IntegrityWall& wall,
                                   std::string_view te) {
  std::vector<std::string> out;
  TypeId id = policy.IdOf(te);
  if (id == kNoType) {
    const auto& k = wall.kernel_writers();
    for (auto t = k.find_first(); t != Bitset::npos; t = k.find_next(t)) {
      out.push_back(policy.NameOf(static_cast<TypeId>(t)));
    }
    out.emplace_back(te);
  } else {
    const auto& bits = wall.Tcb(id);
    for (auto t = bits.find_first(); t != Bitset::npos; t = bits.find_next(t)) {
      out.push_back(policy.NameOf(static_cast<TypeId>(t)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t TrustReport::inconsistent_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const TrustEntry& e) { return !e.consistent; }));
}

AdversaryAnalysis compute_adversaries(const SystemSnapshot& snapshot,
                                      const LevelMap& levels,
                                      const IntegrityWall& wall) {
  const std::size_t n = snapshot.subjects.size();
  AdversaryAnalysis out;
  out.adversaries.resize(n);
  out.trust.entries.resize(n);
  for (SubjectId v = 0; v < n; ++v) {
    const int rank = Rank(levels.levels[v]);
    auto& entry = out.trust.entries[v];
    TypeId vt = snapshot.subject_types[v];
    for (SubjectId s = 0; s < n; ++s) {
      const bool trusted = Rank(levels.levels[s]) >= rank;
      if (trusted) {
        entry.best_case_trust.push_back(s);
      } else {
        out.adversaries[v].push_back(s);
      }
      TypeId st = snapshot.subject_types[s];
      bool in_tcb;
      if (vt != kNoType) {
        in_tcb = st != kNoType && wall.Tcb(vt).test(st);
      } else {
        in_tcb = snapshot.subjects[s].te == snapshot.subjects[v].te ||
                 (st != kNoType && wall.kernel_writers().test(st));
      }
      if (in_tcb) {
        entry.worst_case_tcb.push_back(s);
        if (!trusted) entry.violations.push_back(s);
      }
    }
    entry.consistent = entry.violations.empty();
  }
  return out;
}

TeLevelMap::TeLevelMap(const SystemSnapshot& snapshot, const LevelMap& levels,
                       const LevelClassifier& classifier) {
  const std::size_t n = snapshot.policy.type_count();
  min_rank_.assign(n, kLevelCount + 1);
  max_rank_.assign(n, 0);
  mapped_ = Bitset(n);
  for (SubjectId s = 0; s < snapshot.subjects.size(); ++s) {
    TypeId t = snapshot.subject_types[s];
    if (t == kNoType) continue;
    int r = Rank(levels.levels[s]);
    mapped_.set(t);
    min_rank_[t] = std::min(min_rank_[t], r);
    max_rank_[t] = std::max(max_rank_[t], r);
  }
  for (TypeId t = 0; t < n; ++t) {
    if (mapped_.test(t)) continue;
    int r = Rank(classifier.ClassifyTe(snapshot.policy.NameOf(t)));
    min_rank_[t] = max_rank_[t] = r;
  }
  BuildPrefixes();
}

TeLevelMap::TeLevelMap(std::vector<int> min_rank, std::vector<int> max_rank,
                       Bitset mapped)
    : min_rank_(std::move(min_rank)), max_rank_(std::move(max_rank)),
      mapped_(std::move(mapped)) {
  BuildPrefixes();
}

void TeLevelMap::BuildPrefixes() {
  const std::size_t n = min_rank_.size();
  for (int k = 0; k <= kLevelCount; ++k) below_[k] = Bitset(n);
  for (TypeId t = 0; t < n; ++t) {
    for (int k = min_rank_[t] + 1; k <= kLevelCount; ++k) below_[k].set(t);
  }
}

}  // namespace mactriage
