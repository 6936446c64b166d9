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

// mactriage command line: analyze a snapshot, diff two reports, generate a
// synthetic snapshot.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mactriage/analysis.h"
#include "mactriage/errors.h"
#include "mactriage/expansion.h"
#include "mactriage/oracle.h"
#include "mactriage/report.h"
#include "mactriage/snapshot.h"

namespace fs = std::filesystem;
using namespace mactriage;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIngest = 2, kInconsistent = 3 };

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IngestError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IngestError("cannot write " + p.string());
  out << text;
}

struct AnalyzeArgs {
  std::string snapshot, levels, out, allowlist, format = "json", access_config, id_map;
  std::size_t threads = 1;
  bool no_expansion = false;
  bool all_channels = false;
  std::vector<std::string> kernel_labels;
};

int Analyze(const AnalyzeArgs& a) {
  fs::path dir(a.snapshot);
  SnapshotOptions sopt;
  if (!a.access_config.empty()) sopt.access = AccessConfig::Parse(Slurp(a.access_config));
  if (!a.id_map.empty()) sopt.ids.Load(Slurp(a.id_map));
  auto snap = build_snapshot(dir, sopt);

  AnalysisOptions opt;
  opt.partitions = a.threads;
  opt.expansion = !a.no_expansion;
  // levels.conf / signed_allowlist.txt inside the snapshot are used when not given
  fs::path levels = !a.levels.empty() ? fs::path(a.levels) : dir / "levels.conf";
  if (!a.levels.empty() || fs::exists(levels)) {
    opt.classifier = LevelClassifier::Parse(Slurp(levels));
  } else {
    std::cerr << "note: no levels.conf, using the built-in AOSP classifier\n";
  }
  fs::path allow = !a.allowlist.empty() ? fs::path(a.allowlist) : dir / "signed_allowlist.txt";
  if (!a.allowlist.empty() || fs::exists(allow)) {
    opt.signed_allowlist = parse_allowlist(Slurp(allow));
  }
  if (!a.kernel_labels.empty()) {
    opt.kernel_labels.insert(a.kernel_labels.begin(), a.kernel_labels.end());
  }
  if (a.all_channels) opt.ipc_override = IpcMap{};

  auto result = run_analysis(snap, opt);
  auto report = summarize(snap, result, opt);
  for (const auto& w : snap.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

  fs::create_directories(a.out);
  auto files = render(report, "json");
  if (a.format != "json") files.merge(render(report, a.format));
  for (const auto& [name, text] : files) Spit(fs::path(a.out) / name, text);

  std::cout << "snapshot " << report.snapshot_id << ": " << report.subjects << " subjects, "
            << report.objects << " objects, " << report.allow_rules << " allow rules\n"
            << "IVs " << report.total_ivs_all_kinds << " (read+pathname " << report.total_ivs
            << "), with ops " << report.ivs_with_ops << ", ops " << report.total_ops << "\n"
            << "trust violations " << report.trust_violations.size() << ", skipped unmapped "
            << report.skipped_unmapped << "/" << report.te_iv_total << "\n";
  return kOk;
}

int Diff(const std::string& old_path, const std::string& new_path, const std::string& out) {
  auto load = [](const std::string& p) {
    try {
      return report_from_json(nlohmann::json::parse(Slurp(p)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(p, "0", e.what());
    }
  };
  auto delta = diff_reports(load(old_path), load(new_path));
  auto text = delta_to_json(delta).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    Spit(out, text);
  }
  std::cerr << delta.size() << " change(s)\n";
  return kOk;
}

int Gen(const GeneratorSpec& spec, const std::string& out) {
  write_system(generate_system(spec), out);
  std::cout << "wrote " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrity-violation triage for Android access-control snapshots"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "compute IVs and attack operations");
  analyze->add_option("--snapshot", an.snapshot, "snapshot directory")->required();
  analyze->add_option("--levels", an.levels, "privilege level classifier (levels.conf)");
  analyze->add_option("--threads", an.threads, "validation partitions")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--out", an.out, "output directory")->required();
  analyze->add_flag("--no-expansion", an.no_expansion, "disable permission expansion");
  analyze->add_option("--allowlist", an.allowlist, "signed-app allowlist");
  analyze->add_option("--format", an.format, "json|csv|text (report.json is always written)")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  analyze->add_option("--access-config", an.access_config, "permission vocabulary / MLS bypass");
  analyze->add_option("--id-map", an.id_map, "extra `name number` uid/gid entries");
  analyze->add_option("--kernel-label", an.kernel_labels, "additional kernel integrity label");
  analyze->add_flag("--all-channels", an.all_channels,
                    "ignore IPC metadata and assume every pair communicates");

  std::string old_report, new_report, diff_out;
  auto* diff = app.add_subcommand("diff", "difference between two report.json files");
  diff->add_option("old", old_report)->required();
  diff->add_option("new", new_report)->required();
  diff->add_option("--out", diff_out, "write the delta here instead of stdout");

  GeneratorSpec spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "write a random synthetic snapshot");
  gen->add_option("--seed", spec.seed)->required();
  gen->add_option("--subjects", spec.n_subjects);
  gen->add_option("--objects", spec.n_objects);
  gen->add_option("--rules", spec.n_rules);
  gen->add_option("--mounts", spec.n_mounts);
  gen->add_option("--permissions", spec.n_permissions);
  gen->add_option("--ipc-density", spec.ipc_density);
  gen->add_option("--out", gen_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*analyze) return Analyze(an);
    if (*diff) return Diff(old_report, new_report, diff_out);
    if (*gen) return Gen(spec, gen_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "ingest error: " << e.what() << "\n";
    return kIngest;
  } catch (const IngestError& e) {
    std::cerr << "ingest error: " << e.what() << "\n";
    return kIngest;
  } catch (const IntegrityError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInconsistent;
  }
  return kUsage;
}
