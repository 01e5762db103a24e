// Copyright 2026 The NetBuddy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "netbuddy/bgp.h"
#include "netbuddy/formal_spec.h"
#include "netbuddy/http_backend.h"
#include "netbuddy/mock_backend.h"
#include "netbuddy/p4_entries.h"
#include "netbuddy/path_synth.h"
#include "netbuddy/requirement_text.h"
#include "netbuddy/topology.h"
#include "netbuddy/verifier.h"

namespace netbuddy {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  file << text;
  return file ? absl::OkStatus()
              : absl::DataLossError(absl::StrCat("short write to ", path.string()));
}

// Where stage outputs go: files under --out-dir, or stdout when unset.
class Sink {
 public:
  Sink(std::string out_dir, std::ostream& out)
      : out_dir_(std::move(out_dir)), out_(out) {}

  bool to_files() const { return !out_dir_.empty(); }

  absl::Status Emit(const std::string& name, const std::string& text) {
    if (!to_files()) {
      out_ << text;
      return absl::OkStatus();
    }
    written_.push_back(name);
    return WriteFile(fs::path(out_dir_) / name, text);
  }

  // Auxiliary outputs only land in files.
  absl::Status EmitAux(const std::string& name, const std::string& text) {
    if (!to_files()) return absl::OkStatus();
    written_.push_back(name);
    return WriteFile(fs::path(out_dir_) / name, text);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::string out_dir_;
  std::ostream& out_;
  std::vector<std::string> written_;
};

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitError;
}

absl::StatusOr<Topology> ReadTopology(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<Topology> topology = LoadTopology(*text);
  if (!topology.ok()) {
    return absl::Status(topology.status().code(),
                        absl::StrCat(path, ": ", topology.status().message()));
  }
  return topology;
}

absl::StatusOr<FormalSpec> ReadSpec(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<FormalSpec> spec = ParseFormalSpec(*text);
  if (!spec.ok()) {
    return absl::Status(spec.status().code(),
                        absl::StrCat(path, ": ", spec.status().message()));
  }
  return spec;
}

void WarnIfLarge(const Topology& topology, std::ostream& err) {
  if (topology.switches().size() > static_cast<size_t>(kPracticalSwitchLimit)) {
    err << "warning: " << topology.switches().size()
        << " switches exceed the practical limit of " << kPracticalSwitchLimit
        << " for exhaustive simple-path search\n";
  }
}

void AddTranslatorFlags(CLI::App& cmd, TranslatorOptions& o) {
  cmd.add_option("--backend", o.backend, "Model backend")
      ->check(CLI::IsMember({"mock", "http"}))
      ->capture_default_str();
  cmd.add_option("--batch-size", o.batch_size, "Requirements per prompt")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--temperature", o.temperature, "Sampling temperature")
      ->check(CLI::Range(0.0, 2.0))
      ->capture_default_str();
  cmd.add_option("--max-retries", o.max_retries,
                 "Feedback retries per batch")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd.add_option("--max-in-flight", o.max_in_flight,
                 "Concurrent backend calls")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--max-input-tokens", o.max_input_tokens,
                 "Input token limit per prompt")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--price-prompt", o.price_prompt_per_1k,
                 "Price per 1000 prompt tokens");
  cmd.add_option("--price-completion", o.price_completion_per_1k,
                 "Price per 1000 completion tokens");
  cmd.add_option("--mock-fault", o.mock_faults,
                 "Mock fault rule kind:above[:times], repeatable");
}

// Outcome of translate plus spec assembly.
struct TranslateStage {
  TranslationResult translation;
  BuildResult build;
};

absl::StatusOr<TranslateStage> RunTranslateStage(
    const RequirementsDocument& doc, const NetworkComponents& components,
    const TranslatorOptions& options) {
  absl::StatusOr<TranslatorConfig> config = ToTranslatorConfig(options);
  if (!config.ok()) return config.status();
  absl::StatusOr<std::unique_ptr<LlmBackend>> backend = MakeBackend(options);
  if (!backend.ok()) return backend.status();
  absl::StatusOr<TranslationResult> translation =
      TranslateRequirements(doc.requirements, *config, **backend, components);
  if (!translation.ok()) return translation.status();
  TranslateStage stage;
  stage.translation = *std::move(translation);
  absl::StatusOr<BuildResult> build = BuildSpec(stage.translation.assertions);
  if (!build.ok()) return build.status();
  stage.build = *std::move(build);
  return stage;
}

void ReportBatchFailures(const TranslationResult& result, int batch_size,
                         size_t total, std::ostream& err) {
  for (const BatchFailure& f : result.failures) {
    const size_t first = static_cast<size_t>(f.batch_index) * batch_size + 1;
    const size_t last = std::min(total, first + batch_size - 1);
    err << "error: batch " << f.batch_index + 1 << " (requirements " << first
        << "-" << last << ", " << last - first + 1 << " requirements) failed: "
        << f.reason << "\n";
  }
}

NetworkComponents MergeComponents(const RequirementsDocument& doc,
                                  const Topology* topology) {
  if (!doc.components.empty() || topology == nullptr) return doc.components;
  return ComponentsOf(*topology);
}

void PrintConflicts(const ConflictReport& report, std::ostream& err) {
  for (const Conflict& c : report.conflicts) {
    err << (c.kind == ConflictKind::kExplicit ? "explicit" : "implicit")
        << " conflict on (" << c.subject.first << ", " << c.subject.second
        << "): " << c.explanation << "\n";
  }
}

std::string ManifestJson(const std::vector<json>& stages, int exit_code,
                         const TranslatorOptions& options, uint64_t seed) {
  json doc = {{"stages", stages},
              {"exit_code", exit_code},
              {"config",
               {{"backend", options.backend},
                {"batch_size", options.batch_size},
                {"temperature", options.temperature},
                {"max_retries", options.max_retries},
                {"mock_faults", options.mock_faults},
                {"seed", seed}}}};
  return doc.dump(2) + "\n";
}

}  // namespace

absl::StatusOr<TranslatorConfig> ToTranslatorConfig(
    const TranslatorOptions& options) {
  TranslatorConfig config;
  config.batch_size = options.batch_size;
  config.temperature = options.temperature;
  config.max_retries = options.max_retries;
  config.max_in_flight = options.max_in_flight;
  config.max_input_tokens = options.max_input_tokens;
  config.price = {options.price_prompt_per_1k, options.price_completion_per_1k};
  if (options.backend == "mock") {
    config.backend = BackendKind::kMock;
  } else if (options.backend == "http") {
    config.backend = BackendKind::kHttp;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown backend '", options.backend, "'"));
  }
  if (absl::Status s = ValidateTranslatorConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<std::unique_ptr<LlmBackend>> MakeBackend(
    const TranslatorOptions& options) {
  if (options.backend == "http") {
    if (!options.mock_faults.empty()) {
      return absl::InvalidArgumentError("--mock-fault needs --backend mock");
    }
    absl::StatusOr<HttpBackendOptions> http = HttpBackendOptionsFromEnvironment();
    if (!http.ok()) return http.status();
    return std::make_unique<HttpBackend>(*std::move(http));
  }
  std::vector<FaultRule> rules;
  for (const std::string& text : options.mock_faults) {
    absl::StatusOr<FaultRule> rule = ParseFaultRule(text);
    if (!rule.ok()) return rule.status();
    rules.push_back(*rule);
  }
  return std::make_unique<MockBackend>(std::move(rules));
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Compile network requirements into verified configurations"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::function<int()> action;
  std::string out_dir;
  TranslatorOptions topts;
  uint64_t seed = 0;
  std::string requirements_path, topology_path, spec_path, routing_path,
      entries_path, fixture_path, requirement_text, script_path;
  int64_t at_as = 0;

  // translate
  CLI::App* translate =
      app.add_subcommand("translate", "Requirements text to a formal spec");
  translate->add_option("requirements", requirements_path, "Requirements file")
      ->required();
  translate->add_option("--topology", topology_path,
                        "Topology supplying network components");
  translate->add_option("--out-dir", out_dir, "Directory for output files");
  AddTranslatorFlags(*translate, topts);
  translate->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<std::string> text = ReadFile(requirements_path);
      if (!text.ok()) return Fail(err, text.status());
      RequirementsDocument doc = ParseRequirementsDocument(*text);
      std::optional<Topology> topology;
      if (!topology_path.empty()) {
        absl::StatusOr<Topology> t = ReadTopology(topology_path);
        if (!t.ok()) return Fail(err, t.status());
        topology = *std::move(t);
      }
      absl::StatusOr<TranslateStage> stage = RunTranslateStage(
          doc, MergeComponents(doc, topology ? &*topology : nullptr), topts);
      if (!stage.ok()) return Fail(err, stage.status());
      Sink sink(out_dir, out);
      if (absl::Status s =
              sink.EmitAux("cost.json", SerializeCost(stage->translation));
          !s.ok()) {
        return Fail(err, s);
      }
      if (!stage->translation.failures.empty()) {
        ReportBatchFailures(stage->translation, topts.batch_size,
                            doc.requirements.size(), err);
        return kExitError;
      }
      if (absl::Status s = sink.EmitAux(
              "conflicts.json", SerializeConflictReport(stage->build.report));
          !s.ok()) {
        return Fail(err, s);
      }
      if (!stage->build.report.empty()) {
        PrintConflicts(stage->build.report, err);
        return kExitFindings;
      }
      if (absl::Status s =
              sink.Emit("spec.json", SerializeFormalSpec(stage->build.spec));
          !s.ok()) {
        return Fail(err, s);
      }
      return kExitOk;
    };
  });

  // render
  CLI::App* render =
      app.add_subcommand("render", "Formal spec to template requirement text");
  render->add_option("spec", spec_path, "Formal spec file")->required();
  render->add_option("--seed", seed, "Template choice seed");
  render->add_option("--topology", topology_path,
                     "Topology whose components head the document");
  render->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<FormalSpec> spec = ReadSpec(spec_path);
      if (!spec.ok()) return Fail(err, spec.status());
      if (!topology_path.empty()) {
        absl::StatusOr<Topology> t = ReadTopology(topology_path);
        if (!t.ok()) return Fail(err, t.status());
        NetworkComponents c = ComponentsOf(*t);
        out << "Switches: " << absl::StrJoin(c.switches, ", ") << "\n";
        out << "Hosts: " << absl::StrJoin(c.hosts, ", ") << "\n";
      }
      for (const std::string& line : RenderRequirements(*spec, seed)) {
        out << line << "\n";
      }
      return kExitOk;
    };
  });

  // check
  CLI::App* check =
      app.add_subcommand("check", "Look for implicit conflicts in a spec");
  check->add_option("spec", spec_path, "Formal spec file")->required();
  check->add_option("--topology", topology_path, "Topology file")->required();
  check->add_option("--out-dir", out_dir, "Directory for output files");
  check->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<Topology> topology = ReadTopology(topology_path);
      if (!topology.ok()) return Fail(err, topology.status());
      absl::StatusOr<FormalSpec> spec = ReadSpec(spec_path);
      if (!spec.ok()) return Fail(err, spec.status());
      WarnIfLarge(*topology, err);
      absl::StatusOr<ConflictReport> report = CheckFeasibility(*spec, *topology);
      if (!report.ok()) return Fail(err, report.status());
      Sink sink(out_dir, out);
      if (absl::Status s =
              sink.Emit("conflicts.json", SerializeConflictReport(*report));
          !s.ok()) {
        return Fail(err, s);
      }
      PrintConflicts(*report, err);
      return report->empty() ? kExitOk : kExitFindings;
    };
  });

  // synth
  CLI::App* synth =
      app.add_subcommand("synth", "Spec and topology to routing information");
  synth->add_option("--topology", topology_path, "Topology file")->required();
  synth->add_option("--spec", spec_path, "Formal spec file")->required();
  synth->add_option("--out-dir", out_dir, "Directory for output files");
  synth->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<Topology> topology = ReadTopology(topology_path);
      if (!topology.ok()) return Fail(err, topology.status());
      absl::StatusOr<FormalSpec> spec = ReadSpec(spec_path);
      if (!spec.ok()) return Fail(err, spec.status());
      WarnIfLarge(*topology, err);
      absl::StatusOr<RoutingInfo> routing = SynthesizePaths(*topology, *spec);
      if (!routing.ok()) return Fail(err, routing.status());
      for (const HostPair& p : UnroutedPairs(*routing)) {
        err << "warning: no path satisfies the spec for " << p.first << "->"
            << p.second << "\n";
      }
      Sink sink(out_dir, out);
      if (absl::Status s = sink.Emit("routing.json", SerializeRouting(*routing));
          !s.ok()) {
        return Fail(err, s);
      }
      return kExitOk;
    };
  });

  // gen-p4
  CLI::App* gen_p4 =
      app.add_subcommand("gen-p4", "Routing information to MPLS table entries");
  gen_p4->add_option("--topology", topology_path, "Topology file")->required();
  gen_p4->add_option("--routing", routing_path, "Routing file")->required();
  gen_p4->add_option("--out-dir", out_dir, "Directory for output files");
  gen_p4->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<Topology> topology = ReadTopology(topology_path);
      if (!topology.ok()) return Fail(err, topology.status());
      absl::StatusOr<std::string> text = ReadFile(routing_path);
      if (!text.ok()) return Fail(err, text.status());
      absl::StatusOr<RoutingInfo> routing = ParseRouting(*text);
      if (!routing.ok()) return Fail(err, routing.status());
      absl::StatusOr<P4EntrySet> entries =
          GenerateP4Entries(*routing, *topology);
      if (!entries.ok()) return Fail(err, entries.status());
      Sink sink(out_dir, out);
      if (absl::Status s = sink.Emit("entries.json", EmitEntriesJson(*entries));
          !s.ok()) {
        return Fail(err, s);
      }
      return kExitOk;
    };
  });

  // gen-bgp
  CLI::App* gen_bgp = app.add_subcommand(
      "gen-bgp", "Waypoint requirement to a vtysh local-preference script");
  gen_bgp->add_option("--fixture", fixture_path, "BGP topology and policy")
      ->required();
  gen_bgp->add_option("--requirement", requirement_text,
                      "e.g. \"Use AS30 to reach AS200\"")
      ->required();
  gen_bgp->add_option("--at", at_as, "AS whose policy changes")->required();
  gen_bgp->add_option("--out-dir", out_dir, "Directory for output files");
  gen_bgp->callback([&] {
    action = [&]() -> int {
      absl::StatusOr<std::string> text = ReadFile(fixture_path);
      if (!text.ok()) return Fail(err, text.status());
      absl::StatusOr<BgpFixture> fixture = LoadBgpFixture(*text);
      if (!fixture.ok()) return Fail(err, fixture.status());
      absl::StatusOr<BgpRequirement> req = ParseBgpRequirement(requirement_text);
      if (!req.ok()) return Fail(err, req.status());
      absl::StatusOr<BgpUpdate> update =
          GenerateBgpUpdate(fixture->topology, fixture->policy, *req, at_as);
      if (!update.ok()) return Fail(err, update.status());
      if (!update->changed) {
        err << "note: requirement already holds; script is a no-op\n";
      }
      Sink sink(out_dir, out);
      if (absl::Status s = sink.Emit("script.vtysh", EmitVtysh(update->script));
          !s.ok()) {
        return Fail(err, s);
      }
      if (absl::Status s =
              sink.EmitAux("policy.json", SerializeBgpPolicy(update->state));
          !s.ok()) {
        return Fail(err, s);
      }
      return kExitOk;
    };
  });

  // verify
  CLI::App* verify = app.add_subcommand(
      "verify", "Simulate forwarding or BGP decisions against requirements");
  verify->add_option("--topology", topology_path, "Topology file");
  verify->add_option("--entries", entries_path, "MPLS entries file");
  verify->add_option("--spec", spec_path, "Formal spec file");
  verify->add_option("--bgp-fixture", fixture_path, "BGP topology and policy");
  verify->add_option("--requirement", requirement_text, "BGP requirement");
  verify->add_option("--at", at_as, "AS to check");
  verify->add_option("--script", script_path,
                     "vtysh script applied before checking");
  verify->add_option("--out-dir", out_dir, "Directory for output files");
  verify->callback([&] {
    action = [&]() -> int {
      Sink sink(out_dir, out);
      if (!fixture_path.empty()) {
        if (requirement_text.empty() || at_as == 0) {
          return Fail(err, absl::InvalidArgumentError(
                               "BGP verification needs --requirement and --at"));
        }
        absl::StatusOr<std::string> text = ReadFile(fixture_path);
        if (!text.ok()) return Fail(err, text.status());
        absl::StatusOr<BgpFixture> fixture = LoadBgpFixture(*text);
        if (!fixture.ok()) return Fail(err, fixture.status());
        absl::StatusOr<BgpRequirement> req =
            ParseBgpRequirement(requirement_text);
        if (!req.ok()) return Fail(err, req.status());
        BgpPolicyState state = fixture->policy;
        if (!script_path.empty()) {
          absl::StatusOr<std::string> script = ReadFile(script_path);
          if (!script.ok()) return Fail(err, script.status());
          absl::StatusOr<BgpPolicyState> applied =
              ApplyVtyshScript(*script, fixture->topology, state);
          if (!applied.ok()) return Fail(err, applied.status());
          state = *std::move(applied);
        }
        absl::StatusOr<BgpCheck> result =
            VerifyBgpRequirement(fixture->topology, state, *req, at_as);
        if (!result.ok()) return Fail(err, result.status());
        if (absl::Status s =
                sink.Emit("verification.json", SerializeBgpCheck(*result));
            !s.ok()) {
          return Fail(err, s);
        }
        return result->satisfied ? kExitOk : kExitFindings;
      }
      if (topology_path.empty() || entries_path.empty() || spec_path.empty()) {
        return Fail(err, absl::InvalidArgumentError(
                             "verify needs --topology, --entries and --spec, "
                             "or --bgp-fixture"));
      }
      absl::StatusOr<Topology> topology = ReadTopology(topology_path);
      if (!topology.ok()) return Fail(err, topology.status());
      absl::StatusOr<FormalSpec> spec = ReadSpec(spec_path);
      if (!spec.ok()) return Fail(err, spec.status());
      absl::StatusOr<std::string> text = ReadFile(entries_path);
      if (!text.ok()) return Fail(err, text.status());
      absl::StatusOr<P4EntrySet> entries = ParseEntriesJson(*text);
      if (!entries.ok()) return Fail(err, entries.status());
      VerificationReport report =
          VerifyRequirements(*topology, entries->entries, *spec);
      if (absl::Status s = sink.Emit("verification.json",
                                     SerializeVerificationReport(report));
          !s.ok()) {
        return Fail(err, s);
      }
      err << FeedbackMessage(report);
      return report.AllSatisfied() ? kExitOk : kExitFindings;
    };
  });

  // pipeline
  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "Requirements to verified MPLS entries, every stage on disk");
  pipeline->add_option("--requirements", requirements_path, "Requirements file")
      ->required();
  pipeline->add_option("--topology", topology_path, "Topology file")
      ->required();
  pipeline->add_option("--out-dir", out_dir, "Directory for output files")
      ->required();
  pipeline->add_option("--seed", seed, "Recorded in the manifest");
  AddTranslatorFlags(*pipeline, topts);
  pipeline->callback([&] {
    action = [&]() -> int {
      Sink sink(out_dir, out);
      std::vector<json> stages;
      auto finish = [&](int code) {
        sink.EmitAux("manifest.json", ManifestJson(stages, code, topts, seed))
            .IgnoreError();
        return code;
      };
      auto stage_record = [&](const std::string& name, const std::string& status,
                              const std::string& output) {
        json s = {{"stage", name}, {"status", status}};
        if (!output.empty()) s["output"] = output;
        stages.push_back(std::move(s));
      };

      absl::StatusOr<Topology> topology = ReadTopology(topology_path);
      if (!topology.ok()) return Fail(err, topology.status());
      absl::StatusOr<std::string> text = ReadFile(requirements_path);
      if (!text.ok()) return Fail(err, text.status());
      WarnIfLarge(*topology, err);
      RequirementsDocument doc = ParseRequirementsDocument(*text);

      absl::StatusOr<TranslateStage> translated =
          RunTranslateStage(doc, MergeComponents(doc, &*topology), topts);
      if (!translated.ok()) {
        stage_record("translate", "error", "");
        Fail(err, translated.status());
        return finish(kExitError);
      }
      if (absl::Status s =
              sink.EmitAux("cost.json", SerializeCost(translated->translation));
          !s.ok()) {
        return Fail(err, s);
      }
      if (!translated->translation.failures.empty()) {
        stage_record("translate", "failed", "cost.json");
        ReportBatchFailures(translated->translation, topts.batch_size,
                            doc.requirements.size(), err);
        return finish(kExitError);
      }
      const BuildResult& build = translated->build;
      if (!build.report.empty()) {
        sink.EmitAux("conflicts.json", SerializeConflictReport(build.report))
            .IgnoreError();
        stage_record("translate", "conflicts", "conflicts.json");
        PrintConflicts(build.report, err);
        return finish(kExitFindings);
      }
      sink.EmitAux("spec.json", SerializeFormalSpec(build.spec)).IgnoreError();
      stage_record("translate", "ok", "spec.json");

      absl::StatusOr<ConflictReport> feasibility =
          CheckFeasibility(build.spec, *topology);
      if (!feasibility.ok()) {
        stage_record("check", "error", "");
        Fail(err, feasibility.status());
        return finish(kExitError);
      }
      sink.EmitAux("conflicts.json", SerializeConflictReport(*feasibility))
          .IgnoreError();
      if (!feasibility->empty()) {
        stage_record("check", "conflicts", "conflicts.json");
        PrintConflicts(*feasibility, err);
        return finish(kExitFindings);
      }
      stage_record("check", "ok", "conflicts.json");

      absl::StatusOr<RoutingInfo> routing =
          SynthesizePaths(*topology, build.spec);
      if (!routing.ok()) {
        stage_record("synth", "error", "");
        Fail(err, routing.status());
        return finish(kExitError);
      }
      for (const HostPair& p : UnroutedPairs(*routing)) {
        err << "warning: no path satisfies the spec for " << p.first << "->"
            << p.second << "\n";
      }
      std::vector<RoutingViolation> violations =
          ValidateRouting(*routing, *topology, build.spec);
      if (!violations.empty()) {
        for (const RoutingViolation& v : violations) {
          err << "routing violation " << v.pair.first << "->" << v.pair.second
              << ": " << v.reason << "\n";
        }
        stage_record("synth", "violations", "");
        return finish(kExitFindings);
      }
      sink.EmitAux("routing.json", SerializeRouting(*routing)).IgnoreError();
      stage_record("synth", "ok", "routing.json");

      absl::StatusOr<P4EntrySet> entries =
          GenerateP4Entries(*routing, *topology);
      if (!entries.ok()) {
        stage_record("gen-p4", "error", "");
        Fail(err, entries.status());
        return finish(kExitError);
      }
      sink.EmitAux("entries.json", EmitEntriesJson(*entries)).IgnoreError();
      stage_record("gen-p4", "ok", "entries.json");

      VerificationReport report =
          VerifyRequirements(*topology, entries->entries, build.spec);
      sink.EmitAux("verification.json", SerializeVerificationReport(report))
          .IgnoreError();
      err << FeedbackMessage(report);
      const bool ok = report.AllSatisfied();
      stage_record("verify", ok ? "ok" : "violations", "verification.json");
      out << routing->paths.size() - UnroutedPairs(*routing).size()
          << " forwarding paths, " << entries->entries.size()
          << " table entries, " << report.Count(CheckStatus::kViolated)
          << " violations\n";
      return finish(ok ? kExitOk : kExitFindings);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  if (!action) return kExitError;
  return action();
}

}  // namespace netbuddy
