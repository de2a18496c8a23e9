#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "maskattack/attack.hpp"
#include "maskattack/defense.hpp"
#include "maskattack/frame_select.hpp"

namespace maskattack {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string input;       // file, directory, or simple glob (dir/*.wav)
  std::string output_dir;  // reports and adversarial WAVs

  AttackMethod method = AttackMethod::DE;
  SelectionStrategy selection = SelectionStrategy::all;
  std::uint64_t seed = 0;
  StftConfig stft;
  GriffinLimConfig gl;
  RaisePolicy raise_policy = RaisePolicy::raise_only;

  double wer_threshold = 0.0;             // important selection
  std::optional<std::size_t> random_k;    // random selection without a manifest
  std::string selection_manifest;         // probe-frames output to reuse

  std::string probe_transcriber;               // spec string, stage 1
  std::vector<std::string> eval_transcribers;  // spec strings, evaluation
  std::string api_key_env;

  bool detector_enabled = false;
  AudioTransform detector_transform;
  double detector_cer_threshold = 0.0;

  std::string pesq_tool;  // optional external similarity hook
  bool allow_resample = false;
  int workers = 1;

  // Test hooks: when set these take precedence over the spec strings above.
  std::shared_ptr<Transcriber> probe_override;
  std::vector<std::shared_ptr<Transcriber>> eval_overrides;
};

struct RunReport {
  json document;
  bool any_failed = false;
};

// Flat key=value config files; '#' starts a comment. Unknown keys are errors.
void apply_config_file(RunConfig& config, const std::string& path);
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

std::vector<std::string> expand_inputs(const std::string& pattern);

// Stage 1-3 over every input, plus metrics; writes adversarial WAVs,
// report.json and report.csv under output_dir.
RunReport cmd_attack(const RunConfig& config);

// Important-frame probing only; writes a manifest reusable by cmd_attack.
RunReport cmd_probe_frames(const RunConfig& config);

// Waveguard-style detection over a benign and an adversarial directory.
RunReport cmd_detect(const RunConfig& config, const std::string& benign_input,
                     const std::string& adversarial_input);

// Concatenates attack-report records and recomputes aggregates.
json merge_reports(const std::vector<json>& reports);

// Aggregates derived purely from the record array (used for generation,
// merging and the self-consistency check).
json compute_aggregates(const json& records);

// Deep copy with timing fields removed; basis of determinism comparisons.
json strip_timing_fields(const json& doc);

std::string method_name(AttackMethod m);
std::string selection_name(SelectionStrategy s);
AttackMethod parse_method(const std::string& s);
SelectionStrategy parse_selection(const std::string& s);

}  // namespace maskattack
