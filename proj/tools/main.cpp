#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "maskattack/pipeline.hpp"

namespace {

using maskattack::RunConfig;

// Config file first, CLI flags second so flags win.
void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "flat key=value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--input", cfg.input, "WAV file, directory or glob");
  cmd->add_option("--output-dir", cfg.output_dir, "report/output directory");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--frame-len", cfg.stft.frame_len, "STFT frame length");
  cmd->add_option("--hop", cfg.stft.hop, "STFT hop");
  cmd->add_option_function<std::string>(
         "--window",
         [&cfg](const std::string& v) {
           maskattack::apply_config_entry(cfg, "window", v);
         },
         "analysis window: hann|rectangular")
      ->check(CLI::IsMember({"hann", "rectangular"}));
  cmd->add_flag("--allow-resample", cfg.allow_resample,
                "resample inputs that are not at 16 kHz");
  cmd->add_option("--api-key-env", cfg.api_key_env,
                  "environment variable holding the HTTP Authorization value");
}

void add_detector_options(CLI::App* cmd, RunConfig& cfg, bool require_transform) {
  auto* transform = cmd->add_option_function<std::string>(
      "--detector",
      [&cfg](const std::string& v) { maskattack::apply_config_entry(cfg, "detector", v); },
      "input transform: down_up_sample|quantize_dequantize|median_filter|none");
  transform->check(
      CLI::IsMember({"down_up_sample", "quantize_dequantize", "median_filter", "none"}));
  auto* threshold = cmd->add_option("--detector-cer-threshold", cfg.detector_cer_threshold,
                                    "CER above which audio is flagged");
  cmd->add_option("--detector-target-rate-hz", cfg.detector_transform.target_rate_hz,
                  "down_up_sample intermediate rate");
  cmd->add_option("--detector-bits", cfg.detector_transform.bits,
                  "quantize_dequantize bit depth");
  cmd->add_option("--detector-width", cfg.detector_transform.width,
                  "median_filter window width (odd)");
  if (require_transform) {
    transform->required();
    threshold->required();
  } else {
    threshold->needs(transform);
  }
}

int run_guarded(const std::function<maskattack::RunReport()>& fn) {
  try {
    const maskattack::RunReport report = fn();
    std::cout << report.document.at("kind").get<std::string>() << " written"
              << std::endl;
    return report.any_failed ? 1 : 0;
  } catch (const maskattack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const maskattack::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"black-box adversarial audio via psychoacoustic frequency masking"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string method = "DE", selection = "all", raise_policy = "raise_only";
  std::vector<std::string> merge_inputs;
  std::string merge_output;
  std::string benign_input, adversarial_input;
  std::size_t random_k = 0;

  auto* attack = app.add_subcommand("attack", "generate adversarial audio and a report");
  add_common_options(attack, cfg, config_path);
  attack->add_option("--method", method, "GL|OP|DE")
      ->check(CLI::IsMember({"GL", "OP", "DE", "gl", "op", "de"}));
  attack->add_option("--selection", selection, "all|random|important")
      ->check(CLI::IsMember({"all", "random", "important"}));
  attack->add_option("--raise-policy", raise_policy, "raise_only|set_exact")
      ->check(CLI::IsMember({"raise_only", "set_exact"}));
  attack->add_option("--gl-iterations", cfg.gl.iterations, "Griffin-Lim iterations");
  attack->add_option("--wer-threshold", cfg.wer_threshold,
                     "importance threshold for frame probing");
  auto* k_opt = attack->add_option("--random-k", random_k, "frame count for selection=random");
  attack->add_option("--selection-manifest", cfg.selection_manifest,
                     "probe-frames manifest to reuse");
  attack->add_option("--probe-transcriber", cfg.probe_transcriber,
                     "transcriber spec used for frame probing");
  attack->add_option("--eval-transcriber", cfg.eval_transcribers,
                     "transcriber spec(s) used for evaluation (repeatable)");
  attack->add_option("--pesq-tool", cfg.pesq_tool, "external PESQ binary");
  attack->add_option("--workers", cfg.workers, "parallel inputs");
  add_detector_options(attack, cfg, /*require_transform=*/false);

  auto* probe = app.add_subcommand("probe-frames",
                                   "find important frames; writes a reusable manifest");
  add_common_options(probe, cfg, config_path);
  probe->add_option("--probe-transcriber", cfg.probe_transcriber, "transcriber spec");
  probe->add_option("--wer-threshold", cfg.wer_threshold, "importance threshold");

  auto* detect = app.add_subcommand("detect", "score benign vs adversarial sets");
  add_common_options(detect, cfg, config_path);
  detect->add_option("--benign", benign_input, "benign WAV dir/glob")->required();
  detect->add_option("--adversarial", adversarial_input, "adversarial WAV dir/glob")
      ->required();
  detect->add_option("--transcriber", cfg.eval_transcribers, "transcriber spec");
  add_detector_options(detect, cfg, /*require_transform=*/true);

  auto* merge = app.add_subcommand("report-merge", "merge attack reports");
  merge->add_option("--report", merge_inputs, "attack report.json (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  merge->add_option("--output", merge_output, "merged report path")->required();

  // Precedence: parse once to learn the config path, load the file into a
  // fresh RunConfig, then re-parse so explicit flags override file values.
  // CLI11 only writes bound variables for options actually provided.
  CLI11_PARSE(app, argc, argv);
  try {
    if (!config_path.empty()) {
      RunConfig from_file;
      maskattack::apply_config_file(from_file, config_path);
      cfg = std::move(from_file);
      app.clear();
      CLI11_PARSE(app, argc, argv);
    }
    if (attack->count("--method") > 0) cfg.method = maskattack::parse_method(method);
    if (attack->count("--selection") > 0) {
      cfg.selection = maskattack::parse_selection(selection);
    }
    if (attack->count("--raise-policy") > 0) {
      maskattack::apply_config_entry(cfg, "raise_policy", raise_policy);
    }
    if (k_opt->count() > 0) cfg.random_k = random_k;

    if (attack->parsed()) return run_guarded([&] { return maskattack::cmd_attack(cfg); });
    if (probe->parsed()) {
      return run_guarded([&] { return maskattack::cmd_probe_frames(cfg); });
    }
    if (detect->parsed()) {
      return run_guarded(
          [&] { return maskattack::cmd_detect(cfg, benign_input, adversarial_input); });
    }
    if (merge->parsed()) {
      std::vector<maskattack::json> reports;
      for (const std::string& path : merge_inputs) {
        std::ifstream in(path, std::ios::binary);
        maskattack::json doc =
            maskattack::json::parse(in, nullptr, /*allow_exceptions=*/false);
        if (doc.is_discarded()) {
          throw maskattack::FormatError(path + " is not valid JSON");
        }
        reports.push_back(std::move(doc));
      }
      const maskattack::json merged = maskattack::merge_reports(reports);
      std::ofstream out(merge_output, std::ios::binary);
      if (!out) throw maskattack::WriteError("cannot write " + merge_output);
      out << merged.dump(2) << "\n";
      std::cout << "merged " << reports.size() << " reports" << std::endl;
      return 0;
    }
  } catch (const maskattack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const maskattack::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
