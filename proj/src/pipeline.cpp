#include "maskattack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "maskattack/metrics.hpp"

namespace maskattack {

namespace fs = std::filesystem;

namespace {

constexpr int kSchemaVersion = 1;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double elapsed_ms(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   from)
      .count();
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

std::string window_name(WindowKind w) {
  return w == WindowKind::hann ? "hann" : "rectangular";
}

WindowKind parse_window(const std::string& s) {
  if (s == "hann") return WindowKind::hann;
  if (s == "rectangular") return WindowKind::rectangular;
  throw ConfigError("unknown window: " + s);
}

std::string transform_name(TransformKind k) {
  switch (k) {
    case TransformKind::down_up_sample: return "down_up_sample";
    case TransformKind::quantize_dequantize: return "quantize_dequantize";
    case TransformKind::median_filter: return "median_filter";
  }
  throw ConfigError("unknown transform");
}

TransformKind parse_transform(const std::string& s) {
  if (s == "down_up_sample") return TransformKind::down_up_sample;
  if (s == "quantize_dequantize") return TransformKind::quantize_dequantize;
  if (s == "median_filter") return TransformKind::median_filter;
  throw ConfigError("unknown transform: " + s);
}

std::vector<std::shared_ptr<Transcriber>> resolve_eval_transcribers(
    const RunConfig& cfg) {
  if (!cfg.eval_overrides.empty()) return cfg.eval_overrides;
  std::vector<std::shared_ptr<Transcriber>> out;
  for (const std::string& spec : cfg.eval_transcribers) {
    out.push_back(make_transcriber(spec, cfg.api_key_env));
  }
  return out;
}

std::shared_ptr<Transcriber> resolve_probe_transcriber(const RunConfig& cfg) {
  if (cfg.probe_override) return cfg.probe_override;
  if (cfg.probe_transcriber.empty()) return nullptr;
  return make_transcriber(cfg.probe_transcriber, cfg.api_key_env);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WriteError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw WriteError("short write to " + path);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

json stft_to_json(const StftConfig& c) {
  return json{{"frame_len", c.frame_len}, {"hop", c.hop}, {"window", window_name(c.window)}};
}

// Per-input entries of a probe manifest, keyed by input path.
struct ManifestEntry {
  std::size_t frame_count = 0;
  std::set<std::size_t> indices;
};

std::map<std::string, ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read selection manifest " + path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw FormatError("selection manifest is not valid JSON");
  if (doc.value("kind", "") != "probe_manifest") {
    throw FormatError("selection manifest has the wrong kind");
  }
  std::map<std::string, ManifestEntry> out;
  for (const json& rec : doc.at("inputs")) {
    if (!rec.value("ok", true)) continue;
    ManifestEntry e;
    e.frame_count = rec.at("frame_count").get<std::size_t>();
    for (const json& i : rec.at("important_frames")) e.indices.insert(i.get<std::size_t>());
    out[rec.at("input").get<std::string>()] = e;
  }
  return out;
}

}  // namespace

std::string method_name(AttackMethod m) {
  switch (m) {
    case AttackMethod::GL: return "GL";
    case AttackMethod::OP: return "OP";
    case AttackMethod::DE: return "DE";
  }
  throw ConfigError("unknown method");
}

AttackMethod parse_method(const std::string& s) {
  if (s == "GL" || s == "gl") return AttackMethod::GL;
  if (s == "OP" || s == "op") return AttackMethod::OP;
  if (s == "DE" || s == "de") return AttackMethod::DE;
  throw ConfigError("unknown attack method: " + s);
}

std::string selection_name(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::all: return "all";
    case SelectionStrategy::random: return "random";
    case SelectionStrategy::important: return "important";
  }
  throw ConfigError("unknown selection");
}

SelectionStrategy parse_selection(const std::string& s) {
  if (s == "all") return SelectionStrategy::all;
  if (s == "random") return SelectionStrategy::random;
  if (s == "important") return SelectionStrategy::important;
  throw ConfigError("unknown selection strategy: " + s);
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "input") cfg.input = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "method") cfg.method = parse_method(value);
    else if (key == "selection") cfg.selection = parse_selection(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "frame_len") cfg.stft.frame_len = std::stoi(value);
    else if (key == "hop") cfg.stft.hop = std::stoi(value);
    else if (key == "window") cfg.stft.window = parse_window(value);
    else if (key == "gl_iterations") cfg.gl.iterations = std::stoi(value);
    else if (key == "raise_policy") {
      if (value == "raise_only") cfg.raise_policy = RaisePolicy::raise_only;
      else if (value == "set_exact") cfg.raise_policy = RaisePolicy::set_exact;
      else throw ConfigError("unknown raise policy: " + value);
    } else if (key == "wer_threshold") cfg.wer_threshold = std::stod(value);
    else if (key == "random_k") cfg.random_k = std::stoull(value);
    else if (key == "selection_manifest") cfg.selection_manifest = value;
    else if (key == "probe_transcriber") cfg.probe_transcriber = value;
    else if (key == "eval_transcribers") {
      cfg.eval_transcribers.clear();
      std::istringstream iss(value);
      std::string tok;
      while (std::getline(iss, tok, ',')) {
        if (!tok.empty()) cfg.eval_transcribers.push_back(tok);
      }
    } else if (key == "api_key_env") cfg.api_key_env = value;
    else if (key == "detector") {
      if (value == "none") cfg.detector_enabled = false;
      else {
        cfg.detector_enabled = true;
        cfg.detector_transform.kind = parse_transform(value);
      }
    } else if (key == "detector_target_rate_hz") cfg.detector_transform.target_rate_hz = std::stoi(value);
    else if (key == "detector_bits") cfg.detector_transform.bits = std::stoi(value);
    else if (key == "detector_width") cfg.detector_transform.width = std::stoi(value);
    else if (key == "detector_cer_threshold") cfg.detector_cer_threshold = std::stod(value);
    else if (key == "pesq_tool") cfg.pesq_tool = value;
    else if (key == "allow_resample") cfg.allow_resample = parse_bool(value);
    else if (key == "workers") cfg.workers = std::stoi(value);
    else throw ConfigError("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad value '" + value + "' for config key " + key);
  } catch (const std::out_of_range&) {
    throw ConfigError("value '" + value + "' out of range for config key " + key);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::vector<std::string> expand_inputs(const std::string& pattern) {
  if (pattern.empty()) throw ConfigError("no input given");
  std::vector<std::string> out;
  std::error_code ec;
  if (fs::is_directory(pattern, ec)) {
    for (const auto& entry : fs::directory_iterator(pattern)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav") {
        out.push_back(entry.path().string());
      }
    }
  } else if (pattern.find('*') != std::string::npos) {
    const fs::path p(pattern);
    const fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    const std::string name = p.filename().string();
    // '*' is the only supported wildcard and may appear anywhere in the
    // filename component.
    auto matches = [&name](const std::string& candidate) {
      std::size_t ci = 0;
      std::size_t star = std::string::npos, backtrack = 0;
      std::size_t pi = 0;
      while (ci < candidate.size()) {
        if (pi < name.size() && (name[pi] == candidate[ci])) {
          ++pi, ++ci;
        } else if (pi < name.size() && name[pi] == '*') {
          star = pi++;
          backtrack = ci;
        } else if (star != std::string::npos) {
          pi = star + 1;
          ci = ++backtrack;
        } else {
          return false;
        }
      }
      while (pi < name.size() && name[pi] == '*') ++pi;
      return pi == name.size();
    };
    if (!fs::is_directory(dir, ec)) throw ConfigError("no such directory: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && matches(entry.path().filename().string())) {
        out.push_back(entry.path().string());
      }
    }
  } else {
    if (!fs::is_regular_file(pattern, ec)) {
      throw ConfigError("no such input file: " + pattern);
    }
    out.push_back(pattern);
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw ConfigError("input pattern matched no files: " + pattern);
  return out;
}

json compute_aggregates(const json& records) {
  json agg;
  agg["total"] = records.size();

  std::map<std::string, std::vector<double>> wers_by_transcriber;
  std::vector<double> snrs, lsds, benign_scores, adv_scores;
  std::vector<std::pair<double, double>> pareto_points;  // (wer, snr)
  std::vector<std::string> pareto_inputs;
  std::size_t ok_count = 0;

  for (const json& rec : records) {
    if (!rec.value("ok", false)) continue;
    ++ok_count;
    for (const json& t : rec.at("transcribers")) {
      wers_by_transcriber[t.at("name").get<std::string>()].push_back(
          t.at("wer").get<double>());
    }
    const json& sim = rec.at("similarity");
    snrs.push_back(sim.at("segmental_snr_db").get<double>());
    lsds.push_back(sim.at("log_spectral_distance_db").get<double>());
    if (rec.contains("detector") && !rec.at("detector").is_null()) {
      benign_scores.push_back(rec.at("detector").at("benign_score").get<double>());
      adv_scores.push_back(rec.at("detector").at("adversarial_score").get<double>());
    }
    if (!rec.at("transcribers").empty()) {
      pareto_points.emplace_back(rec.at("transcribers")[0].at("wer").get<double>(),
                                 sim.at("segmental_snr_db").get<double>());
      pareto_inputs.push_back(rec.at("input").get<std::string>());
    }
  }
  agg["ok"] = ok_count;
  agg["failed"] = records.size() - ok_count;

  auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  auto median = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  json per_transcriber = json::object();
  for (const auto& [name, wers] : wers_by_transcriber) {
    per_transcriber[name] = {{"success_rate", success_rate(wers)},
                             {"mean_wer", mean(wers)},
                             {"median_wer", median(wers)}};
  }
  agg["per_transcriber"] = per_transcriber;
  agg["mean_segmental_snr_db"] = mean(snrs);
  agg["mean_log_spectral_distance_db"] = mean(lsds);

  if (!benign_scores.empty() && !adv_scores.empty()) {
    agg["detector_auc"] = auc(benign_scores, adv_scores);
  } else {
    agg["detector_auc"] = nullptr;
  }

  // Attack-strength/quality trade-off over (WER of the first transcriber,
  // segmental SNR), both maximized.
  if (!pareto_points.empty()) {
    json front = json::array();
    for (std::size_t idx : pareto_front(pareto_points)) front.push_back(pareto_inputs[idx]);
    agg["pareto_front"] = front;
  } else {
    agg["pareto_front"] = json::array();
  }
  return agg;
}

json strip_timing_fields(const json& doc) {
  if (doc.is_object()) {
    json out = json::object();
    for (const auto& [key, value] : doc.items()) {
      if (key == "wall_clock_ms" || key == "latency_ms" || key == "mean_wall_clock_ms") {
        continue;
      }
      out[key] = strip_timing_fields(value);
    }
    return out;
  }
  if (doc.is_array()) {
    json out = json::array();
    for (const json& v : doc) out.push_back(strip_timing_fields(v));
    return out;
  }
  return doc;
}

namespace {

// One input through selection, attack, splice, write and scoring. Throws on
// failure; the caller turns that into a failed record.
json process_one(const std::string& path, const RunConfig& cfg,
                 const std::map<std::string, ManifestEntry>* manifest,
                 const std::shared_ptr<Transcriber>& probe,
                 const std::vector<std::shared_ptr<Transcriber>>& evals) {
  const auto started = std::chrono::steady_clock::now();

  AudioBuffer audio = read_wav(path, kPipelineRateHz, cfg.allow_resample);
  Spectrogram original = stft(audio, cfg.stft);
  const std::size_t frame_count = original.frame_count();
  const std::uint64_t derived_seed =
      cfg.seed ^ fnv1a(fs::path(path).filename().string());

  const ManifestEntry* entry = nullptr;
  if (manifest != nullptr) {
    auto it = manifest->find(path);
    if (it == manifest->end()) {
      throw ConfigError("input " + path + " not present in the selection manifest");
    }
    if (it->second.frame_count != frame_count) {
      throw ConfigError("manifest frame count mismatch for " + path);
    }
    entry = &it->second;
  }

  FrameSelection selection;
  switch (cfg.selection) {
    case SelectionStrategy::all:
      selection = select_all(frame_count);
      break;
    case SelectionStrategy::random: {
      std::size_t k;
      if (cfg.random_k.has_value()) k = *cfg.random_k;
      else k = entry->indices.size();  // validated by cmd_attack
      if (k > frame_count) k = frame_count;
      selection = select_random(frame_count, k, derived_seed);
      break;
    }
    case SelectionStrategy::important:
      if (entry != nullptr) {
        selection.indices = entry->indices;
        selection.strategy = SelectionStrategy::important;
      } else {
        selection = select_important(audio, *probe, cfg.stft, cfg.wer_threshold);
      }
      break;
  }

  AttackConfig attack_cfg;
  attack_cfg.method = cfg.method;
  attack_cfg.stft = cfg.stft;
  attack_cfg.gl = cfg.gl;
  attack_cfg.gl.rng_seed = derived_seed;
  attack_cfg.raise_policy = cfg.raise_policy;

  AttackResult attacked = run_attack(audio, attack_cfg);
  AudioBuffer adversarial = combine(original, attacked.attacked_spectrogram,
                                    selection.indices);

  const std::string out_path =
      (fs::path(cfg.output_dir) / (fs::path(path).stem().string() + "_adv.wav"))
          .string();
  write_wav(adversarial, out_path);
  const double generation_ms = elapsed_ms(started);

  json record;
  record["input"] = path;
  record["output"] = out_path;
  record["ok"] = true;
  record["frame_count"] = frame_count;
  record["selected_frames"] =
      std::vector<std::size_t>(selection.indices.begin(), selection.indices.end());

  json transcribers = json::array();
  for (const auto& t : evals) {
    const std::string baseline = t->transcribe(audio).text;
    const std::string hypothesis = t->transcribe(adversarial).text;
    const auto [rate, breakdown] = wer(baseline, hypothesis);
    transcribers.push_back({{"name", t->info().name},
                            {"baseline", baseline},
                            {"adversarial", hypothesis},
                            {"wer", rate},
                            {"insertions", breakdown.insertions},
                            {"substitutions", breakdown.substitutions},
                            {"deletions", breakdown.deletions}});
  }
  record["transcribers"] = transcribers;

  json sim;
  sim["segmental_snr_db"] = segmental_snr(audio, adversarial);
  sim["log_spectral_distance_db"] = log_spectral_distance(audio, adversarial, cfg.stft);
  if (!cfg.pesq_tool.empty()) {
    sim["pesq"] = external_pesq(cfg.pesq_tool, audio, adversarial);
  } else {
    sim["pesq"] = nullptr;
  }
  record["similarity"] = sim;

  if (cfg.detector_enabled) {
    DetectorConfig det{cfg.detector_transform, cfg.detector_cer_threshold,
                       evals.empty() ? probe : evals.front()};
    const DetectionOutcome benign = detection_score(audio, det);
    const DetectionOutcome adv = detection_score(adversarial, det);
    record["detector"] = {{"benign_score", benign.score},
                          {"adversarial_score", adv.score},
                          {"flagged", adv.is_adversarial}};
  } else {
    record["detector"] = nullptr;
  }

  record["wall_clock_ms"] = generation_ms;
  return record;
}

json failed_record(const std::string& path, const std::string& message) {
  json record;
  record["input"] = path;
  record["ok"] = false;
  record["error"] = message;
  return record;
}

json config_echo(const RunConfig& cfg) {
  json echo;
  echo["method"] = method_name(cfg.method);
  echo["selection"] = selection_name(cfg.selection);
  echo["seed"] = cfg.seed;
  echo["stft"] = stft_to_json(cfg.stft);
  echo["gl_iterations"] = cfg.gl.iterations;
  echo["raise_policy"] =
      cfg.raise_policy == RaisePolicy::raise_only ? "raise_only" : "set_exact";
  echo["wer_threshold"] = cfg.wer_threshold;
  if (cfg.random_k.has_value()) echo["random_k"] = *cfg.random_k;
  if (cfg.detector_enabled) {
    echo["detector"] = {{"transform", transform_name(cfg.detector_transform.kind)},
                        {"cer_threshold", cfg.detector_cer_threshold}};
  }
  return echo;
}

std::string report_csv(const json& records) {
  std::ostringstream csv;
  csv << "input,output,ok,error,wer,segmental_snr_db,log_spectral_distance_db,"
         "detector_score\n";
  for (const json& rec : records) {
    csv << csv_escape(rec.at("input").get<std::string>()) << ',';
    csv << csv_escape(rec.value("output", "")) << ',';
    const bool ok = rec.value("ok", false);
    csv << (ok ? "true" : "false") << ',';
    csv << csv_escape(rec.value("error", ""));
    if (ok) {
      const json& ts = rec.at("transcribers");
      csv << ',' << (ts.empty() ? std::string() : std::to_string(ts[0].at("wer").get<double>()));
      csv << ',' << rec.at("similarity").at("segmental_snr_db").get<double>();
      csv << ',' << rec.at("similarity").at("log_spectral_distance_db").get<double>();
      csv << ',';
      if (!rec.at("detector").is_null()) {
        csv << rec.at("detector").at("adversarial_score").get<double>();
      }
    } else {
      csv << ",,,,";
    }
    csv << '\n';
  }
  return csv.str();
}

}  // namespace

RunReport cmd_attack(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) throw ConfigError("output_dir is required");
  const std::vector<std::string> inputs = expand_inputs(cfg.input);
  const auto evals = resolve_eval_transcribers(cfg);
  if (evals.empty()) throw ConfigError("at least one eval transcriber is required");
  auto probe = resolve_probe_transcriber(cfg);

  std::optional<std::map<std::string, ManifestEntry>> manifest;
  if (!cfg.selection_manifest.empty()) manifest = load_manifest(cfg.selection_manifest);

  if (cfg.selection == SelectionStrategy::random && !cfg.random_k.has_value() &&
      !manifest.has_value()) {
    throw ConfigError("selection=random needs random_k or a selection manifest");
  }
  if (cfg.selection == SelectionStrategy::important && !manifest.has_value() &&
      probe == nullptr) {
    throw ConfigError("selection=important needs a probe transcriber or a manifest");
  }
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");

  fs::create_directories(cfg.output_dir);

  int cap = cfg.workers;
  for (const auto& t : evals) cap = std::min(cap, t->info().max_concurrency);
  if (probe) cap = std::min(cap, probe->info().max_concurrency);
  const int workers = std::max(1, std::min<int>(cap, static_cast<int>(inputs.size())));

  std::vector<json> records(inputs.size());
  bool any_failed = false;
  auto run_range = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < inputs.size(); i += step) {
      try {
        records[i] = process_one(inputs[i],cfg,
                                 manifest.has_value() ? &*manifest : nullptr, probe,
                                 evals);
      } catch (const Error& e) {
        records[i] = failed_record(inputs[i], e.what());
      } catch (const std::exception& e) {
        records[i] = failed_record(inputs[i], e.what());
      }
    }
  };
  if (workers == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(run_range, static_cast<std::size_t>(w),
                        static_cast<std::size_t>(workers));
    }
    for (auto& t : pool) t.join();
  }

  json record_array = json::array();
  for (json& r : records) {
    if (!r.value("ok", false)) any_failed = true;
    record_array.push_back(std::move(r));
  }
  std::stable_sort(record_array.begin(), record_array.end(),
                   [](const json& a, const json& b) {
                     return a.at("input").get<std::string>() <
                            b.at("input").get<std::string>();
                   });

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "attack_report";
  doc["config"] = config_echo(cfg);
  doc["records"] = record_array;
  doc["aggregates"] = compute_aggregates(record_array);

  write_text_file((fs::path(cfg.output_dir) / "report.json").string(), doc.dump(2) + "\n");
  write_text_file((fs::path(cfg.output_dir) / "report.csv").string(),
                  report_csv(record_array));
  return {doc, any_failed};
}

RunReport cmd_probe_frames(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) throw ConfigError("output_dir is required");
  auto probe = resolve_probe_transcriber(cfg);
  if (probe == nullptr) throw ConfigError("probe-frames needs a probe transcriber");
  const std::vector<std::string> inputs = expand_inputs(cfg.input);
  fs::create_directories(cfg.output_dir);

  bool any_failed = false;
  json input_array = json::array();
  for (const std::string& path : inputs) {
    json rec;
    rec["input"] = path;
    try {
      AudioBuffer audio = read_wav(path, kPipelineRateHz, cfg.allow_resample);
      const std::size_t frame_count = stft_frame_count(audio.size(), cfg.stft);
      auto counter = std::make_shared<CountingTranscriber>(probe);
      FrameSelection sel =
          select_important(audio, *counter, cfg.stft, cfg.wer_threshold);
      rec["ok"] = true;
      rec["frame_count"] = frame_count;
      rec["queries"] = counter->calls();
      rec["important_frames"] =
          std::vector<std::size_t>(sel.indices.begin(), sel.indices.end());
      json wpf = json::object();
      for (const auto& [frame, w] : sel.wer_per_frame) wpf[std::to_string(frame)] = w;
      rec["wer_per_frame"] = wpf;
    } catch (const Error& e) {
      rec["ok"] = false;
      rec["error"] = e.what();
      any_failed = true;
    }
    input_array.push_back(std::move(rec));
  }

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "probe_manifest";
  doc["stft"] = stft_to_json(cfg.stft);
  doc["wer_threshold"] = cfg.wer_threshold;
  doc["inputs"] = input_array;
  write_text_file((fs::path(cfg.output_dir) / "probe_manifest.json").string(),
                  doc.dump(2) + "\n");
  return {doc, any_failed};
}

RunReport cmd_detect(const RunConfig& cfg, const std::string& benign_input,
                     const std::string& adversarial_input) {
  if (cfg.output_dir.empty()) throw ConfigError("output_dir is required");
  if (!cfg.detector_enabled) throw ConfigError("detect needs a detector transform");
  auto evals = resolve_eval_transcribers(cfg);
  auto probe = resolve_probe_transcriber(cfg);
  std::shared_ptr<Transcriber> transcriber = evals.empty() ? probe : evals.front();
  if (transcriber == nullptr) throw ConfigError("detect needs a transcriber");

  DetectorConfig det{cfg.detector_transform, cfg.detector_cer_threshold, transcriber};
  fs::create_directories(cfg.output_dir);

  bool any_failed = false;
  auto score_set = [&](const std::string& pattern, std::vector<double>& scores) {
    json arr = json::array();
    for (const std::string& path : expand_inputs(pattern)) {
      json rec;
      rec["input"] = path;
      try {
        AudioBuffer audio = read_wav(path, kPipelineRateHz, cfg.allow_resample);
        const DetectionOutcome outcome = detection_score(audio, det);
        rec["ok"] = true;
        rec["score"] = outcome.score;
        rec["flagged"] = outcome.is_adversarial;
        scores.push_back(outcome.score);
      } catch (const Error& e) {
        rec["ok"] = false;
        rec["error"] = e.what();
        any_failed = true;
      }
      arr.push_back(std::move(rec));
    }
    return arr;
  };

  std::vector<double> benign_scores, adversarial_scores;
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "detect_report";
  doc["transform"] = transform_name(cfg.detector_transform.kind);
  doc["cer_threshold"] = cfg.detector_cer_threshold;
  doc["benign"] = score_set(benign_input, benign_scores);
  doc["adversarial"] = score_set(adversarial_input, adversarial_scores);
  if (!benign_scores.empty() && !adversarial_scores.empty()) {
    doc["auc"] = auc(benign_scores, adversarial_scores);
  } else {
    doc["auc"] = nullptr;
  }
  write_text_file((fs::path(cfg.output_dir) / "detect_report.json").string(),
                  doc.dump(2) + "\n");
  return {doc, any_failed};
}

json merge_reports(const std::vector<json>& reports) {
  if (reports.empty()) throw ConfigError("nothing to merge");
  json records = json::array();
  for (const json& r : reports) {
    if (r.value("kind", "") != "attack_report") {
      throw FormatError("report-merge expects attack reports");
    }
    if (r.value("schema_version", -1) != kSchemaVersion) {
      throw FormatError("schema version mismatch in merged report");
    }
    for (const json& rec : r.at("records")) records.push_back(rec);
  }
  std::stable_sort(records.begin(), records.end(), [](const json& a, const json& b) {
    return a.at("input").get<std::string>() < b.at("input").get<std::string>();
  });
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "attack_report";
  doc["config"] = reports.front().value("config", json::object());
  doc["merged_from"] = reports.size();
  doc["records"] = records;
  doc["aggregates"] = compute_aggregates(records);
  return doc;
}

}  // namespace maskattack
