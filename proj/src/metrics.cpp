#include "maskattack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "maskattack/subprocess.hpp"

namespace maskattack {

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream iss(s);
  std::vector<std::string> out;
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

template <typename Seq>
std::pair<double, EditBreakdown> edit_rate(const Seq& ref, const Seq& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();

  EditBreakdown bd;
  bd.ref_len = n;
  if (n == 0) {
    bd.insertions = m;
    const double rate = m == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return {rate, bd};
  }

  // Levenshtein DP with unit costs, backtraced for the operation breakdown.
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }

  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] && ref[i - 1] == hyp[j - 1]) {
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++bd.substitutions;
      --i, --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++bd.deletions;
      --i;
    } else {
      ++bd.insertions;
      --j;
    }
  }
  return {static_cast<double>(bd.total_edits()) / n, bd};
}

}  // namespace

std::pair<double, EditBreakdown> wer(const std::string& reference,
                                     const std::string& hypothesis) {
  return edit_rate(split_words(reference), split_words(hypothesis));
}

std::pair<double, EditBreakdown> cer(const std::string& reference,
                                     const std::string& hypothesis) {
  return edit_rate(reference, hypothesis);
}

double success_rate(const std::vector<double>& wers) {
  if (wers.empty()) throw UndefinedInputError("success_rate over empty set");
  const auto hits = std::count_if(wers.begin(), wers.end(), [](double w) { return w > 0.0; });
  return static_cast<double>(hits) / wers.size();
}

double segmental_snr(const AudioBuffer& original, const AudioBuffer& adversarial,
                     std::size_t segment_len, double clamp_lo, double clamp_hi) {
  if (original.samples.size() != adversarial.samples.size()) {
    throw DimensionError("segmental_snr requires equal lengths");
  }
  if (original.sample_rate_hz != adversarial.sample_rate_hz) {
    throw DimensionError("segmental_snr requires equal rates");
  }
  constexpr double kSilence = 1e-10;
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t off = 0; off < original.samples.size(); off += segment_len) {
    const std::size_t end = std::min(off + segment_len, original.samples.size());
    double sig = 0.0, err = 0.0;
    for (std::size_t i = off; i < end; ++i) {
      const double o = original.samples[i];
      const double e = o - adversarial.samples[i];
      sig += o * o;
      err += e * e;
    }
    if (sig < kSilence) continue;
    const double snr = err == 0.0 ? clamp_hi : 10.0 * std::log10(sig / err);
    acc += std::clamp(snr, clamp_lo, clamp_hi);
    ++count;
  }
  return count == 0 ? 0.0 : acc / count;
}

double log_spectral_distance(const AudioBuffer& original, const AudioBuffer& adversarial,
                             const StftConfig& config) {
  if (original.samples.size() != adversarial.samples.size()) {
    throw DimensionError("log_spectral_distance requires equal lengths");
  }
  Spectrogram a = stft(original, config);
  Spectrogram b = stft(adversarial, config);

  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < a.frame_count(); ++t) {
    for (std::size_t k = 0; k < a.frames[t].size(); ++k) {
      auto logmag = [](const std::complex<double>& v) {
        const double mag = std::abs(v);
        return mag > 0.0 ? std::max(20.0 * std::log10(mag), kPsdFloorDb) : kPsdFloorDb;
      };
      const double diff = logmag(a.frames[t][k]) - logmag(b.frames[t][k]);
      acc += diff * diff;
      ++count;
    }
  }
  return count == 0 ? 0.0 : std::sqrt(acc / count);
}

std::vector<std::size_t> pareto_front(const std::vector<std::pair<double, double>>& points) {
  if (points.empty()) throw UndefinedInputError("pareto_front over empty set");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].first > points[b].first;
  });

  // A point survives iff it has the best similarity within its WER group and
  // beats every strictly-higher-WER point's similarity.
  std::vector<std::size_t> front;
  double best_sim_above = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double group_best = -std::numeric_limits<double>::infinity();
    while (j < order.size() && points[order[j]].first == points[order[i]].first) {
      group_best = std::max(group_best, points[order[j]].second);
      ++j;
    }
    for (std::size_t k = i; k < j; ++k) {
      const double sim = points[order[k]].second;
      if (sim == group_best && sim > best_sim_above) front.push_back(order[k]);
    }
    best_sim_above = std::max(best_sim_above, group_best);
    i = j;
  }
  std::sort(front.begin(), front.end());
  return front;
}

double auc(const std::vector<double>& benign_scores,
           const std::vector<double>& adversarial_scores) {
  if (benign_scores.empty() || adversarial_scores.empty()) {
    throw UndefinedInputError("auc requires both score sets non-empty");
  }
  // Midrank formulation of the Mann-Whitney statistic.
  struct Tagged {
    double score;
    bool adversarial;
  };
  std::vector<Tagged> all;
  all.reserve(benign_scores.size() + adversarial_scores.size());
  for (double s : benign_scores) all.push_back({s, false});
  for (double s : adversarial_scores) all.push_back({s, true});
  std::sort(all.begin(), all.end(),
            [](const Tagged& a, const Tagged& b) { return a.score < b.score; });

  double adv_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].adversarial) adv_rank_sum += midrank;
    }
    i = j;
  }
  const double na = static_cast<double>(adversarial_scores.size());
  const double nb = static_cast<double>(benign_scores.size());
  return (adv_rank_sum - na * (na + 1.0) / 2.0) / (na * nb);
}

double external_pesq(const std::string& tool_path, const AudioBuffer& reference,
                     const AudioBuffer& degraded) {
  detail::TempWav ref(reference);
  detail::TempWav deg(degraded);
  const std::string output =
      detail::run_command_capture({tool_path, ref.path(), deg.path()});
  std::istringstream iss(output);
  double score = 0.0;
  if (!(iss >> score)) throw FormatError("PESQ tool did not print a number");
  if (score < -0.5 || score > 4.5) {
    throw FormatError("PESQ score " + std::to_string(score) + " outside [-0.5, 4.5]");
  }
  return score;
}

}  // namespace maskattack
