#include "hyperroles/transitions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "hyperroles/error.hpp"

namespace hyperroles {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void finalize(TransitionMatrix& m) {
  m.prob.assign(m.k * m.k, kNaN);
  for (std::size_t a = 0; a < m.k; ++a) {
    std::size_t total = 0;
    for (std::size_t b = 0; b < m.k; ++b) total += m.counts[a * m.k + b];
    m.row_totals[a] = total;
    if (total == 0) continue;
    for (std::size_t b = 0; b < m.k; ++b) {
      m.prob[a * m.k + b] = static_cast<double>(m.counts[a * m.k + b]) / static_cast<double>(total);
    }
  }
}

TransitionMatrix empty_matrix(std::size_t k) {
  TransitionMatrix m;
  m.k = k;
  m.counts.assign(k * k, 0);
  m.row_totals.assign(k, 0);
  return m;
}

void check_k(std::size_t k) {
  if (k == 0 || k > 255) throw Error(ErrorCode::kInvalidValue, "archetype count must be in [1, 255]");
}

}  // namespace

TransitionMatrix observed_transitions(std::span<const ArchetypeSequence> seqs, std::size_t k) {
  check_k(k);
  TransitionMatrix m = empty_matrix(k);
  std::size_t pairs = 0;
  for (const auto& seq : seqs) {
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
      const auto& cur = seq.steps[i];
      if (cur.archetype >= k) throw Error(ErrorCode::kInvalidValue, "archetype index out of range");
      if (i > 0 && seq.steps[i - 1].t >= cur.t) {
        throw Error(ErrorCode::kInvalidValue, "sequence months must be strictly increasing");
      }
      if (i + 1 < seq.steps.size() && seq.steps[i + 1].t == cur.t + 1) {
        const auto next = seq.steps[i + 1].archetype;
        if (next >= k) throw Error(ErrorCode::kInvalidValue, "archetype index out of range");
        ++m.counts[cur.archetype * k + next];
        ++pairs;
      }
    }
  }
  if (pairs == 0) throw Error(ErrorCode::kEmptyInput, "no adjacent-month observations");
  finalize(m);
  return m;
}

LabelPanel::LabelPanel(std::span<const ArchetypeSequence> seqs, std::size_t k) : k_(k) {
  check_k(k);
  std::map<int, std::size_t> month_index;
  for (const auto& seq : seqs) {
    for (const auto& step : seq.steps) month_index.emplace(step.t, 0);
  }
  for (auto& [t, idx] : month_index) {
    idx = months_.size();
    months_.push_back(t);
  }
  labels_.resize(months_.size());
  links_.resize(months_.size());

  for (const auto& seq : seqs) {
    std::uint32_t prev_pos = 0;
    int prev_t = std::numeric_limits<int>::min();
    for (const auto& step : seq.steps) {
      if (step.archetype >= k) throw Error(ErrorCode::kInvalidValue, "archetype index out of range");
      if (step.t <= prev_t) throw Error(ErrorCode::kInvalidValue, "sequence months must be strictly increasing");
      const std::size_t mi = month_index.at(step.t);
      const auto pos = static_cast<std::uint32_t>(labels_[mi].size());
      labels_[mi].push_back(static_cast<std::uint8_t>(step.archetype));
      if (prev_t != std::numeric_limits<int>::min() && step.t == prev_t + 1) {
        links_[mi - 1].emplace_back(prev_pos, pos);
      }
      prev_t = step.t;
      prev_pos = pos;
    }
  }
}

std::vector<std::vector<std::uint8_t>> LabelPanel::shuffled(Rng& rng) const {
  auto out = labels_;
  for (auto& month : out) shuffle(std::span<std::uint8_t>(month), rng);
  return out;
}

TransitionMatrix LabelPanel::transitions(std::span<const std::vector<std::uint8_t>> labels) const {
  TransitionMatrix m = empty_matrix(k_);
  for (std::size_t i = 0; i + 1 < months_.size(); ++i) {
    const auto& from = labels[i];
    const auto& to = labels[i + 1];
    for (const auto& [a, b] : links_[i]) ++m.counts[from[a] * k_ + to[b]];
  }
  finalize(m);
  return m;
}

NullStats null_model(std::span<const ArchetypeSequence> seqs, std::size_t k,
                     const NullModelOptions& options) {
  if (options.n_shuffles < 2) throw Error(ErrorCode::kInvalidValue, "null model needs at least 2 shuffles");
  const LabelPanel panel(seqs, k);
  const std::size_t n = options.n_shuffles;
  std::vector<std::vector<double>> replica_probs(n);

  std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < n; r = next.fetch_add(1)) {
      Rng rng = make_stream(options.seed, r);
      const auto labels = panel.shuffled(rng);
      replica_probs[r] = panel.transitions(labels).prob;
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  NullStats stats;
  stats.k = k;
  stats.n_shuffles = n;
  stats.seed = options.seed;
  stats.mean.assign(k * k, kNaN);
  stats.stddev.assign(k * k, kNaN);
  stats.samples.assign(k * k, {});
  // Reduce in replica order so the result does not depend on thread scheduling.
  for (const auto& probs : replica_probs) {
    for (std::size_t c = 0; c < k * k; ++c) {
      if (!std::isnan(probs[c])) stats.samples[c].push_back(probs[c]);
    }
  }
  for (std::size_t c = 0; c < k * k; ++c) {
    const auto& s = stats.samples[c];
    if (s.empty()) continue;
    double sum = 0.0;
    for (double x : s) sum += x;
    const double mean = sum / static_cast<double>(s.size());
    stats.mean[c] = mean;
    if (s.size() < 2) continue;
    double ss = 0.0;
    for (double x : s) ss += (x - mean) * (x - mean);
    stats.stddev[c] = std::sqrt(ss / static_cast<double>(s.size() - 1));
  }
  return stats;
}

double upper_tail_p(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

std::size_t TransitionReport::significant_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(),
                                                [](const TransitionCell& c) { return c.significant; }));
}

std::size_t TransitionReport::testable_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(),
                                                [](const TransitionCell& c) { return c.testable; }));
}

nlohmann::json TransitionReport::metadata() const {
  return {{"seed", seed},
          {"n_shuffles", n_shuffles},
          {"alpha", alpha},
          {"test", "one-sided upper tail, normal approximation"},
          {"rng", std::string(kRngAlgorithm)}};
}

TransitionReport significance(const TransitionMatrix& observed, const NullStats& null_stats,
                              double alpha) {
  if (observed.k != null_stats.k) {
    throw Error(ErrorCode::kSchemaMismatch, "observed and null model use different archetype counts");
  }
  const std::size_t k = observed.k;
  TransitionReport report;
  report.k = k;
  report.alpha = alpha;
  report.n_shuffles = null_stats.n_shuffles;
  report.seed = null_stats.seed;
  report.cells.resize(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t c = a * k + b;
      TransitionCell& cell = report.cells[c];
      cell.from = a;
      cell.to = b;
      cell.observed = observed.prob[c];
      cell.null_mean = null_stats.mean[c];
      cell.null_std = null_stats.stddev[c];
      cell.z = kNaN;
      cell.p_normal = kNaN;
      cell.p_empirical = kNaN;
      if (!observed.row_defined(a) || std::isnan(cell.null_mean)) continue;
      const auto& samples = null_stats.samples[c];
      const auto at_least = std::count_if(samples.begin(), samples.end(),
                                          [&](double x) { return x >= cell.observed; });
      cell.p_empirical = static_cast<double>(at_least) / static_cast<double>(samples.size());
      if (std::isnan(cell.null_std) || cell.null_std == 0.0) continue;
      cell.testable = true;
      cell.z = (cell.observed - cell.null_mean) / cell.null_std;
      cell.p_normal = upper_tail_p(cell.z);
      cell.significant = cell.p_normal < alpha && cell.observed > cell.null_mean;
    }
  }
  return report;
}

TransitionReport analyze_transitions(std::span<const ArchetypeSequence> seqs, std::size_t k,
                                     const NullModelOptions& options, double alpha) {
  const auto observed = observed_transitions(seqs, k);
  const auto null_stats = null_model(seqs, k, options);
  return significance(observed, null_stats, alpha);
}

}  // namespace hyperroles
