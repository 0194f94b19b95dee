#include "brainrf/adaptive/synthesis.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "brainrf/core/error.h"

namespace brainrf {

namespace {

constexpr int kRejectionBudget = 100'000;
// Below this acceptance probability rejection would need more than a
// thousand attempts on average, so the exact sampler is used directly.
constexpr double kRejectionMinAcceptance = 1e-3;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
}

// tail[i][r]: probability that draws i..n-1 sum to r.
std::vector<std::vector<double>> tail_table(std::span<const double> p, int n) {
  const std::size_t h = p.size();
  std::vector<std::vector<double>> tail(h + 1, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  tail[h][0] = 1.0;
  for (std::size_t i = h; i-- > 0;) {
    for (int r = 0; r <= n; ++r) {
      double v = (1.0 - p[i]) * tail[i + 1][static_cast<std::size_t>(r)];
      if (r > 0) v += p[i] * tail[i + 1][static_cast<std::size_t>(r - 1)];
      tail[i][static_cast<std::size_t>(r)] = v;
    }
  }
  return tail;
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace

void Scenario::validate() const {
  std::unordered_set<std::string> seen(examined.begin(), examined.end());
  if (seen.size() != examined.size()) throw InputError("scenario: duplicate examined document");
  for (const auto& u : unseen) {
    if (seen.count(u)) throw InputError("scenario: document '" + u + "' is both examined and unseen");
  }
  if (n_clicks < 0 || static_cast<std::size_t>(n_clicks) > examined.size()) {
    throw InputError("scenario: click count " + std::to_string(n_clicks) + " outside [0, " +
                     std::to_string(examined.size()) + "]");
  }
}

std::vector<std::string> SynthesisParams::validate() const {
  check_probability(p_click_rel, "p_click_rel");
  check_probability(p_click_irrel, "p_click_irrel");
  if (!(sigma_rel > 0.0) || !(sigma_irrel > 0.0)) throw ConfigError("synthesis sigmas must be positive");
  if (!std::isfinite(mu_rel) || !std::isfinite(mu_irrel)) throw ConfigError("synthesis means must be finite");
  if (n_synth < 1) throw ConfigError("n_synth must be at least 1");
  std::vector<std::string> warnings;
  if (p_click_rel < p_click_irrel) warnings.emplace_back("p_click_rel is below p_click_irrel");
  return warnings;
}

SynthesisParams estimate_synthesis_params(std::span<const LabelledSignal> data, int n_synth) {
  double n[2] = {0, 0}, clicks[2] = {0, 0}, sum[2] = {0, 0}, sum_sq[2] = {0, 0};
  for (const auto& s : data) {
    const int c = s.relevant ? 1 : 0;
    n[c] += 1.0;
    clicks[c] += s.clicked ? 1.0 : 0.0;
    sum[c] += s.brain_score;
    sum_sq[c] += s.brain_score * s.brain_score;
  }
  if (n[0] == 0 || n[1] == 0) throw InputError("estimating synthesis parameters needs both classes");
  auto sd = [&](int c) {
    const double m = sum[c] / n[c];
    const double var = n[c] > 1 ? (sum_sq[c] - n[c] * m * m) / (n[c] - 1.0) : 0.0;
    return std::max(std::sqrt(std::max(var, 0.0)), 1e-6);
  };
  SynthesisParams p;
  p.p_click_rel = clicks[1] / n[1];
  p.p_click_irrel = clicks[0] / n[0];
  p.mu_rel = sum[1] / n[1];
  p.sigma_rel = sd(1);
  p.mu_irrel = sum[0] / n[0];
  p.sigma_irrel = sd(0);
  p.n_synth = n_synth;
  return p;
}

double constrained_sum_probability(std::span<const double> p, int n) {
  if (n < 0 || static_cast<std::size_t>(n) > p.size()) return 0.0;
  return tail_table(p, n)[0][static_cast<std::size_t>(n)];
}

std::vector<int> sample_constrained_bernoulli(std::span<const double> p, int n, std::mt19937_64& rng) {
  const std::size_t h = p.size();
  if (n < 0 || static_cast<std::size_t>(n) > h) throw SynthesisError("click count outside [0, h]");
  for (double v : p) check_probability(v, "click probability");
  const auto tail = tail_table(p, n);
  const double accept = tail[0][static_cast<std::size_t>(n)];
  if (!(accept > 0.0)) {
    throw SynthesisError("no click pattern with " + std::to_string(n) + " clicks has non-zero probability");
  }
  std::vector<int> out(h, 0);
  if (accept >= kRejectionMinAcceptance) {
    for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
      int total = 0;
      for (std::size_t i = 0; i < h; ++i) {
        out[i] = uniform01(rng) < p[i] ? 1 : 0;
        total += out[i];
      }
      if (total == n) return out;
    }
  }
  int remaining = n;
  for (std::size_t i = 0; i < h; ++i) {
    const double here = tail[i][static_cast<std::size_t>(remaining)];
    const double take = remaining > 0 ? p[i] * tail[i + 1][static_cast<std::size_t>(remaining - 1)] : 0.0;
    out[i] = uniform01(rng) * here < take ? 1 : 0;
    remaining -= out[i];
  }
  return out;
}

double sample_clamped_normal(double mu, double sigma, std::mt19937_64& rng) {
  return std::clamp(std::normal_distribution<double>(mu, sigma)(rng), 0.0, 1.0);
}

ScoreVector synth_clicks(const Scenario& scenario, const ClusterAssignment& assignment, int assumed_cluster,
                         const SynthesisParams& params, std::uint64_t seed) {
  scenario.validate();
  params.validate();
  std::vector<double> p;
  for (const auto& id : scenario.examined) {
    p.push_back(assignment.cluster_of(id) == assumed_cluster ? params.p_click_rel : params.p_click_irrel);
  }
  std::mt19937_64 rng(seed);
  const std::vector<int> clicks = sample_constrained_bernoulli(p, scenario.n_clicks, rng);
  ScoreVector out;
  for (std::size_t i = 0; i < clicks.size(); ++i) out.push(scenario.examined[i], clicks[i]);
  return out;
}

ScoreVector synth_brain(const Scenario& scenario, const ClusterAssignment& assignment, int assumed_cluster,
                        const SynthesisParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  ScoreVector out;
  for (const auto& id : scenario.examined) {
    const bool in = assignment.cluster_of(id) == assumed_cluster;
    out.push(id, in ? sample_clamped_normal(params.mu_rel, params.sigma_rel, rng)
                    : sample_clamped_normal(params.mu_irrel, params.sigma_irrel, rng));
  }
  return out;
}

std::vector<int> cluster_ground_truth(std::span<const std::string> unseen, const ClusterAssignment& assignment,
                                      int assumed_cluster) {
  std::vector<int> out;
  out.reserve(unseen.size());
  for (const auto& id : unseen) out.push_back(assignment.cluster_of(id) == assumed_cluster ? 1 : 0);
  return out;
}

}  // namespace brainrf
