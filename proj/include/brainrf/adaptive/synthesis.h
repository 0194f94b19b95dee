#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "brainrf/adaptive/clustering.h"
#include "brainrf/core/types.h"

namespace brainrf {

/// A point in a search session: examined documents in order, the documents
/// still to come, and how many of the examined ones were clicked.
struct Scenario {
  std::vector<std::string> examined;
  std::vector<std::string> unseen;
  int n_clicks = 0;

  /// Throws InputError on overlap between the two lists or an out-of-range click count.
  void validate() const;
};

struct SynthesisParams {
  double p_click_rel = 0.35;
  double p_click_irrel = 0.05;
  double mu_rel = 0.65;
  double sigma_rel = 0.15;
  double mu_irrel = 0.35;
  double sigma_irrel = 0.15;
  int n_synth = 20;

  /// Throws ConfigError on probabilities outside [0,1], non-positive sigmas or
  /// n_synth < 1. Returns warnings for suspicious but legal values.
  std::vector<std::string> validate() const;
};

/// Labelled observation used to estimate synthesis parameters.
struct LabelledSignal {
  bool relevant = false;
  bool clicked = false;
  double brain_score = 0.0;
};

/// Per-class click frequency and brain-score mean / standard deviation.
/// Throws InputError unless both classes are present. Sigmas are floored at 1e-6.
SynthesisParams estimate_synthesis_params(std::span<const LabelledSignal> data, int n_synth = 20);

/// Probability that independent Bernoulli(p_i) draws sum to exactly n.
double constrained_sum_probability(std::span<const double> p, int n);

/// Independent Bernoulli(p_i) draws conditioned on summing to n. Uses
/// rejection when the event is reasonably likely and exact sequential
/// conditional draws otherwise. Throws SynthesisError when the event is impossible.
std::vector<int> sample_constrained_bernoulli(std::span<const double> p, int n, std::mt19937_64& rng);

/// Click vector over the examined documents for an assumed intent cluster.
ScoreVector synth_clicks(const Scenario& scenario, const ClusterAssignment& assignment, int assumed_cluster,
                         const SynthesisParams& params, std::uint64_t seed);

/// Brain scores over the examined documents, Normal per class and clamped to [0,1].
ScoreVector synth_brain(const Scenario& scenario, const ClusterAssignment& assignment, int assumed_cluster,
                        const SynthesisParams& params, std::uint64_t seed);

double sample_clamped_normal(double mu, double sigma, std::mt19937_64& rng);

/// 1 for unseen documents inside the assumed cluster, 0 otherwise.
std::vector<int> cluster_ground_truth(std::span<const std::string> unseen, const ClusterAssignment& assignment,
                                      int assumed_cluster);

}  // namespace brainrf
