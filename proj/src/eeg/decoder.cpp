#include "brainrf/eeg/decoder.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "brainrf/core/error.h"

namespace brainrf::eeg {

std::string_view to_string(DecoderScope scope) {
  return scope == DecoderScope::Generalized ? "generalized" : "personalized";
}

int binarize_grade(RelevanceGrade grade) {
  return grade.is_relevant() ? 1 : 0;
}

void DecoderModel::check_ready(std::span<const double> feature) const {
  if (!trained()) throw StateError("decoder model is not trained");
  if (feature.size() != mean_.size()) {
    throw InputError("feature has dimension " + std::to_string(feature.size()) + ", model expects " +
                     std::to_string(mean_.size()));
  }
}

double DecoderModel::decision_value(std::span<const double> feature) const {
  check_ready(feature);
  const std::size_t dim = mean_.size();
  std::vector<double> z(dim);
  for (std::size_t d = 0; d < dim; ++d) z[d] = (feature[d] - mean_[d]) * inv_std_[d];
  double f = -rho_;
  for (std::size_t s = 0; s < coef_.size(); ++s) {
    const double* sv = support_.data() + s * dim;
    double dist = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = z[d] - sv[d];
      dist += diff * diff;
    }
    f += coef_[s] * std::exp(-gamma_ * dist);
  }
  return f;
}

double DecoderModel::predict(std::span<const double> feature) const {
  return platt_.probability(decision_value(feature));
}

namespace {

// Fold id per sample, shuffled within each class and dealt round-robin.
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] != 0 ? pos : neg).push_back(i);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<int> fold(labels.size(), 0);
  int next = 0;
  for (const auto* group : {&pos, &neg}) {
    for (std::size_t i : *group) {
      fold[i] = next;
      next = (next + 1) % folds;
    }
  }
  return fold;
}

double decision_from(const KernelMatrix& k, std::span<const std::size_t> subset, std::span<const int> ysub,
                     const SmoSolution& sol, std::size_t target) {
  const float* row = k.row(target);
  double f = -sol.rho;
  for (std::size_t s = 0; s < subset.size(); ++s) {
    if (sol.alpha[s] > 0.0) f += sol.alpha[s] * (ysub[s] > 0 ? 1.0 : -1.0) * static_cast<double>(row[subset[s]]);
  }
  return f;
}

}  // namespace

DecoderModel train_decoder(std::span<const std::vector<double>> features, std::span<const int> labels,
                           const DecoderConfig& config, DecoderScope scope) {
  const std::size_t n = features.size();
  if (n == 0) throw InputError("cannot train a decoder on zero samples");
  if (labels.size() != n) throw InputError("features and labels differ in length");
  const std::size_t dim = features[0].size();
  if (dim == 0) throw InputError("features have dimension zero");
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].size() != dim) throw InputError("features have inconsistent dimensions");
    if (labels[i] != 0) ++positives;
  }
  if (positives == 0 || positives == n) {
    throw TrainingError("decoder training needs samples of both classes");
  }
  if (!(config.C > 0.0)) throw ConfigError("decoder C must be positive");

  DecoderModel model;
  model.scope_ = scope;
  model.mean_.assign(dim, 0.0);
  model.inv_std_.assign(dim, 1.0);
  for (const auto& x : features) {
    for (std::size_t d = 0; d < dim; ++d) model.mean_[d] += x[d];
  }
  for (double& m : model.mean_) m /= static_cast<double>(n);
  std::vector<double> var(dim, 0.0);
  for (const auto& x : features) {
    for (std::size_t d = 0; d < dim; ++d) var[d] += (x[d] - model.mean_[d]) * (x[d] - model.mean_[d]);
  }
  for (std::size_t d = 0; d < dim; ++d) {
    const double sd = std::sqrt(var[d] / static_cast<double>(n));
    model.inv_std_[d] = sd > 0.0 ? 1.0 / sd : 1.0;
  }

  std::vector<double> z(n * dim);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double v = (features[i][d] - model.mean_[d]) * model.inv_std_[d];
      z[i * dim + d] = v;
      sum += v;
      sum_sq += v * v;
    }
  }
  if (config.gamma > 0.0) {
    model.gamma_ = config.gamma;
  } else {
    const double count = static_cast<double>(n * dim);
    const double total_var = sum_sq / count - (sum / count) * (sum / count);
    model.gamma_ = total_var > 0.0 ? 1.0 / (static_cast<double>(dim) * total_var) : 1.0 / static_cast<double>(dim);
  }

  const KernelMatrix kernel = KernelMatrix::rbf(z, dim, model.gamma_);
  SmoParams smo;
  smo.C = config.C;
  smo.tolerance = config.tolerance;

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const std::vector<int> ylab(labels.begin(), labels.end());
  const SmoSolution full = solve_csvc(kernel, all, ylab, smo);

  // Out-of-fold decision values for calibration.
  std::vector<double> dec(n, 0.0);
  bool calibrated_out_of_fold = false;
  const std::size_t negatives = n - positives;
  if (config.calibration_folds >= 2 &&
      std::min(positives, negatives) >= static_cast<std::size_t>(config.calibration_folds)) {
    const std::vector<int> fold = stratified_folds(labels, config.calibration_folds, config.seed);
    for (int f = 0; f < config.calibration_folds; ++f) {
      std::vector<std::size_t> train_idx;
      std::vector<int> train_y;
      for (std::size_t i = 0; i < n; ++i) {
        if (fold[i] != f) {
          train_idx.push_back(i);
          train_y.push_back(labels[i]);
        }
      }
      const SmoSolution part = solve_csvc(kernel, train_idx, train_y, smo);
      for (std::size_t i = 0; i < n; ++i) {
        if (fold[i] == f) dec[i] = decision_from(kernel, train_idx, train_y, part, i);
      }
    }
    calibrated_out_of_fold = true;
  }
  if (!calibrated_out_of_fold) {
    for (std::size_t i = 0; i < n; ++i) dec[i] = decision_from(kernel, all, ylab, full, i);
  }
  model.platt_ = fit_platt(dec, labels);

  for (std::size_t i = 0; i < n; ++i) {
    if (full.alpha[i] <= 0.0) continue;
    model.coef_.push_back(full.alpha[i] * (labels[i] != 0 ? 1.0 : -1.0));
    model.support_.insert(model.support_.end(), z.begin() + static_cast<std::ptrdiff_t>(i * dim),
                          z.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
  }
  model.rho_ = full.rho;
  model.trained_samples_ = n;
  return model;
}

const DecoderModel& select_model(const DecoderModel& generalized, const DecoderModel& personalized,
                                 std::size_t personal_sample_count) {
  return personal_sample_count >= kPersonalizationThreshold ? personalized : generalized;
}

}  // namespace brainrf::eeg
