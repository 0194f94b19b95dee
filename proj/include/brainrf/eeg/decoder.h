#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "brainrf/core/types.h"
#include "brainrf/eeg/svm.h"

namespace brainrf::eeg {

enum class DecoderScope { Generalized, Personalized };

std::string_view to_string(DecoderScope scope);

/// Minimum number of a user's own samples before the personalized decoder
/// replaces the generalized one.
inline constexpr std::size_t kPersonalizationThreshold = 100;

struct DecoderConfig {
  double C = 1.0;
  /// RBF width; <= 0 selects 1 / (dim * variance of the standardized features).
  double gamma = 0.0;
  double tolerance = 1e-3;
  /// Cross-validation folds producing the decision values used for Platt
  /// calibration. Fewer than 2 calibrates on in-sample decision values.
  int calibration_folds = 5;
  std::uint64_t seed = 0;
};

/// Grade 1 is irrelevant (0); grades 2-4 are relevant (1).
int binarize_grade(RelevanceGrade grade);

/// Trained brain relevance classifier: per-dimension standardization, RBF
/// kernel max-margin classifier, Platt-calibrated probability output. An
/// instance is immutable after training and safe to share between threads.
class DecoderModel {
 public:
  DecoderModel() = default;

  DecoderScope scope() const noexcept { return scope_; }
  std::size_t trained_sample_count() const noexcept { return trained_samples_; }
  bool trained() const noexcept { return trained_samples_ > 0; }
  std::size_t dimension() const noexcept { return mean_.size(); }
  std::size_t support_vector_count() const noexcept { return coef_.size(); }
  double gamma() const noexcept { return gamma_; }
  const PlattSigmoid& calibration() const noexcept { return platt_; }

  /// Raw margin: sum_i coef_i K(sv_i, x) - rho. Throws StateError when untrained
  /// and InputError on a dimension mismatch.
  double decision_value(std::span<const double> feature) const;

  /// Calibrated probability of the relevant class.
  double predict(std::span<const double> feature) const;

 private:
  friend DecoderModel train_decoder(std::span<const std::vector<double>>, std::span<const int>,
                                    const DecoderConfig&, DecoderScope);

  void check_ready(std::span<const double> feature) const;

  DecoderScope scope_ = DecoderScope::Generalized;
  std::size_t trained_samples_ = 0;
  std::vector<double> mean_;
  std::vector<double> inv_std_;
  std::vector<double> support_;  // standardized support vectors, row-major
  std::vector<double> coef_;     // alpha_i * y_i
  double rho_ = 0.0;
  double gamma_ = 0.0;
  PlattSigmoid platt_;
};

/// Trains a decoder on feature vectors with binary labels (1 = relevant).
/// Deterministic for a fixed config. Throws TrainingError unless both classes
/// are present, InputError on ragged or empty features.
DecoderModel train_decoder(std::span<const std::vector<double>> features, std::span<const int> labels,
                           const DecoderConfig& config = {},
                           DecoderScope scope = DecoderScope::Generalized);

/// Returns the personalized model once the user has contributed at least
/// kPersonalizationThreshold samples, otherwise the generalized one.
const DecoderModel& select_model(const DecoderModel& generalized, const DecoderModel& personalized,
                                 std::size_t personal_sample_count);

}  // namespace brainrf::eeg
