#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace brainrf::eeg {

/// Dense symmetric kernel matrix stored in single precision.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  /// RBF kernel exp(-gamma * |xi - xj|^2) over row-major samples of width `dim`.
  static KernelMatrix rbf(std::span<const double> samples, std::size_t dim, double gamma);

  std::size_t size() const noexcept { return n_; }
  float operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  const float* row(std::size_t i) const { return values_.data() + i * n_; }

 private:
  std::size_t n_ = 0;
  std::vector<float> values_;
};

struct SmoParams {
  double C = 1.0;
  double tolerance = 1e-3;
  std::size_t max_iterations = 10'000'000;
};

/// Dual solution of the C-SVC problem on a subset of the kernel matrix.
struct SmoSolution {
  std::vector<double> alpha;  // one per subset index
  double rho = 0.0;           // decision = sum alpha_i y_i K(x_i, x) - rho
  std::size_t iterations = 0;
  bool converged = false;
};

/// Sequential minimal optimization with second-order working-set selection.
/// `subset` lists kernel rows that take part; `labels` (+1/-1) are parallel to it.
SmoSolution solve_csvc(const KernelMatrix& kernel, std::span<const std::size_t> subset,
                       std::span<const int> labels, const SmoParams& params);

/// Sigmoid P(y=+1 | f) = 1 / (1 + exp(A f + B)).
struct PlattSigmoid {
  double a = 0.0;
  double b = 0.0;

  double probability(double decision_value) const;
};

/// Maximum-likelihood fit of a Platt sigmoid using regularized targets and a
/// Newton method with backtracking line search.
PlattSigmoid fit_platt(std::span<const double> decision_values, std::span<const int> labels);

}  // namespace brainrf::eeg
