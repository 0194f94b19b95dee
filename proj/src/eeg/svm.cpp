#include "brainrf/eeg/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brainrf/core/error.h"

namespace brainrf::eeg {

KernelMatrix KernelMatrix::rbf(std::span<const double> samples, std::size_t dim, double gamma) {
  if (dim == 0 || samples.size() % dim != 0) throw InputError("kernel: sample buffer does not match dimension");
  KernelMatrix k;
  k.n_ = samples.size() / dim;
  k.values_.assign(k.n_ * k.n_, 0.0f);
  std::vector<double> sq(k.n_, 0.0);
  for (std::size_t i = 0; i < k.n_; ++i) {
    const double* xi = samples.data() + i * dim;
    for (std::size_t d = 0; d < dim; ++d) sq[i] += xi[d] * xi[d];
  }
  for (std::size_t i = 0; i < k.n_; ++i) {
    const double* xi = samples.data() + i * dim;
    k.values_[i * k.n_ + i] = 1.0f;
    for (std::size_t j = i + 1; j < k.n_; ++j) {
      const double* xj = samples.data() + j * dim;
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += xi[d] * xj[d];
      const double dist = std::max(0.0, sq[i] + sq[j] - 2.0 * dot);
      const auto v = static_cast<float>(std::exp(-gamma * dist));
      k.values_[i * k.n_ + j] = v;
      k.values_[j * k.n_ + i] = v;
    }
  }
  return k;
}

SmoSolution solve_csvc(const KernelMatrix& kernel, std::span<const std::size_t> subset,
                       std::span<const int> labels, const SmoParams& params) {
  const std::size_t n = subset.size();
  if (labels.size() != n) throw InputError("smo: labels and subset differ in length");
  constexpr double kTau = 1e-12;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double C = params.C;

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] > 0 ? 1.0 : -1.0;

  // Q_ij = y_i y_j K_ij, rows gathered lazily per working-set pick.
  std::vector<double> qi(n), qj(n);
  auto load_row = [&](std::size_t i, std::vector<double>& out) {
    const float* krow = kernel.row(subset[i]);
    for (std::size_t t = 0; t < n; ++t) out[t] = y[i] * y[t] * static_cast<double>(krow[subset[t]]);
  };
  auto diag = [&](std::size_t i) { return static_cast<double>(kernel(subset[i], subset[i])); };

  SmoSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double>& alpha = sol.alpha;
  std::vector<double> grad(n, -1.0);

  auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  while (sol.iterations < params.max_iterations) {
    double gmax = -kInf;
    std::ptrdiff_t gmax_idx = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          gmax_idx = static_cast<std::ptrdiff_t>(t);
        }
      } else if (!lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        gmax_idx = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (gmax_idx < 0) {
      sol.converged = true;
      break;
    }
    const auto i = static_cast<std::size_t>(gmax_idx);
    load_row(i, qi);

    double gmax2 = -kInf;
    double obj_min = kInf;
    std::ptrdiff_t gmin_idx = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!lower(t)) {
          const double grad_diff = gmax + grad[t];
          gmax2 = std::max(gmax2, grad[t]);
          if (grad_diff > 0) {
            const double quad = diag(i) + diag(t) - 2.0 * y[i] * qi[t];
            const double obj = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
            if (obj <= obj_min) {
              gmin_idx = static_cast<std::ptrdiff_t>(t);
              obj_min = obj;
            }
          }
        }
      } else if (!upper(t)) {
        const double grad_diff = gmax - grad[t];
        gmax2 = std::max(gmax2, -grad[t]);
        if (grad_diff > 0) {
          const double quad = diag(i) + diag(t) + 2.0 * y[i] * qi[t];
          const double obj = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
          if (obj <= obj_min) {
            gmin_idx = static_cast<std::ptrdiff_t>(t);
            obj_min = obj;
          }
        }
      }
    }
    if (gmax + gmax2 < params.tolerance || gmin_idx < 0) {
      sol.converged = true;
      break;
    }
    const auto j = static_cast<std::size_t>(gmin_idx);
    load_row(j, qj);
    ++sol.iterations;

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = diag(i) + diag(j) + 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = diag(i) + diag(j) - 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * dai + qj[t] * daj;
  }

  // Bias from free support vectors, else the midpoint of the feasible interval.
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  sol.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  return sol;
}

double PlattSigmoid::probability(double f) const {
  const double fab = f * a + b;
  if (fab >= 0) return std::exp(-fab) / (1.0 + std::exp(-fab));
  return 1.0 / (1.0 + std::exp(fab));
}

PlattSigmoid fit_platt(std::span<const double> dec, std::span<const int> labels) {
  if (dec.size() != labels.size()) throw InputError("platt: decision values and labels differ in length");
  const std::size_t n = dec.size();
  double prior1 = 0, prior0 = 0;
  for (int l : labels) (l > 0 ? prior1 : prior0) += 1.0;

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-5;
  const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo_target = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = labels[i] > 0 ? hi_target : lo_target;

  auto objective = [&](double A, double B) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fab = dec[i] * A + B;
      if (fab >= 0) f += t[i] * fab + std::log1p(std::exp(-fab));
      else f += (t[i] - 1.0) * fab + std::log1p(std::exp(fab));
    }
    return f;
  };

  double A = 0.0;
  double B = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = objective(A, B);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double fab = dec[i] * A + B;
      double p, q;
      if (fab >= 0) {
        p = std::exp(-fab) / (1.0 + std::exp(-fab));
        q = 1.0 / (1.0 + std::exp(-fab));
      } else {
        p = 1.0 / (1.0 + std::exp(fab));
        q = std::exp(fab) / (1.0 + std::exp(fab));
      }
      const double d2 = p * q;
      h11 += dec[i] * dec[i] * d2;
      h22 += d2;
      h21 += dec[i] * d2;
      const double d1 = t[i] - p;
      g1 += dec[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    while (step >= kMinStep) {
      const double nA = A + step * dA;
      const double nB = B + step * dB;
      const double nf = objective(nA, nB);
      if (nf < fval + 1e-4 * step * gd) {
        A = nA;
        B = nB;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return {A, B};
}

}  // namespace brainrf::eeg
