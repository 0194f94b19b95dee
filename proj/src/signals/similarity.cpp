#include "brainrf/signals/similarity.h"

#include <algorithm>
#include <cmath>

#include "brainrf/core/error.h"

namespace brainrf {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("cosine: vectors differ in dimension");
  if (a.empty()) throw InputError("cosine: empty vectors");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) throw InputError("cosine: zero vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double CosineScorer::score(std::span<const double> a, std::span<const double> b) const {
  return (1.0 + cosine_similarity(a, b)) / 2.0;
}

}  // namespace brainrf
