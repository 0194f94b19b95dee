#pragma once

#include <span>

namespace brainrf {

/// Relevance-like similarity between two representations, in [0,1].
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double score(std::span<const double> a, std::span<const double> b) const = 0;
};

/// (1 + cos(a, b)) / 2. Symmetric; 1 for identical unit vectors, 0.5 for
/// orthogonal ones, 0 for antipodal ones.
class CosineScorer final : public SimilarityScorer {
 public:
  double score(std::span<const double> a, std::span<const double> b) const override;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace brainrf
