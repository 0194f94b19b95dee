#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brainrf/core/types.h"

namespace brainrf {

/// Linear weights of the brain, click and pseudo channels.
struct CombinationWeights {
  double brain = 0.0;
  double click = 0.0;
  double pseudo = 0.0;

  /// Throws ConfigError on negative or non-finite components or an all-zero triple.
  void validate() const;
  std::string to_string() const;

  friend bool operator==(const CombinationWeights&, const CombinationWeights&) = default;
  friend auto operator<=>(const CombinationWeights&, const CombinationWeights&) = default;
};

/// Parses "b,c,p". Throws ConfigError on malformed text or invalid weights.
CombinationWeights parse_weights(const std::string& text);

/// brain * r_bs + click * r_c + pseudo * r_p per document. The result is not
/// renormalized and may exceed 1. Throws InputError when the three vectors do
/// not list the same ids in the same order or carry masked entries.
ScoreVector combine(const ScoreVector& r_bs, const ScoreVector& r_c, const ScoreVector& r_p,
                    const CombinationWeights& theta);

/// Same fusion on plain arrays already aligned by position.
void combine_into(const std::vector<double>& r_bs, const std::vector<double>& r_c,
                  const std::vector<double>& r_p, const CombinationWeights& theta, std::vector<double>& out);

/// Optional per-component overrides applied on top of the mode defaults.
struct WeightOverrides {
  std::optional<double> brain;
  std::optional<double> click;
  std::optional<double> pseudo;
};

/// Iterative (0.6, 0.2, 0.2); retrospective (1.0, 0.4, 0.0).
CombinationWeights default_weights(RfMode mode, const WeightOverrides& overrides = {});

/// Weights that lean on the brain channel when clicks are uninformative:
/// iterative with no clicks gives (1.0, 0.2, 0.2), retrospective with the
/// bad-click flag gives (1.0, 0.2, 0.0); anything else gives `fallback`.
CombinationWeights scenario_weights(RfMode mode, int n_clicks, bool bad_click_flag,
                                    const CombinationWeights& fallback);
CombinationWeights scenario_weights(RfMode mode, int n_clicks, bool bad_click_flag = false);

/// The search grid {0.0, 0.2, ..., 1.0}.
std::vector<double> default_weight_grid();

/// All grid^3 triples except (0,0,0), in lexicographic order of (brain, click, pseudo).
std::vector<CombinationWeights> candidate_triples(const std::vector<double>& grid);

}  // namespace brainrf
