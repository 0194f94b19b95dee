#include "brainrf/combiner/combiner.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "brainrf/core/error.h"

namespace brainrf {

void CombinationWeights::validate() const {
  for (double w : {brain, click, pseudo}) {
    if (!std::isfinite(w) || w < 0.0) throw ConfigError("combination weights must be finite and >= 0");
  }
  if (brain == 0.0 && click == 0.0 && pseudo == 0.0) {
    throw ConfigError("combination weights must not all be zero");
  }
}

std::string CombinationWeights::to_string() const {
  std::ostringstream os;
  os << brain << ',' << click << ',' << pseudo;
  return os.str();
}

CombinationWeights parse_weights(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("cannot parse weight '" + item + "' in '" + text + "'");
    }
  }
  if (parts.size() != 3) throw ConfigError("weights need three comma-separated values, got '" + text + "'");
  CombinationWeights w{parts[0], parts[1], parts[2]};
  w.validate();
  return w;
}

ScoreVector combine(const ScoreVector& r_bs, const ScoreVector& r_c, const ScoreVector& r_p,
                    const CombinationWeights& theta) {
  theta.validate();
  const std::size_t n = r_bs.size();
  if (r_c.size() != n || r_p.size() != n) throw InputError("combine: score vectors differ in length");
  ScoreVector out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = r_bs[i];
    const auto& c = r_c[i];
    const auto& p = r_p[i];
    if (b.doc_id != c.doc_id || b.doc_id != p.doc_id) {
      throw InputError("combine: document mismatch at position " + std::to_string(i) + " ('" + b.doc_id +
                       "', '" + c.doc_id + "', '" + p.doc_id + "')");
    }
    if (b.masked || c.masked || p.masked) throw InputError("combine: masked entry for '" + b.doc_id + "'");
    out.push(b.doc_id, theta.brain * b.score + theta.click * c.score + theta.pseudo * p.score);
  }
  return out;
}

void combine_into(const std::vector<double>& r_bs, const std::vector<double>& r_c,
                  const std::vector<double>& r_p, const CombinationWeights& theta, std::vector<double>& out) {
  const std::size_t n = r_bs.size();
  if (r_c.size() != n || r_p.size() != n) throw InputError("combine: score arrays differ in length");
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = theta.brain * r_bs[i] + theta.click * r_c[i] + theta.pseudo * r_p[i];
}

CombinationWeights default_weights(RfMode mode, const WeightOverrides& overrides) {
  CombinationWeights w = mode == RfMode::Iterative ? CombinationWeights{0.6, 0.2, 0.2}
                                                   : CombinationWeights{1.0, 0.4, 0.0};
  if (overrides.brain) w.brain = *overrides.brain;
  if (overrides.click) w.click = *overrides.click;
  if (overrides.pseudo) w.pseudo = *overrides.pseudo;
  w.validate();
  return w;
}

CombinationWeights scenario_weights(RfMode mode, int n_clicks, bool bad_click_flag,
                                    const CombinationWeights& fallback) {
  if (mode == RfMode::Iterative && n_clicks == 0) return {1.0, 0.2, 0.2};
  if (mode == RfMode::Retrospective && bad_click_flag) return {1.0, 0.2, 0.0};
  return fallback;
}

CombinationWeights scenario_weights(RfMode mode, int n_clicks, bool bad_click_flag) {
  return scenario_weights(mode, n_clicks, bad_click_flag, default_weights(mode));
}

std::vector<double> default_weight_grid() { return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}; }

std::vector<CombinationWeights> candidate_triples(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("weight grid is empty");
  std::vector<double> g = grid;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  for (double v : g) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("weight grid values must be finite and >= 0");
  }
  std::vector<CombinationWeights> out;
  for (double b : g)
    for (double c : g)
      for (double p : g)
        if (b != 0.0 || c != 0.0 || p != 0.0) out.push_back({b, c, p});
  if (out.empty()) throw ConfigError("weight grid has no non-zero triple");
  return out;
}

}  // namespace brainrf
