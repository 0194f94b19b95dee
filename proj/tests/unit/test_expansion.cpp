#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "brainrf/core/error.h"
#include "brainrf/core/types.h"
#include "brainrf/expansion/query_expansion.h"
#include "brainrf/signals/similarity.h"
#include "doctest.h"

using namespace brainrf;

namespace {

Document doc(std::string id, std::vector<double> e) { return {std::move(id), std::move(e), std::nullopt, std::nullopt, std::nullopt}; }

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> z;
  std::vector<double> v(dim);
  for (double& x : v) x = z(rng);
  normalize_in_place(v);
  return v;
}

std::vector<Document> random_docs(std::mt19937_64& rng, std::size_t n, std::size_t dim, const std::string& prefix) {
  std::vector<Document> d;
  for (std::size_t i = 0; i < n; ++i) d.push_back(doc(prefix + std::to_string(i), random_unit(rng, dim)));
  return d;
}

ScoreVector sv(const std::vector<Document>& docs, const std::vector<double>& v) {
  ScoreVector s;
  for (std::size_t i = 0; i < v.size(); ++i) s.push(docs[i].id, v[i]);
  return s;
}

// Direct evaluation of the expansion formula.
std::vector<double> oracle_scores(const std::vector<double>& q, const std::vector<Document>& examined,
                                  const std::vector<double>& combined, const std::vector<Document>& unseen,
                                  std::size_t k, double c) {
  const CosineScorer s;
  std::vector<std::size_t> idx(examined.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return combined[a] > combined[b]; });
  idx.resize(std::min(k, idx.size()));
  double z = 0.0;
  for (std::size_t i : idx) z += std::exp(combined[i]);
  std::vector<double> out;
  for (const auto& u : unseen) {
    double rf = 0.0;
    for (std::size_t i : idx) rf += std::exp(combined[i]) / z * s.score(examined[i].embedding, u.embedding);
    out.push_back(c * rf + (1.0 - c) * s.score(q, u.embedding));
  }
  return out;
}

}  // namespace

TEST_CASE("feedback selection") {
  CHECK(select_feedback(std::vector<double>{0.2, 0.9, 0.5}, 10) == std::vector<std::size_t>{1, 2, 0});
  std::vector<double> twelve(12);
  std::iota(twelve.begin(), twelve.end(), 0.0);
  const auto top = select_feedback(twelve, 10);
  CHECK(top.size() == 10);
  CHECK(top.front() == 11);
  CHECK(top.back() == 2);
  CHECK(select_feedback(std::vector<double>{0.5, 0.7, 0.5, 0.5}, 3) == std::vector<std::size_t>{1, 0, 2});
  CHECK_THROWS_AS(select_feedback(ScoreVector{}, 3), InputError);
}

TEST_CASE("softmax examples") {
  const auto even = softmax_weights(std::vector<double>{0.5, 0.5});
  CHECK(even[0] == doctest::Approx(0.5));
  CHECK(even[1] == doctest::Approx(0.5));
  const auto w = softmax_weights(std::vector<double>{1.0, 0.0});
  CHECK(w[0] == doctest::Approx(std::numbers::e / (std::numbers::e + 1.0)));
  CHECK(w[1] == doctest::Approx(1.0 / (std::numbers::e + 1.0)));
  CHECK(w[0] == doctest::Approx(0.7311).epsilon(1e-4));
  CHECK(softmax_weights(std::vector<double>{3.7}) == std::vector<double>{1.0});
  CHECK_THROWS_AS(softmax_weights(std::vector<double>{}), InputError);
}

TEST_CASE("softmax sums to one and ignores a constant shift") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(1 + rng() % 12), shifted;
    for (double& x : s) x = u(rng);
    const double shift = u(rng) * 10.0;
    for (double x : s) shifted.push_back(x + shift);
    const auto a = softmax_weights(s), b = softmax_weights(shifted);
    CHECK(std::accumulate(a.begin(), a.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
  }
  const auto big = softmax_weights(std::vector<double>{1000.0, 999.0});
  CHECK(std::isfinite(big[0]));
}

TEST_CASE("expansion by direct substitution") {
  // One feedback document whose similarity to the unseen one is 0.64, query similarity 0.5.
  const CosineScorer s;
  const std::vector<double> q{1.0, 0.0, 0.0};
  const double cos_f = 2.0 * 0.64 - 1.0;
  const Document unseen = doc("u", {0.0, 1.0, 0.0});
  const Document fb = doc("f", {0.0, cos_f, std::sqrt(1.0 - cos_f * cos_f)});
  const auto out = expand_and_score(q, std::vector<Document>{fb}, std::vector<double>{1.0}, std::vector<Document>{unseen},
                                    s, ExpansionConfig{10, 0.1});
  CHECK_FALSE(out.fell_back_to_pseudo);
  CHECK(out.scores[0].score == doctest::Approx(0.514));
}

TEST_CASE("expansion matches the brute-force formula") {
  std::mt19937_64 rng(2);
  const CosineScorer s;
  for (int trial = 0; trial < 50; ++trial) {
    const auto q = random_unit(rng, 6);
    const auto examined = random_docs(rng, 1 + rng() % 14, 6, "e");
    const auto unseen = random_docs(rng, 1 + rng() % 8, 6, "u");
    std::vector<double> combined(examined.size());
    std::uniform_real_distribution<double> u(0.0, 1.4);
    for (double& x : combined) x = u(rng);
    const ExpansionConfig cfg{1 + rng() % 10, u(rng) / 1.4};
    const auto got = rerank_unseen(q, examined, sv(examined, combined), unseen, s, cfg).scores.unmasked_scores();
    const auto want = oracle_scores(q, examined, combined, unseen, cfg.k, cfg.c);
    for (std::size_t i = 0; i < want.size(); ++i) REQUIRE(got[i] == doctest::Approx(want[i]).epsilon(1e-12));

    // Precomputed geometry agrees with the direct path.
    std::vector<Document> all = examined;
    all.insert(all.end(), unseen.begin(), unseen.end());
    const SessionGeometry g(q, all, examined.size(), s);
    std::vector<double> fast;
    CHECK(g.expansion_scores(examined.size(), combined, cfg, fast));
    for (std::size_t i = 0; i < want.size(); ++i) REQUIRE(fast[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("with c = 0 the ranking is the pseudo ranking") {
  std::mt19937_64 rng(3);
  const CosineScorer s;
  for (int trial = 0; trial < 30; ++trial) {
    const auto q = random_unit(rng, 5);
    const auto examined = random_docs(rng, 4, 5, "e"), unseen = random_docs(rng, 9, 5, "u");
    const auto out = rerank_unseen(q, examined, sv(examined, {0.9, 0.1, 0.5, 0.3}), unseen, s, {10, 0.0});
    ScoreVector pseudo;
    for (const auto& d : unseen) pseudo.push(d.id, s.score(q, d.embedding));
    CHECK(RankedList::from_scores(out.scores).ids() == RankedList::from_scores(pseudo).ids());
  }
}

TEST_CASE("a feedback twin ranks first when c = 1") {
  const CosineScorer s;
  const std::vector<double> q{1.0, 0.0, 0.0};
  const std::vector<Document> examined{doc("e", {0.0, 0.0, 1.0})};
  const std::vector<Document> unseen{doc("a", {1.0, 0.0, 0.0}), doc("b", {0.0, 1.0, 0.0}), doc("twin", {0.0, 0.0, 1.0})};
  const auto out = rerank_unseen(q, examined, sv(examined, {0.4}), unseen, s, {10, 1.0});
  CHECK(RankedList::from_scores(out.scores).ids().front() == "twin");
}

TEST_CASE("raising one feedback score helps its nearest unseen documents") {
  std::mt19937_64 rng(4);
  const CosineScorer s;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = random_unit(rng, 4);
    const auto examined = random_docs(rng, 2 + rng() % 5, 4, "e"), unseen = random_docs(rng, 6, 4, "u");
    std::vector<double> combined(examined.size());
    for (double& x : combined) x = u(rng);
    const std::size_t j = rng() % examined.size();
    const auto before = rerank_unseen(q, examined, sv(examined, combined), unseen, s, {10, 0.5}).scores;
    combined[j] += 0.3;
    const auto after = rerank_unseen(q, examined, sv(examined, combined), unseen, s, {10, 0.5}).scores;
    for (std::size_t i = 0; i < unseen.size(); ++i) {
      bool nearest = true;
      for (std::size_t l = 0; l < examined.size(); ++l) {
        if (s.score(examined[l].embedding, unseen[i].embedding) > s.score(examined[j].embedding, unseen[i].embedding))
          nearest = false;
      }
      if (nearest) CHECK(after[i].score >= before[i].score - 1e-12);
    }
  }
}

TEST_CASE("unseen order does not change any document's score") {
  std::mt19937_64 rng(5);
  const CosineScorer s;
  const auto q = random_unit(rng, 5);
  const auto examined = random_docs(rng, 5, 5, "e");
  auto unseen = random_docs(rng, 8, 5, "u");
  const std::vector<double> combined{0.3, 0.8, 0.1, 0.5, 0.6};
  const auto a = rerank_unseen(q, examined, sv(examined, combined), unseen, s, {});
  std::reverse(unseen.begin(), unseen.end());
  const auto b = rerank_unseen(q, examined, sv(examined, combined), unseen, s, {});
  for (std::size_t i = 0; i < unseen.size(); ++i) CHECK(a.scores[i].score == b.scores[unseen.size() - 1 - i].score);
}

TEST_CASE("empty feedback falls back to the query score") {
  const CosineScorer s;
  const std::vector<double> q{1.0, 0.0};
  const std::vector<Document> unseen{doc("u", {0.0, 1.0})};
  const auto out = expand_and_score(q, std::vector<Document>{}, std::vector<double>{}, unseen, s, {});
  CHECK(out.fell_back_to_pseudo);
  CHECK(out.scores[0].score == doctest::Approx(0.5));
  const auto none = expand_and_score(q, std::vector<Document>{}, std::vector<double>{}, std::vector<Document>{}, s, {});
  CHECK(none.scores.empty());
}

TEST_CASE("expansion config validation") {
  CHECK_THROWS_AS((ExpansionConfig{0, 0.1}.validate()), ConfigError);
  CHECK_THROWS_AS((ExpansionConfig{10, 1.5}.validate()), ConfigError);
  CHECK_THROWS_AS((ExpansionConfig{10, -0.1}.validate()), ConfigError);
  CHECK_NOTHROW((ExpansionConfig{1, 1.0}.validate()));
}
