#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "pamle/pa_sim.hpp"

using namespace pamle;

namespace {

SimConfig make_config(std::int64_t n, double delta, InitialDegreeModel model, std::uint64_t seed,
                      bool history = false) {
  SimConfig cfg;
  cfg.n = n;
  cfg.delta = delta;
  cfg.initial_degrees = std::move(model);
  cfg.seed = seed;
  cfg.record_history = history;
  return cfg;
}

}  // namespace

TEST_CASE("structural identities hold at several sizes") {
  for (std::int64_t n : {2, 100, 200, 5000}) {
    const auto stats =
        simulate(make_config(n, 0.5, InitialDegreeModel::uniform_range(1, 3), 99, n <= 200));
    CHECK_NOTHROW(stats.validate());
    CHECK(stats.n == n);
    std::int64_t vertices = 0;
    std::int64_t twice_edges = 0;
    for (std::size_t k = 0; k < stats.degree_hist.size(); ++k) {
      vertices += stats.degree_hist[k];
      twice_edges += static_cast<std::int64_t>(k) * stats.degree_hist[k];
    }
    CHECK(vertices == n + 1);
    CHECK(twice_edges == 2 * stats.cum_edges.back());
  }
}

TEST_CASE("draw-count identity links history, tails and initial degrees") {
  const auto stats =
      simulate(make_config(200, 0.0, InitialDegreeModel::uniform_range(1, 3), 7, true));
  REQUIRE(stats.history.has_value());
  // Sum over draws of 1{D_{t,i} = k} must equal N_{>k}(n) - R_{>k}(n), every k.
  std::map<int, std::int64_t> draws;
  for (const auto& h : *stats.history) ++draws[h.degree];
  for (int k = 1; k <= stats.max_degree(); ++k) {
    const std::int64_t lhs = draws.count(k) ? draws[k] : 0;
    const std::int64_t rk =
        (static_cast<std::size_t>(k) < stats.r_tail_counts.size()) ? stats.r_tail_counts[static_cast<std::size_t>(k)] : 0;
    CHECK(lhs == stats.tail_counts[static_cast<std::size_t>(k)] - rk);
  }
  // negative attachment parameter exercises the rejection sampler
  const auto stats2 =
      simulate(make_config(200, -0.6, InitialDegreeModel::uniform_range(1, 2), 8, true));
  CHECK_NOTHROW(stats2.validate());
}

TEST_CASE("identical seed and config reproduce the run bit for bit") {
  const auto cfg = make_config(3000, -0.25, InitialDegreeModel::uniform_range(1, 3), 31337, true);
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.degree_hist == b.degree_hist);
  CHECK(a.tail_counts == b.tail_counts);
  CHECK(a.r_tail_counts == b.r_tail_counts);
  CHECK(a.m_seq == b.m_seq);
  CHECK(a.cum_edges == b.cum_edges);
  REQUIRE(a.history.has_value());
  REQUIRE(b.history.has_value());
  REQUIRE(a.history->size() == b.history->size());
  for (std::size_t i = 0; i < a.history->size(); ++i) {
    CHECK((*a.history)[i].t == (*b.history)[i].t);
    CHECK((*a.history)[i].i == (*b.history)[i].i);
    CHECK((*a.history)[i].degree == (*b.history)[i].degree);
  }
  // a different stream gives a different realization
  auto cfg2 = cfg;
  cfg2.stream = 1;
  const auto c = simulate(cfg2);
  CHECK(a.m_seq != c.m_seq);
}

TEST_CASE("single-draw law on the three-vertex state") {
  // V_{t-1} = {v0, v1, v2} with degrees {2, 1, 1}: endpoint list carries
  // v0 twice; the incoming vertex draws with probability (deg + delta)/S.
  const std::vector<std::uint32_t> endpoints{0, 1, 0, 2};
  const std::vector<std::uint32_t> degrees{2, 1, 1};
  const AttachmentState state{endpoints, degrees, 3};

  // two founders of equal degree: by symmetry each is drawn with
  // probability 1/2 whatever the attachment parameter
  const std::vector<std::uint32_t> founders_eps{0, 1};
  const std::vector<std::uint32_t> founders_deg{1, 1};
  const AttachmentState founders{founders_eps, founders_deg, 2};
  for (double delta : {-0.5, 0.0, 3.0}) {
    RngStream rng(808, 1);
    const int draws = 200'000;
    int first = 0;
    for (int i = 0; i < draws; ++i)
      if (sample_target(founders, delta, rng) == 0) ++first;
    const double sigma = std::sqrt(0.25 / draws);
    CHECK(std::fabs(static_cast<double>(first) / draws - 0.5) < 3.0 * sigma);
  }

  struct Case {
    double delta;
    double p0;  // (2+delta)/(3 delta + 4)
  };
  for (const Case c : {Case{0.0, 0.5}, Case{1.0, 3.0 / 7.0}, Case{-0.5, 0.6}}) {
    CAPTURE(c.delta);
    CHECK(state.total_preference(c.delta) == doctest::Approx(3.0 * c.delta + 4.0));
    RngStream rng(2024, 11);
    const int draws = 1'000'000;
    int hits[3] = {0, 0, 0};
    for (int i = 0; i < draws; ++i) ++hits[sample_target(state, c.delta, rng)];
    const double p_other = (1.0 - c.p0) / 2.0;
    const double expected[3] = {c.p0, p_other, p_other};
    for (int v = 0; v < 3; ++v) {
      const double freq = static_cast<double>(hits[v]) / draws;
      const double sigma = std::sqrt(expected[v] * (1.0 - expected[v]) / draws);
      CHECK(std::fabs(freq - expected[v]) < 3.0 * sigma);
    }
  }
}

TEST_CASE("exact outcome law at n = 3 with unit initial degrees") {
  // Two observable classes: the third arrival hits the degree-2 vertex
  // (final degrees 3,1,1,1) or a degree-1 vertex (2,2,1,1), with
  // probabilities (2+d)/(3d+4) and 2(1+d)/(3d+4).
  const double delta = 0.0;
  const int runs = 1'000'000;
  std::int64_t class_a = 0;
  for (int i = 0; i < runs; ++i) {
    auto cfg = make_config(3, delta, InitialDegreeModel::degenerate(1), 555, true);
    cfg.stream = static_cast<std::uint64_t>(i);
    const auto stats = simulate(cfg);
    if ((*stats.history)[1].degree == 2) ++class_a;  // D_{3,1}
  }
  const double p_a = (2.0 + delta) / (3.0 * delta + 4.0);
  const double expect_a = runs * p_a;
  const double expect_b = runs * (1.0 - p_a);
  const double observed_b = static_cast<double>(runs - class_a);
  const double chi2 = (class_a - expect_a) * (class_a - expect_a) / expect_a +
                      (observed_b - expect_b) * (observed_b - expect_b) / expect_b;
  CHECK(chi2 < 10.8276);  // chi-square(1) quantile at p = 0.001
}

TEST_CASE("exact outcome law at n = 4 with unit initial degrees") {
  // Classes keyed by the chosen degrees (D_{3,1}, D_{4,1}); their
  // probabilities follow from multiplying the per-step attachment laws:
  //   (2,3): (2+d)(3+d);  (2,1): 3(2+d)(1+d);
  //   (1,2): 4(1+d)(2+d); (1,1): 4(1+d)^2;   all over S_3 S_4.
  for (const double delta : {-0.5, 1.0}) {
    CAPTURE(delta);
    const double s3 = 3.0 * delta + 4.0;
    const double s4 = 4.0 * delta + 6.0;
    std::map<std::pair<int, int>, double> expected{
        {{2, 3}, (2 + delta) * (3 + delta) / (s3 * s4)},
        {{2, 1}, 3.0 * (2 + delta) * (1 + delta) / (s3 * s4)},
        {{1, 2}, 4.0 * (1 + delta) * (2 + delta) / (s3 * s4)},
        {{1, 1}, 4.0 * (1 + delta) * (1 + delta) / (s3 * s4)},
    };
    double total_p = 0.0;
    for (const auto& [key, p] : expected) total_p += p;
    REQUIRE(total_p == doctest::Approx(1.0).epsilon(1e-12));

    const int runs = 400'000;
    std::map<std::pair<int, int>, std::int64_t> observed;
    for (int i = 0; i < runs; ++i) {
      auto cfg = make_config(4, delta, InitialDegreeModel::degenerate(1), 777, true);
      cfg.stream = static_cast<std::uint64_t>(i);
      const auto stats = simulate(cfg);
      const auto& h = *stats.history;
      ++observed[{h[1].degree, h[2].degree}];
    }
    double chi2 = 0.0;
    std::int64_t seen = 0;
    for (const auto& [key, p] : expected) {
      const double e = runs * p;
      const double o = static_cast<double>(observed.count(key) ? observed[key] : 0);
      seen += static_cast<std::int64_t>(o);
      chi2 += (o - e) * (o - e) / e;
    }
    CHECK(seen == runs);  // no outcome outside the enumerated classes
    CHECK(chi2 < 16.2662);  // chi-square(3) quantile at p = 0.001
  }
}

TEST_CASE("snapshot keeps exactly what the final network shows") {
  const auto stats =
      simulate(make_config(500, 0.0, InitialDegreeModel::uniform_range(1, 3), 12, true));
  const auto snap = snapshot_stats(stats);
  CHECK(snap.snapshot_only);
  CHECK(snap.m_seq.empty());
  CHECK(snap.cum_edges.empty());
  CHECK(snap.r_tail_counts.empty());
  CHECK(!snap.history.has_value());
  CHECK(snap.degree_hist == stats.degree_hist);
  std::int64_t vertices = 0;
  for (auto c : snap.degree_hist) vertices += c;
  CHECK(vertices == snap.n + 1);
  CHECK(snap.edge_count() == stats.cum_edges.back());
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(simulate(make_config(1, 0.0, InitialDegreeModel::degenerate(1), 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate(make_config(10, -1.0, InitialDegreeModel::degenerate(1), 1)),
                  std::domain_error);
  CHECK_THROWS_AS(simulate(make_config(10, -1.5, InitialDegreeModel::degenerate(1), 1)),
                  std::domain_error);
}
