#include "pamle/pa_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pamle {

void SimConfig::validate() const {
  if (n < 2) throw std::invalid_argument("simulation needs n >= 2");
  if (n > 1'000'000'000) throw std::invalid_argument("n too large");
  if (!(delta > -1.0)) throw std::domain_error("attachment parameter must be > -1");
}

std::int64_t EvolutionStats::edge_count() const {
  if (!cum_edges.empty()) return cum_edges.back();
  std::int64_t twice = 0;
  for (std::size_t k = 1; k < degree_hist.size(); ++k)
    twice += static_cast<std::int64_t>(k) * degree_hist[k];
  if (twice % 2 != 0) throw std::logic_error("degree histogram violates the handshake identity");
  return twice / 2;
}

void EvolutionStats::validate() const {
  std::int64_t vertices = 0, twice_edges = 0;
  for (std::size_t k = 0; k < degree_hist.size(); ++k) {
    vertices += degree_hist[k];
    twice_edges += static_cast<std::int64_t>(k) * degree_hist[k];
  }
  if (vertices != n + 1) throw std::logic_error("vertex count mismatch");
  if (!degree_hist.empty() && degree_hist[0] != 0) throw std::logic_error("degree-0 vertex present");

  if (tail_counts.size() != degree_hist.size()) throw std::logic_error("tail_counts size mismatch");
  std::int64_t acc = 0;
  for (std::size_t k = degree_hist.size(); k-- > 0;) {
    if (tail_counts[k] != acc) throw std::logic_error("tail_counts inconsistent with histogram");
    acc += degree_hist[k];
  }

  if (!m_seq.empty()) {
    if (static_cast<std::int64_t>(m_seq.size()) != n) throw std::logic_error("m_seq length mismatch");
    if (cum_edges.size() != m_seq.size()) throw std::logic_error("cum_edges length mismatch");
    std::int64_t m_acc = 0;
    int max_m = 0;
    for (std::size_t t = 0; t < m_seq.size(); ++t) {
      if (m_seq[t] < 1) throw std::logic_error("nonpositive initial degree");
      m_acc += m_seq[t];
      max_m = std::max(max_m, m_seq[t]);
      if (cum_edges[t] != m_acc) throw std::logic_error("cum_edges inconsistent with m_seq");
    }
    if (twice_edges != 2 * m_acc) throw std::logic_error("handshake identity violated");

    if (static_cast<int>(r_tail_counts.size()) != max_m + 1)
      throw std::logic_error("r_tail_counts size mismatch");
    for (int k = 0; k <= max_m; ++k) {
      std::int64_t expect = (m_seq[0] > k) ? 2 : 0;
      for (std::int64_t t = 2; t <= n; ++t)
        if (m_seq[static_cast<std::size_t>(t - 1)] > k) ++expect;
      if (r_tail_counts[static_cast<std::size_t>(k)] != expect)
        throw std::logic_error("r_tail_counts inconsistent with m_seq");
    }

    if (history) {
      // Draw-count identity: vertices now of degree > k, minus those that
      // started above k, were each reached by draws of a degree-k vertex.
      std::vector<std::int64_t> draw_hist(degree_hist.size(), 0);
      for (const auto& h : *history) {
        if (h.degree <= 0 || static_cast<std::size_t>(h.degree) >= degree_hist.size())
          throw std::logic_error("history degree out of range");
        ++draw_hist[static_cast<std::size_t>(h.degree)];
      }
      for (std::size_t k = 1; k < degree_hist.size(); ++k) {
        const std::int64_t rk =
            (k < r_tail_counts.size()) ? r_tail_counts[k] : 0;
        if (draw_hist[k] != tail_counts[k] - rk)
          throw std::logic_error("history inconsistent with tail counts");
      }
    }
  } else if (twice_edges % 2 != 0) {
    throw std::logic_error("handshake identity violated");
  }
}

std::uint32_t sample_target(const AttachmentState& state, double delta, RngStream& rng) {
  const std::uint64_t weight = state.endpoints.size();
  if (delta == 0.0) return state.endpoints[rng.next_below(weight)];
  if (delta > 0.0) {
    const double total = state.total_preference(delta);
    if (rng.next_double() * total < static_cast<double>(weight))
      return state.endpoints[rng.next_below(weight)];
    return static_cast<std::uint32_t>(rng.next_below(state.candidate_count));
  }
  // -1 < delta < 0: propose proportional to degree, thin to degree + delta.
  for (;;) {
    const std::uint32_t v = state.endpoints[rng.next_below(weight)];
    const double deg = static_cast<double>(state.degrees[v]);
    if (rng.next_double() * deg < deg + delta) return v;
  }
}

EvolutionStats simulate(const SimConfig& config) {
  return simulate(config, {}, DegreeProbe{});
}

EvolutionStats simulate(const SimConfig& config, std::span<const std::int64_t> checkpoints,
                        const DegreeProbe& probe) {
  config.validate();
  const std::int64_t n = config.n;
  const double delta = config.delta;
  const InitialDegreeModel& model = config.initial_degrees;
  RngStream rng(config.seed, config.stream);

  std::vector<std::uint32_t> degrees;
  degrees.reserve(static_cast<std::size_t>(n) + 1);
  std::vector<std::uint32_t> endpoints;
  endpoints.reserve(static_cast<std::size_t>(2.0 * model.mean() * static_cast<double>(n + 1)) + 64);

  std::vector<std::int32_t> m_seq(static_cast<std::size_t>(n));
  std::vector<std::int64_t> cum_edges(static_cast<std::size_t>(n));
  std::optional<std::vector<HistoryEntry>> history;
  if (config.record_history) history.emplace();

  // time 1: vertices v0, v1 joined by m_1 parallel edges
  const int m1 = model.sample(rng);
  m_seq[0] = m1;
  cum_edges[0] = m1;
  degrees.push_back(static_cast<std::uint32_t>(m1));
  degrees.push_back(static_cast<std::uint32_t>(m1));
  for (int e = 0; e < m1; ++e) {
    endpoints.push_back(0);
    endpoints.push_back(1);
  }

  std::size_t next_cp = 0;
  auto fire_probe = [&](std::int64_t t) {
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t) {
      if (checkpoints[next_cp] == t)
        probe(t, std::span<const std::uint32_t>(degrees.data(), static_cast<std::size_t>(t) + 1));
      ++next_cp;
    }
  };
  if (probe) fire_probe(1);

  std::int64_t total_edges = m1;
  for (std::int64_t t = 2; t <= n; ++t) {
    const int mt = model.sample(rng);
    for (int i = 1; i <= mt; ++i) {
      const AttachmentState state{endpoints, degrees, static_cast<std::uint32_t>(t)};
      const std::uint32_t target = sample_target(state, delta, rng);
      if (history)
        history->push_back({static_cast<std::int32_t>(t), i,
                            static_cast<std::int32_t>(degrees[target])});
      ++degrees[target];
      endpoints.push_back(target);
    }
    degrees.push_back(static_cast<std::uint32_t>(mt));
    for (int e = 0; e < mt; ++e) endpoints.push_back(static_cast<std::uint32_t>(t));
    total_edges += mt;
    m_seq[static_cast<std::size_t>(t - 1)] = mt;
    cum_edges[static_cast<std::size_t>(t - 1)] = total_edges;
    if (probe) fire_probe(t);
  }

  EvolutionStats out;
  out.n = n;
  out.delta = delta;
  out.seed = config.seed;
  out.stream = config.stream;
  out.model = model;
  out.m_seq = std::move(m_seq);
  out.cum_edges = std::move(cum_edges);
  out.history = std::move(history);

  const std::uint32_t max_deg = *std::max_element(degrees.begin(), degrees.end());
  out.degree_hist.assign(static_cast<std::size_t>(max_deg) + 1, 0);
  for (std::uint32_t d : degrees) ++out.degree_hist[d];
  out.tail_counts.assign(out.degree_hist.size(), 0);
  for (std::size_t k = out.degree_hist.size() - 1; k-- > 0;)
    out.tail_counts[k] = out.tail_counts[k + 1] + out.degree_hist[k + 1];

  const int max_m = *std::max_element(out.m_seq.begin(), out.m_seq.end());
  std::vector<std::int64_t> m_hist(static_cast<std::size_t>(max_m) + 1, 0);
  for (std::int32_t m : out.m_seq) ++m_hist[static_cast<std::size_t>(m)];
  ++m_hist[static_cast<std::size_t>(out.m_seq[0])];  // m_1 enters twice (both founders)
  out.r_tail_counts.assign(static_cast<std::size_t>(max_m) + 1, 0);
  for (std::size_t k = out.r_tail_counts.size() - 1; k-- > 0;)
    out.r_tail_counts[k] = out.r_tail_counts[k + 1] + m_hist[k + 1];

  return out;
}

EvolutionStats snapshot_stats(const EvolutionStats& stats) {
  EvolutionStats snap;
  snap.n = stats.n;
  snap.degree_hist = stats.degree_hist;
  snap.tail_counts = stats.tail_counts;
  snap.delta = stats.delta;
  snap.seed = stats.seed;
  snap.stream = stats.stream;
  snap.model = stats.model;
  snap.snapshot_only = true;
  return snap;
}

}  // namespace pamle
