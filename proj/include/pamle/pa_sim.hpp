#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pamle/initial_degree.hpp"
#include "pamle/rng.hpp"

namespace pamle {

struct SimConfig {
  std::int64_t n = 0;  // final time index; the network then has n+1 vertices
  double delta = 0.0;  // > -1
  InitialDegreeModel initial_degrees = InitialDegreeModel::degenerate(1);
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // replicate stream index; (seed, stream) keys the RNG
  bool record_history = false;

  void validate() const;
};

/// One attachment draw: at time t, edge i of the incoming vertex picked a
/// vertex whose degree was `degree` just before the edge was placed.
struct HistoryEntry {
  std::int32_t t = 0;
  std::int32_t i = 0;
  std::int32_t degree = 0;
};

/// Sufficient statistics of a simulated (or observed) network.
///
/// Index conventions: degree_hist[k] = N_k(n) for k = 0..max_degree;
/// tail_counts[k] = N_{>k}(n); r_tail_counts[k] = R_{>k}(n) =
/// 2*1{m_1>k} + sum_{t=2..n} 1{m_t>k}; m_seq[t-1] = m_t and
/// cum_edges[t-1] = M_t for t = 1..n.  Snapshots keep only the degree
/// histogram (and its tails) -- exactly what the final network shows.
struct EvolutionStats {
  std::int64_t n = 0;
  std::vector<std::int64_t> degree_hist;
  std::vector<std::int64_t> tail_counts;
  std::vector<std::int64_t> r_tail_counts;
  std::vector<std::int32_t> m_seq;
  std::vector<std::int64_t> cum_edges;
  std::optional<std::vector<HistoryEntry>> history;

  // provenance echo, carried through serialization
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool snapshot_only = false;
  std::optional<InitialDegreeModel> model;

  std::int64_t vertex_count() const { return n + 1; }
  std::int64_t edge_count() const;
  int max_degree() const { return static_cast<int>(degree_hist.size()) - 1; }
  bool has_history_sums() const { return !m_seq.empty(); }

  /// Checks every structural identity (vertex count, handshake, tail
  /// consistency, the R_{>k} construction, and, when history is present,
  /// the draw-count identity).  Throws std::logic_error on violation.
  void validate() const;
};

/// Drawable state seen by one attachment draw: vertices of V_{t-1} only.
/// `endpoints` holds one entry per unit of degree weight (the incoming
/// vertex's own endpoint of each placed edge is withheld until its step
/// completes), so endpoints.size() = 2 M_{t-1} + (i-1).
struct AttachmentState {
  std::span<const std::uint32_t> endpoints;
  std::span<const std::uint32_t> degrees;
  std::uint32_t candidate_count = 0;  // |V_{t-1}| = t

  double total_preference(double delta) const {
    return static_cast<double>(candidate_count) * delta + static_cast<double>(endpoints.size());
  }
};

/// Draws a vertex of V_{t-1} with probability (degree + delta) / S.
/// delta >= 0 uses an exact two-component mixture; -1 < delta < 0 uses
/// rejection from the degree-proportional proposal.
std::uint32_t sample_target(const AttachmentState& state, double delta, RngStream& rng);

using DegreeProbe = std::function<void(std::int64_t t, std::span<const std::uint32_t> degrees)>;

EvolutionStats simulate(const SimConfig& config);
/// As simulate(), invoking `probe` with the degree array after each time
/// step listed in `checkpoints` (ascending).
EvolutionStats simulate(const SimConfig& config, std::span<const std::int64_t> checkpoints,
                        const DegreeProbe& probe);

/// Projection onto what the final network alone shows: history, edge-count
/// sequence and initial-degree tallies are dropped.
EvolutionStats snapshot_stats(const EvolutionStats& stats);

}  // namespace pamle
