#ifndef MIMOMATE_MATCHING_HPP
#define MIMOMATE_MATCHING_HPP

#include <optional>
#include <set>
#include <vector>

#include "mimomate/channel.hpp"
#include "mimomate/rate.hpp"

namespace mimomate {

/// Follower throughputs on a client set: weight(u, v) is v's rate when it
/// joins u's transmission. Absent entries mean the follower would be
/// undecodable; a positive-throughput constraint keeps them out of any
/// matching. Self-edges are always absent.
class WeightMatrix {
 public:
  explicit WeightMatrix(std::vector<ClientId> clients);

  const std::vector<ClientId>& clients() const { return clients_; }
  std::size_t size() const { return clients_.size(); }

  void set(ClientId lead, ClientId follower, double rate_mbps);
  std::optional<double> get(ClientId lead, ClientId follower) const;

  /// Sum of all present edge weights.
  double total_weight() const;

  std::size_t index_of(ClientId id) const;

 private:
  std::vector<ClientId> clients_;
  std::vector<std::optional<double>> cells_;  // row-major, lead x follower
};

/// Ordered precedence tuples (u1, ..., um): u1 contends, every later member
/// joins right after its predecessors. Within a tuple all clients are
/// distinct, and across tuples no client holds the same position twice.
struct MateSet {
  std::vector<std::vector<ClientId>> relations;

  /// Tuple led by `id`, or nullptr.
  const std::vector<ClientId>* relation_led_by(ClientId id) const;
  /// Total number of members beyond the leads (matched followers).
  std::size_t follower_count() const;
};

struct MatchingConfig {
  std::size_t n_antennas = 2;
  std::set<ClientId> legacy_ids;
  /// Offset added to every present edge so cardinality dominates weight.
  /// Zero or negative means "pick automatically" (1 + sum of all weights).
  double big_constant_c = 0.0;
};

/// Exact bipartite maximum-weighted maximum-cardinality matching over the
/// positive edges of `weights`. Among all optima, returns the one whose
/// (lead, follower) pair list is lexicographically smallest, so identical
/// inputs always produce identical matchings.
MateSet mwmcm_bipartite(const WeightMatrix& weights, const MatchingConfig& config);

/// Rate of `candidate` when it joins after `lead_chain`, or nullopt when the
/// projected SNR is undecodable. The chain must leave at least one antenna
/// dimension free.
std::optional<double> follower_weight(const std::vector<ChainLink>& lead_chain,
                                      const ChannelVector& candidate,
                                      double candidate_snr_db,
                                      const RateTable& table);

/// Pairwise mate matching for a 2-antenna AP: weights are follower rates
/// after projecting orthogonal to the lead, solved by mwmcm_bipartite.
MateSet two_mimomate(const std::vector<ClientId>& clients,
                     const std::vector<ChannelVector>& channels,
                     const std::vector<double>& original_snrs_db,
                     const RateTable& table, const MatchingConfig& config);

/// Layered mate matching for an N-antenna AP: N-1 successive pair matchings,
/// each extending the tuples built so far. Legacy clients may only lead.
MateSet n_mimomate(const std::vector<ClientId>& clients,
                   const std::vector<ChannelVector>& channels,
                   const std::vector<double>& original_snrs_db,
                   const RateTable& table, const MatchingConfig& config);

/// Sum of matched follower weights (the matching objective).
double matched_weight(const MateSet& mates, const WeightMatrix& weights);

}  // namespace mimomate

#endif  // MIMOMATE_MATCHING_HPP
