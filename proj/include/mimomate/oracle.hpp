#ifndef MIMOMATE_ORACLE_HPP
#define MIMOMATE_ORACLE_HPP

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "mimomate/matching.hpp"
#include "mimomate/rng.hpp"

namespace mimomate {

/// Probabilities p(i, j) that client j follows client i. A fair assignment
/// has unit row sums and equal column sums; the integral extreme points are
/// the fixed-point-free position assignments.
class AssignmentMatrix {
 public:
  explicit AssignmentMatrix(std::vector<ClientId> clients);

  const std::vector<ClientId>& clients() const { return clients_; }
  double get(ClientId lead, ClientId follower) const;
  void set(ClientId lead, ClientId follower, double p);

  double row_sum(ClientId lead) const;
  double col_sum(ClientId follower) const;

 private:
  std::size_t index_of(ClientId id) const;
  std::vector<ClientId> clients_;
  std::vector<double> cells_;
};

/// 0/1 assignment induced by a pair matching.
AssignmentMatrix assignment_from_matching(const MateSet& mates,
                                          const std::vector<ClientId>& clients);

struct TheoremReport {
  double t_matching = 0.0;       // average throughput of the matcher's output
  double t_best_fair = 0.0;      // best fair probabilistic assignment
  double t_uniform = 0.0;        // uniform random follower selection
  bool matching_at_least_best_fair = false;
  bool matching_at_least_uniform = false;
};

/// Exhaustive pair matcher: enumerates every injective partial follower map
/// over the positive edges and keeps the max-cardinality, then max-weight
/// optimum. Refuses instances beyond 8 clients.
MateSet brute_force_two_mimomate(const WeightMatrix& weights);

/// Combined follower throughput r_v + r_w of an ordered triple (u, v, w),
/// or nullopt when either follower would be undecodable.
using TripleWeightFn =
    std::function<std::optional<double>(ClientId u, ClientId v, ClientId w)>;

struct TripleSolution {
  std::vector<std::array<ClientId, 3>> triples;
  double weight = 0.0;
};

/// Exhaustive 3-position matcher over all families of ordered triples that
/// are disjoint per position; max cardinality first, max weight second.
/// Refuses instances beyond 7 clients.
TripleSolution brute_force_three_mimomate(const std::vector<ClientId>& clients,
                                          const TripleWeightFn& weight);

/// Best average throughput over all fair probabilistic assignments. The
/// optimum of the linear objective sits at an integral extreme point, so the
/// fixed-point-free assignments are enumerated directly. Every off-diagonal
/// weight must be positive; refuses instances beyond 8 clients.
double best_fair_assignment(const WeightMatrix& weights,
                            AssignmentMatrix* argmax = nullptr);

/// Compares the matcher's average throughput against the best fair
/// assignment and against uniform follower selection.
TheoremReport verify_theorems(const WeightMatrix& weights);

/// All-positive random instance on a dyadic grid (multiples of 1/256, up to
/// 54), so matcher and oracle totals are exactly representable and compare
/// without tolerance.
WeightMatrix random_weight_matrix(Rng& rng, int n_clients);

/// Structural check of the matching constraints on a mate set: positive
/// follower weight at every position, distinct members within a tuple,
/// distinct occupants per position across tuples.
bool check_mate_constraints(const MateSet& mates,
                            const std::vector<ClientId>& clients,
                            const std::vector<ChannelVector>& channels,
                            const std::vector<double>& snrs_db,
                            const RateTable& table);

}  // namespace mimomate

#endif  // MIMOMATE_ORACLE_HPP
