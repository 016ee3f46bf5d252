#include "mimomate/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mimomate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Maximum-weight perfect assignment on a dense square score matrix,
/// shortest-augmenting-path (Jonker-Volgenant) in O(n^3). Potentials stay
/// sums and differences of the inputs, so exactly representable scores stay
/// exact throughout. Returns the optimal total; if `col_of_row` is given it
/// receives the matched column per row.
double solve_assignment(const std::vector<std::vector<double>>& score,
                        std::vector<int>* col_of_row) {
  const int n = static_cast<int>(score.size());
  if (n == 0) {
    if (col_of_row) col_of_row->clear();
    return 0.0;
  }
  // Minimize negated scores with 1-based potentials.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -score[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  if (col_of_row) col_of_row->assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] == 0) continue;
    total += score[p[j] - 1][j - 1];
    if (col_of_row) (*col_of_row)[p[j] - 1] = j - 1;
  }
  return total;
}

/// Optimal assignment total over the submatrix that excludes the flagged
/// rows and columns. The excluded sets always have equal size, so the
/// remainder stays square.
double solve_assignment_excluding(const std::vector<std::vector<double>>& score,
                                  const std::vector<bool>& row_out,
                                  const std::vector<bool>& col_out) {
  const int n = static_cast<int>(score.size());
  std::vector<int> rows, cols;
  for (int i = 0; i < n; ++i) {
    if (!row_out[i]) rows.push_back(i);
  }
  for (int j = 0; j < n; ++j) {
    if (!col_out[j]) cols.push_back(j);
  }
  std::vector<std::vector<double>> sub(rows.size(),
                                       std::vector<double>(cols.size(), 0.0));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      sub[a][b] = score[rows[a]][cols[b]];
    }
  }
  return solve_assignment(sub, nullptr);
}

}  // namespace

WeightMatrix::WeightMatrix(std::vector<ClientId> clients)
    : clients_(std::move(clients)), cells_(clients_.size() * clients_.size()) {}

std::size_t WeightMatrix::index_of(ClientId id) const {
  for (std::size_t i = 0; i < clients_.size(); ++i) {
    if (clients_[i] == id) return i;
  }
  throw std::invalid_argument("client id not in weight matrix");
}

void WeightMatrix::set(ClientId lead, ClientId follower, double rate_mbps) {
  if (lead == follower) {
    throw std::invalid_argument("self edges are not allowed");
  }
  if (rate_mbps <= 0.0) {
    throw std::invalid_argument("edge weights must be positive; omit the edge instead");
  }
  cells_[index_of(lead) * size() + index_of(follower)] = rate_mbps;
}

std::optional<double> WeightMatrix::get(ClientId lead, ClientId follower) const {
  if (lead == follower) return std::nullopt;
  return cells_[index_of(lead) * size() + index_of(follower)];
}

double WeightMatrix::total_weight() const {
  double acc = 0.0;
  for (const auto& c : cells_) {
    if (c) acc += *c;
  }
  return acc;
}

const std::vector<ClientId>* MateSet::relation_led_by(ClientId id) const {
  for (const auto& rel : relations) {
    if (!rel.empty() && rel.front() == id) return &rel;
  }
  return nullptr;
}

std::size_t MateSet::follower_count() const {
  std::size_t acc = 0;
  for (const auto& rel : relations) {
    if (rel.size() > 1) acc += rel.size() - 1;
  }
  return acc;
}

MateSet mwmcm_bipartite(const WeightMatrix& weights, const MatchingConfig& config) {
  const int n = static_cast<int>(weights.size());
  MateSet result;
  if (n < 2) return result;

  double c = config.big_constant_c;
  if (c <= 0.0) c = 1.0 + weights.total_weight();
  if (c <= weights.total_weight()) {
    throw std::invalid_argument("offset constant must exceed the total edge weight");
  }

  // Present edges score weight + C, absent edges score 0, so a perfect
  // assignment maximizes the number of present edges first and their total
  // weight second. Zero-scored matches are dropped afterwards.
  const auto& ids = weights.clients();
  std::vector<std::vector<double>> score(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (const auto w = weights.get(ids[i], ids[j])) score[i][j] = *w + c;
    }
  }

  const double opt_total = solve_assignment(score, nullptr);

  // Lexicographic refinement: walk (lead, follower) pairs in id order and
  // keep each pair that still allows the optimal total. This selects the
  // unique lexicographically-smallest optimum independent of solver
  // internals.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return ids[a] < ids[b]; });

  std::vector<bool> lead_used(n, false), follower_used(n, false);
  double forced_score = 0.0;
  std::vector<std::pair<ClientId, ClientId>> pairs;
  for (int oi : order) {
    for (int oj : order) {
      if (follower_used[oj] || score[oi][oj] == 0.0) continue;
      lead_used[oi] = true;
      follower_used[oj] = true;
      const double rest = solve_assignment_excluding(score, lead_used, follower_used);
      if (forced_score + score[oi][oj] + rest == opt_total) {
        forced_score += score[oi][oj];
        pairs.emplace_back(ids[oi], ids[oj]);
        break;
      }
      lead_used[oi] = false;
      follower_used[oj] = false;
    }
  }

  for (const auto& [lead, follower] : pairs) {
    result.relations.push_back({lead, follower});
  }
  return result;
}

std::optional<double> follower_weight(const std::vector<ChainLink>& lead_chain,
                                      const ChannelVector& candidate,
                                      double candidate_snr_db,
                                      const RateTable& table) {
  if (!lead_chain.empty() &&
      lead_chain.size() >= lead_chain.front().channel.antennas()) {
    throw std::invalid_argument(
        "degrees of freedom exceeded: no free position after chain");
  }
  std::vector<ChannelVector> ongoing;
  ongoing.reserve(lead_chain.size());
  for (const ChainLink& link : lead_chain) ongoing.push_back(link.channel);
  const double theta = subspace_angle(candidate, ongoing);
  return snr_to_rate(projected_snr(candidate_snr_db, theta), table);
}

namespace {

/// One layer of the iterative matching: weight(u, v) is v's rate when it
/// joins u's current chain; edges are absent for legacy followers, chain
/// members, and undecodable projections.
WeightMatrix layer_weights(const std::vector<ClientId>& clients,
                           const std::vector<ChannelVector>& channels,
                           const std::vector<double>& snrs,
                           const RateTable& table,
                           const std::set<ClientId>& legacy_ids,
                           const std::vector<std::vector<ChainLink>>& chain_of,
                           const std::vector<bool>& is_layer_lead) {
  WeightMatrix weights(clients);
  for (std::size_t i = 0; i < clients.size(); ++i) {
    if (!is_layer_lead[i]) continue;  // no predecessor chain: all edges 0
    for (std::size_t j = 0; j < clients.size(); ++j) {
      if (i == j || legacy_ids.count(clients[j]) > 0) continue;
      const auto& chain = chain_of[i];
      bool in_chain = false;
      for (const ChainLink& link : chain) {
        if (link.channel.client_id == clients[j]) in_chain = true;
      }
      if (in_chain) continue;
      const auto w = follower_weight(chain, channels[j], snrs[j], table);
      if (w) weights.set(clients[i], clients[j], *w);
    }
  }
  return weights;
}

}  // namespace

MateSet n_mimomate(const std::vector<ClientId>& clients,
                   const std::vector<ChannelVector>& channels,
                   const std::vector<double>& original_snrs_db,
                   const RateTable& table, const MatchingConfig& config) {
  if (config.n_antennas < 2) {
    throw std::invalid_argument("invalid configuration: matching needs >= 2 antennas");
  }
  if (clients.size() != channels.size() || clients.size() != original_snrs_db.size()) {
    throw std::invalid_argument("clients, channels and SNR lists must align");
  }

  const std::size_t n = clients.size();
  MateSet mates;
  if (n == 0) return mates;
  // Channel dimension bounds the usable positions regardless of the
  // configured antenna count.
  const std::size_t depth = std::min(config.n_antennas, channels.front().antennas());

  // chain_of[i]: the chain client i currently terminates, when it holds the
  // deepest position of some relation (every client trivially heads its own
  // 1-chain for the first layer).
  std::vector<std::vector<ChainLink>> chain_of(n);
  std::vector<bool> is_layer_lead(n, true);
  std::vector<int> relation_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    chain_of[i] = {{channels[i], original_snrs_db[i]}};
  }

  for (std::size_t layer = 1; layer < depth; ++layer) {
    const WeightMatrix weights = layer_weights(clients, channels, original_snrs_db,
                                               table, config.legacy_ids, chain_of,
                                               is_layer_lead);
    const MateSet step = mwmcm_bipartite(weights, config);
    if (step.relations.empty()) break;

    std::vector<std::vector<ChainLink>> next_chain(n);
    std::vector<bool> next_lead(n, false);
    std::vector<int> next_relation(n, -1);
    for (const auto& pair : step.relations) {
      const std::size_t ui = std::distance(
          clients.begin(), std::find(clients.begin(), clients.end(), pair[0]));
      const std::size_t vi = std::distance(
          clients.begin(), std::find(clients.begin(), clients.end(), pair[1]));
      int rel;
      if (layer == 1) {
        rel = static_cast<int>(mates.relations.size());
        mates.relations.push_back({pair[0], pair[1]});
      } else {
        rel = relation_of[ui];
        mates.relations[rel].push_back(pair[1]);
      }
      next_chain[vi] = chain_of[ui];
      next_chain[vi].push_back({channels[vi], original_snrs_db[vi]});
      next_lead[vi] = true;
      next_relation[vi] = rel;
    }
    chain_of = std::move(next_chain);
    is_layer_lead = std::move(next_lead);
    relation_of = std::move(next_relation);
  }
  return mates;
}

MateSet two_mimomate(const std::vector<ClientId>& clients,
                     const std::vector<ChannelVector>& channels,
                     const std::vector<double>& original_snrs_db,
                     const RateTable& table, const MatchingConfig& config) {
  MatchingConfig pair_config = config;
  pair_config.n_antennas = 2;
  return n_mimomate(clients, channels, original_snrs_db, table, pair_config);
}

double matched_weight(const MateSet& mates, const WeightMatrix& weights) {
  double acc = 0.0;
  for (const auto& rel : mates.relations) {
    if (rel.size() < 2) continue;
    if (const auto w = weights.get(rel[0], rel[1])) acc += *w;
  }
  return acc;
}

}  // namespace mimomate
