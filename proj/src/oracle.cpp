#include "mimomate/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mimomate {

AssignmentMatrix::AssignmentMatrix(std::vector<ClientId> clients)
    : clients_(std::move(clients)), cells_(clients_.size() * clients_.size(), 0.0) {}

std::size_t AssignmentMatrix::index_of(ClientId id) const {
  for (std::size_t i = 0; i < clients_.size(); ++i) {
    if (clients_[i] == id) return i;
  }
  throw std::invalid_argument("client id not in assignment matrix");
}

double AssignmentMatrix::get(ClientId lead, ClientId follower) const {
  return cells_[index_of(lead) * clients_.size() + index_of(follower)];
}

void AssignmentMatrix::set(ClientId lead, ClientId follower, double p) {
  if (lead == follower) throw std::invalid_argument("no self assignment");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability outside [0, 1]");
  cells_[index_of(lead) * clients_.size() + index_of(follower)] = p;
}

double AssignmentMatrix::row_sum(ClientId lead) const {
  const std::size_t i = index_of(lead);
  double acc = 0.0;
  for (std::size_t j = 0; j < clients_.size(); ++j) acc += cells_[i * clients_.size() + j];
  return acc;
}

double AssignmentMatrix::col_sum(ClientId follower) const {
  const std::size_t j = index_of(follower);
  double acc = 0.0;
  for (std::size_t i = 0; i < clients_.size(); ++i) acc += cells_[i * clients_.size() + j];
  return acc;
}

AssignmentMatrix assignment_from_matching(const MateSet& mates,
                                          const std::vector<ClientId>& clients) {
  AssignmentMatrix p(clients);
  for (const auto& rel : mates.relations) {
    if (rel.size() >= 2) p.set(rel[0], rel[1], 1.0);
  }
  return p;
}

namespace {

struct PairSearch {
  const WeightMatrix& weights;
  const std::vector<ClientId>& ids;
  std::vector<bool> follower_used;
  std::vector<int> current;  // follower index per lead, -1 unmatched
  std::vector<int> best;
  int best_card = -1;
  double best_weight = 0.0;

  PairSearch(const WeightMatrix& w)
      : weights(w),
        ids(w.clients()),
        follower_used(w.size(), false),
        current(w.size(), -1),
        best(w.size(), -1) {}

  void consider(int card, double weight) {
    if (card > best_card || (card == best_card && weight > best_weight)) {
      best_card = card;
      best_weight = weight;
      best = current;
    }
  }

  void rec(std::size_t lead, int card, double weight) {
    const int remaining = static_cast<int>(ids.size() - lead);
    if (card + remaining < best_card) return;
    if (lead == ids.size()) {
      consider(card, weight);
      return;
    }
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (follower_used[j]) continue;
      const auto w = weights.get(ids[lead], ids[j]);
      if (!w) continue;
      follower_used[j] = true;
      current[lead] = static_cast<int>(j);
      rec(lead + 1, card + 1, weight + *w);
      current[lead] = -1;
      follower_used[j] = false;
    }
    rec(lead + 1, card, weight);  // lead stays unmatched
  }
};

}  // namespace

MateSet brute_force_two_mimomate(const WeightMatrix& weights) {
  if (weights.size() > 8) {
    throw std::invalid_argument("brute force pair matcher refuses more than 8 clients");
  }
  PairSearch search(weights);
  search.rec(0, 0, 0.0);
  MateSet mates;
  const auto& ids = weights.clients();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (search.best[i] >= 0) {
      mates.relations.push_back({ids[i], ids[static_cast<std::size_t>(search.best[i])]});
    }
  }
  return mates;
}

TripleSolution brute_force_three_mimomate(const std::vector<ClientId>& clients,
                                          const TripleWeightFn& weight) {
  const std::size_t n = clients.size();
  if (n > 7) {
    throw std::invalid_argument("brute force triple matcher refuses more than 7 clients");
  }
  struct Value {
    int card = 0;
    double weight = 0.0;
    bool better_than(const Value& o) const {
      return card > o.card || (card == o.card && weight > o.weight);
    }
  };
  const std::size_t masks = 1ull << n;
  // The weight callback can be expensive (channel projections), so evaluate
  // every ordered triple once up front.
  std::vector<std::optional<double>> w3(n * n * n);
  auto triple_weight = [&](std::size_t u, std::size_t v, std::size_t w)
      -> const std::optional<double>& { return w3[(u * n + v) * n + w]; };
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w = 0; w < n; ++w) {
        if (u != v && v != w && u != w) {
          w3[(u * n + v) * n + w] = weight(clients[u], clients[v], clients[w]);
        }
      }
    }
  }

  // dp[i][m2][m3]: best completion using leads i..n-1 with the given
  // position-2 and position-3 occupancy.
  std::vector<Value> dp((n + 1) * masks * masks);
  auto at = [&](std::size_t i, std::size_t m2, std::size_t m3) -> Value& {
    return dp[(i * masks + m2) * masks + m3];
  };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t m2 = 0; m2 < masks; ++m2) {
      for (std::size_t m3 = 0; m3 < masks; ++m3) {
        Value best = at(i + 1, m2, m3);  // lead i unmatched
        for (std::size_t v = 0; v < n; ++v) {
          if (v == i || (m2 >> v) & 1) continue;
          for (std::size_t w = 0; w < n; ++w) {
            if (w == i || w == v || (m3 >> w) & 1) continue;
            const auto& tw = triple_weight(i, v, w);
            if (!tw) continue;
            const Value rest = at(i + 1, m2 | (1ull << v), m3 | (1ull << w));
            const Value cand{rest.card + 1, rest.weight + *tw};
            if (cand.better_than(best)) best = cand;
          }
        }
        at(i, m2, m3) = best;
      }
    }
  }

  TripleSolution solution;
  solution.weight = at(0, 0, 0).weight;
  std::size_t m2 = 0, m3 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Value target = at(i, m2, m3);
    if (target.card == at(i + 1, m2, m3).card &&
        target.weight == at(i + 1, m2, m3).weight) {
      continue;
    }
    bool placed = false;
    for (std::size_t v = 0; v < n && !placed; ++v) {
      if (v == i || (m2 >> v) & 1) continue;
      for (std::size_t w = 0; w < n && !placed; ++w) {
        if (w == i || w == v || (m3 >> w) & 1) continue;
        const auto& tw = triple_weight(i, v, w);
        if (!tw) continue;
        const Value rest = at(i + 1, m2 | (1ull << v), m3 | (1ull << w));
        if (rest.card + 1 == target.card && rest.weight + *tw == target.weight) {
          solution.triples.push_back({clients[i], clients[v], clients[w]});
          m2 |= 1ull << v;
          m3 |= 1ull << w;
          placed = true;
        }
      }
    }
    if (!placed) throw std::logic_error("triple reconstruction failed");
  }
  return solution;
}

double best_fair_assignment(const WeightMatrix& weights, AssignmentMatrix* argmax) {
  const std::size_t n = weights.size();
  if (n > 8) {
    throw std::invalid_argument("fair assignment search refuses more than 8 clients");
  }
  if (n < 2) {
    throw std::invalid_argument("fair assignment needs at least 2 clients");
  }
  const auto& ids = weights.clients();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !weights.get(ids[i], ids[j])) {
        throw std::invalid_argument(
            "fair assignment requires positive throughput for every pair");
      }
    }
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  std::vector<std::size_t> best_perm;
  do {
    bool fixed_point = false;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (perm[i] == i) {
        fixed_point = true;
        break;
      }
      acc += *weights.get(ids[i], ids[perm[i]]);
    }
    if (fixed_point) continue;
    if (acc > best) {
      best = acc;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (argmax) {
    AssignmentMatrix p(ids);
    for (std::size_t i = 0; i < n; ++i) p.set(ids[i], ids[best_perm[i]], 1.0);
    *argmax = p;
  }
  return best / static_cast<double>(n);
}

TheoremReport verify_theorems(const WeightMatrix& weights) {
  const std::size_t n = weights.size();
  const auto& ids = weights.clients();
  TheoremReport report;

  const MateSet matching = mwmcm_bipartite(weights, MatchingConfig{});
  report.t_matching = matched_weight(matching, weights) / static_cast<double>(n);
  report.t_best_fair = best_fair_assignment(weights);

  double uniform = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) row += *weights.get(ids[i], ids[j]);
    }
    uniform += row / static_cast<double>(n - 1);
  }
  report.t_uniform = uniform / static_cast<double>(n);

  report.matching_at_least_best_fair = report.t_matching >= report.t_best_fair;
  report.matching_at_least_uniform = report.t_matching >= report.t_uniform;
  return report;
}

WeightMatrix random_weight_matrix(Rng& rng, int n_clients) {
  std::vector<ClientId> ids(n_clients);
  std::iota(ids.begin(), ids.end(), 0);
  WeightMatrix weights(ids);
  for (ClientId u : ids) {
    for (ClientId v : ids) {
      if (u == v) continue;
      const int grid = rng.uniform_int(1, 54 * 256);
      weights.set(u, v, static_cast<double>(grid) / 256.0);
    }
  }
  return weights;
}

bool check_mate_constraints(const MateSet& mates,
                            const std::vector<ClientId>& clients,
                            const std::vector<ChannelVector>& channels,
                            const std::vector<double>& snrs_db,
                            const RateTable& table) {
  auto index_of = [&](ClientId id) -> std::size_t {
    const auto it = std::find(clients.begin(), clients.end(), id);
    if (it == clients.end()) throw std::invalid_argument("unknown client in mate set");
    return static_cast<std::size_t>(std::distance(clients.begin(), it));
  };

  std::size_t max_len = 0;
  for (const auto& rel : mates.relations) max_len = std::max(max_len, rel.size());

  // Constraint 3: no client twice at one position.
  for (std::size_t pos = 0; pos < max_len; ++pos) {
    std::vector<ClientId> seen;
    for (const auto& rel : mates.relations) {
      if (pos >= rel.size()) continue;
      if (std::find(seen.begin(), seen.end(), rel[pos]) != seen.end()) return false;
      seen.push_back(rel[pos]);
    }
  }

  for (const auto& rel : mates.relations) {
    // Constraint 2: members of one tuple are distinct.
    for (std::size_t a = 0; a < rel.size(); ++a) {
      for (std::size_t b = a + 1; b < rel.size(); ++b) {
        if (rel[a] == rel[b]) return false;
      }
    }
    // Constraint 1: every follower decodes with positive throughput.
    std::vector<ChainLink> chain;
    for (std::size_t k = 0; k < rel.size(); ++k) {
      const std::size_t idx = index_of(rel[k]);
      if (k > 0) {
        const auto w = follower_weight(chain, channels[idx], snrs_db[idx], table);
        if (!w || *w <= 0.0) return false;
      }
      chain.push_back({channels[idx], snrs_db[idx]});
    }
  }
  return true;
}

}  // namespace mimomate
