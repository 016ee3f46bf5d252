#include <algorithm>
#include <numeric>

#include <doctest.h>

#include "mimomate/matching.hpp"
#include "mimomate/oracle.hpp"

using namespace mimomate;

namespace {

ChannelVector make(ClientId id, std::vector<Complex> gains) {
  ChannelVector h;
  h.client_id = id;
  h.gains = std::move(gains);
  return h;
}

std::vector<std::pair<ClientId, ClientId>> sorted_pairs(const MateSet& mates) {
  std::vector<std::pair<ClientId, ClientId>> out;
  for (const auto& rel : mates.relations) {
    if (rel.size() >= 2) out.emplace_back(rel[0], rel[1]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("mwmcm_bipartite on tiny instances") {
  SUBCASE("single client has no matching") {
    WeightMatrix w({1});
    CHECK(mwmcm_bipartite(w, MatchingConfig{}).relations.empty());
  }

  SUBCASE("two clients with both edges present") {
    WeightMatrix w({1, 2});
    w.set(1, 2, 3.0);
    w.set(2, 1, 2.0);
    const MateSet m = mwmcm_bipartite(w, MatchingConfig{});
    CHECK(sorted_pairs(m) ==
          std::vector<std::pair<ClientId, ClientId>>{{1, 2}, {2, 1}});
    CHECK(matched_weight(m, w) == 5.0);
  }

  SUBCASE("absent edge caps the cardinality") {
    WeightMatrix w({1, 2});
    w.set(2, 1, 2.0);  // (1,2) stays absent
    const MateSet m = mwmcm_bipartite(w, MatchingConfig{});
    CHECK(sorted_pairs(m) == std::vector<std::pair<ClientId, ClientId>>{{2, 1}});
    CHECK(matched_weight(m, w) == 2.0);
  }
}

TEST_CASE("mwmcm_bipartite matches the exhaustive oracle") {
  Rng rng(404);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + rng.uniform_int(0, 4);
    WeightMatrix w = random_weight_matrix(rng, n);
    // Knock out a random subset of edges to exercise cardinality decisions.
    for (ClientId u = 0; u < n; ++u) {
      for (ClientId v = 0; v < n; ++v) {
        if (u != v && rng.uniform_real(0.0, 1.0) < 0.35) {
          WeightMatrix fresh(w.clients());
          for (ClientId a = 0; a < n; ++a) {
            for (ClientId b = 0; b < n; ++b) {
              if (a == b || (a == u && b == v)) continue;
              if (const auto weight = w.get(a, b)) fresh.set(a, b, *weight);
            }
          }
          w = fresh;
        }
      }
    }
    const MateSet fast = mwmcm_bipartite(w, MatchingConfig{});
    const MateSet brute = brute_force_two_mimomate(w);
    CHECK(fast.relations.size() == brute.relations.size());
    CHECK(matched_weight(fast, w) == matched_weight(brute, w));
  }
}

TEST_CASE("mwmcm_bipartite is invariant to the offset constant") {
  Rng rng(55);
  const WeightMatrix w = random_weight_matrix(rng, 6);
  MatchingConfig small_c, large_c;
  small_c.big_constant_c = 1.0 + w.total_weight();
  large_c.big_constant_c = 9999.0 + 7.0 * w.total_weight();
  const MateSet a = mwmcm_bipartite(w, small_c);
  const MateSet b = mwmcm_bipartite(w, large_c);
  CHECK(sorted_pairs(a) == sorted_pairs(b));
  CHECK_THROWS_AS(
      [&] {
        MatchingConfig bad;
        bad.big_constant_c = 0.5 * w.total_weight();
        mwmcm_bipartite(w, bad);
      }(),
      std::invalid_argument);
}

TEST_CASE("equal-weight optima break ties lexicographically") {
  // Two disjoint optimal matchings with identical weight; the smaller pair
  // list must win: (1,2) beats (1,3) as the first pair.
  WeightMatrix w({1, 2, 3});
  w.set(1, 2, 4.0);
  w.set(2, 3, 4.0);
  w.set(3, 1, 4.0);
  w.set(1, 3, 4.0);
  w.set(3, 2, 4.0);
  w.set(2, 1, 4.0);
  const MateSet m = mwmcm_bipartite(w, MatchingConfig{});
  CHECK(sorted_pairs(m) ==
        std::vector<std::pair<ClientId, ClientId>>{{1, 2}, {2, 3}, {3, 1}});

  // Determinism: identical inputs give identical output.
  const MateSet again = mwmcm_bipartite(w, MatchingConfig{});
  CHECK(sorted_pairs(again) == sorted_pairs(m));
}

TEST_CASE("all-positive instances produce a perfect matching") {
  Rng rng(606);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + rng.uniform_int(0, 4);
    const WeightMatrix w = random_weight_matrix(rng, n);
    const MateSet m = mwmcm_bipartite(w, MatchingConfig{});
    CHECK(m.relations.size() == static_cast<std::size_t>(n));
    std::vector<ClientId> leads, followers;
    for (const auto& rel : m.relations) {
      leads.push_back(rel[0]);
      followers.push_back(rel[1]);
    }
    std::sort(leads.begin(), leads.end());
    std::sort(followers.begin(), followers.end());
    leads.erase(std::unique(leads.begin(), leads.end()), leads.end());
    followers.erase(std::unique(followers.begin(), followers.end()), followers.end());
    CHECK(leads.size() == static_cast<std::size_t>(n));
    CHECK(followers.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("follower_weight") {
  const RateTable table = RateTable::simulation_profile();
  const auto e1 = make(0, {1.0, 0.0, 0.0});
  const auto e2 = make(1, {0.0, 1.0, 0.0});

  // Empty chain: the candidate keeps its standalone rate.
  CHECK(follower_weight({}, e1, 20.0, table) == snr_to_rate(20.0, table));

  // In-span candidate is undecodable.
  const auto combo = make(2, {Complex(1, 2), Complex(3, -1), 0.0});
  CHECK(!follower_weight({{e1, 20.0}, {e2, 20.0}}, combo, 20.0, table).has_value());

  // Known two-chain geometry: candidate orthogonal to the span keeps its SNR.
  const auto e3 = make(3, {0.0, 0.0, 1.0});
  CHECK(follower_weight({{e1, 20.0}, {e2, 20.0}}, e3, 14.0, table) ==
        snr_to_rate(14.0, table));

  CHECK_THROWS_AS(
      follower_weight({{e1, 20.0}, {e2, 20.0}, {e3, 20.0}}, combo, 20.0, table),
      std::invalid_argument);
}

TEST_CASE("two_mimomate composes channels, rates, and the matcher") {
  const RateTable table = RateTable::simulation_profile();
  MatchingConfig config;
  config.n_antennas = 2;

  SUBCASE("orthogonal pair matches both ways at standalone rates") {
    const std::vector<ClientId> ids{0, 1};
    const std::vector<ChannelVector> channels{make(0, {1.0, 0.0}), make(1, {0.0, 1.0})};
    const std::vector<double> snrs{20.0, 16.0};
    const MateSet m = two_mimomate(ids, channels, snrs, table, config);
    CHECK(sorted_pairs(m) ==
          std::vector<std::pair<ClientId, ClientId>>{{0, 1}, {1, 0}});
  }

  SUBCASE("a client undecodable as follower appears only as lead") {
    const std::vector<ClientId> ids{0, 1, 2};
    // Client 2 sits at 5 dB; any projection below ~52 degrees knocks it out.
    // Make it parallel enough to both others to be undecodable as follower.
    const std::vector<ChannelVector> channels{
        make(0, {1.0, 0.0}), make(1, {Complex(0.999, 0), Complex(0.0447, 0)}),
        make(2, {Complex(0.998, 0), Complex(0.0632, 0)})};
    const std::vector<double> snrs{25.0, 25.0, 5.0};
    const MateSet m = two_mimomate(ids, channels, snrs, table, config);
    for (const auto& rel : m.relations) {
      for (std::size_t k = 1; k < rel.size(); ++k) CHECK(rel[k] != 2);
    }
  }

  SUBCASE("random instances agree with the exhaustive oracle") {
    Rng rng(17);
    ClientPlacement p{0, 10.0, 0.0};
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 4;
      std::vector<ClientId> ids(n);
      std::iota(ids.begin(), ids.end(), 0);
      std::vector<ChannelVector> channels;
      std::vector<double> snrs;
      WeightMatrix w(ids);
      for (int c = 0; c < n; ++c) {
        ClientPlacement pc{c, 10.0, rng.uniform_real(6.0, 30.0)};
        snrs.push_back(pc.original_snr_db);
        channels.push_back(sample_channel(rng, pc, 2));
      }
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          if (u == v) continue;
          const auto fw =
              follower_weight({{channels[u], snrs[u]}}, channels[v], snrs[v], table);
          if (fw) w.set(u, v, *fw);
        }
      }
      const MateSet fast = two_mimomate(ids, channels, snrs, table, config);
      const MateSet brute = brute_force_two_mimomate(w);
      CHECK(fast.relations.size() == brute.relations.size());
      CHECK(matched_weight(fast, w) == matched_weight(brute, w));
    }
  }
}

TEST_CASE("n_mimomate") {
  const RateTable table = RateTable::simulation_profile();

  SUBCASE("rejects fewer than two antennas") {
    MatchingConfig config;
    config.n_antennas = 1;
    CHECK_THROWS_AS(n_mimomate({0}, {make(0, {1.0})}, {10.0}, table, config),
                    std::invalid_argument);
  }

  SUBCASE("N = 2 coincides with two_mimomate") {
    Rng rng(23);
    MatchingConfig config;
    config.n_antennas = 2;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 5;
      std::vector<ClientId> ids(n);
      std::iota(ids.begin(), ids.end(), 0);
      std::vector<ChannelVector> channels;
      std::vector<double> snrs;
      for (int c = 0; c < n; ++c) {
        ClientPlacement pc{c, 10.0, rng.uniform_real(6.0, 30.0)};
        snrs.push_back(pc.original_snr_db);
        channels.push_back(sample_channel(rng, pc, 2));
      }
      const MateSet a = n_mimomate(ids, channels, snrs, table, config);
      const MateSet b = two_mimomate(ids, channels, snrs, table, config);
      CHECK(sorted_pairs(a) == sorted_pairs(b));
    }
  }

  SUBCASE("legacy clients only ever lead") {
    Rng rng(29);
    MatchingConfig config;
    config.n_antennas = 3;
    config.legacy_ids = {1, 3};
    const int n = 6;
    std::vector<ClientId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<ChannelVector> channels;
    std::vector<double> snrs;
    for (int c = 0; c < n; ++c) {
      ClientPlacement pc{c, 10.0, rng.uniform_real(20.0, 35.0)};
      snrs.push_back(pc.original_snr_db);
      channels.push_back(sample_channel(rng, pc, 3));
    }
    const MateSet m = n_mimomate(ids, channels, snrs, table, config);
    for (const auto& rel : m.relations) {
      for (std::size_t k = 1; k < rel.size(); ++k) {
        CHECK(rel[k] != 1);
        CHECK(rel[k] != 3);
      }
    }
  }

  SUBCASE("5 clients, N = 3: output is structurally feasible") {
    Rng rng(31);
    MatchingConfig config;
    config.n_antennas = 3;
    for (int trial = 0; trial < 25; ++trial) {
      const int n = 5;
      std::vector<ClientId> ids(n);
      std::iota(ids.begin(), ids.end(), 0);
      std::vector<ChannelVector> channels;
      std::vector<double> snrs;
      for (int c = 0; c < n; ++c) {
        ClientPlacement pc{c, 10.0, rng.uniform_real(15.0, 35.0)};
        snrs.push_back(pc.original_snr_db);
        channels.push_back(sample_channel(rng, pc, 3));
      }
      const MateSet m = n_mimomate(ids, channels, snrs, table, config);
      CHECK(check_mate_constraints(m, ids, channels, snrs, table));
    }
  }
}
