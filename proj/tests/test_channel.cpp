#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "mimomate/channel.hpp"

using namespace mimomate;

namespace {

constexpr double kPi = 3.14159265358979323846;

ChannelVector make(ClientId id, std::vector<Complex> gains) {
  ChannelVector h;
  h.client_id = id;
  h.gains = std::move(gains);
  return h;
}

// Independent projection route for cross-checking subspace_angle: build the
// projector P = A (A^H A)^{-1} A^H from the normal equations and measure the
// residual directly. Shares no code with the Gram-Schmidt implementation.
double oracle_subspace_sin(const ChannelVector& h,
                           const std::vector<ChannelVector>& ongoing) {
  const std::size_t dim = h.gains.size();
  const std::size_t k = ongoing.size();
  if (k == 0) return 1.0;

  // G = A^H A (k x k), b = A^H h.
  std::vector<std::vector<Complex>> g(k, std::vector<Complex>(k));
  std::vector<Complex> b(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex acc = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        acc += std::conj(ongoing[i].gains[d]) * ongoing[j].gains[d];
      }
      g[i][j] = acc;
    }
    Complex acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc += std::conj(ongoing[i].gains[d]) * h.gains[d];
    b[i] = acc;
  }

  // Solve G x = b by Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(g[r][col]) > std::abs(g[pivot][col])) pivot = r;
    }
    std::swap(g[col], g[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < k; ++r) {
      const Complex f = g[r][col] / g[col][col];
      for (std::size_t cc = col; cc < k; ++cc) g[r][cc] -= f * g[col][cc];
      b[r] -= f * b[col];
    }
  }
  std::vector<Complex> x(k);
  for (std::size_t r = k; r-- > 0;) {
    Complex acc = b[r];
    for (std::size_t cc = r + 1; cc < k; ++cc) acc -= g[r][cc] * x[cc];
    x[r] = acc / g[r][r];
  }

  // Residual h - A x.
  double res2 = 0.0, h2 = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    Complex proj = 0.0;
    for (std::size_t i = 0; i < k; ++i) proj += ongoing[i].gains[d] * x[i];
    res2 += std::norm(h.gains[d] - proj);
    h2 += std::norm(h.gains[d]);
  }
  return std::sqrt(res2 / h2);
}

}  // namespace

TEST_CASE("sample_channel shape, determinism, and scaling") {
  ClientPlacement p{7, 50.0, 10.0};

  Rng rng(42);
  const ChannelVector one = sample_channel(rng, p, 1);
  CHECK(one.gains.size() == 1);
  CHECK(one.client_id == 7);

  Rng a(99), b(99);
  const ChannelVector ha = sample_channel(a, p, 3);
  const ChannelVector hb = sample_channel(b, p, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(ha.gains[i] == hb.gains[i]);
  }

  CHECK_THROWS_AS(sample_channel(rng, p, 0), std::invalid_argument);

  // Monte-Carlo check of the scaling law: mean ||h||^2 tracks the original
  // SNR within 0.2 dB over 1e5 draws.
  Rng mc(2024);
  double acc = 0.0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    const ChannelVector h = sample_channel(mc, p, 2);
    const double n = norm(h);
    acc += n * n;
  }
  const double mean_db = linear_to_db(acc / samples);
  CHECK(mean_db == doctest::Approx(10.0).epsilon(0.02));
  CHECK(std::abs(mean_db - 10.0) < 0.2);
}

TEST_CASE("inter_channel_angle on known geometries") {
  const auto e1 = make(0, {1.0, 0.0});
  const auto e2 = make(1, {0.0, 1.0});
  CHECK(inter_channel_angle(e1, e2) == doctest::Approx(kPi / 2));

  const double s = 1.0 / std::sqrt(2.0);
  const auto diag = make(2, {s, s});
  CHECK(inter_channel_angle(e1, diag) == doctest::Approx(kPi / 4));

  // Hermitian inner product of (1, i) and (1, -i) vanishes.
  const auto plus = make(3, {Complex(1, 0), Complex(0, 1)});
  const auto minus = make(4, {Complex(1, 0), Complex(0, -1)});
  CHECK(inter_channel_angle(plus, minus) == doctest::Approx(kPi / 2));

  CHECK_THROWS_AS(inter_channel_angle(make(5, {0.0, 0.0}), e1), std::invalid_argument);
}

TEST_CASE("inter_channel_angle is symmetric and scale invariant") {
  Rng rng(7);
  ClientPlacement p{0, 10.0, 20.0};
  for (int trial = 0; trial < 50; ++trial) {
    const ChannelVector u = sample_channel(rng, p, 3);
    const ChannelVector v = sample_channel(rng, p, 3);
    const double theta = inter_channel_angle(u, v);
    CHECK(theta >= 0.0);
    CHECK(theta <= kPi / 2 + 1e-12);
    CHECK(inter_channel_angle(v, u) == doctest::Approx(theta));

    ChannelVector scaled = v;
    const Complex factor(-0.3, 1.7);
    for (Complex& g : scaled.gains) g *= factor;
    CHECK(inter_channel_angle(u, scaled) == doctest::Approx(theta));
  }
}

TEST_CASE("subspace_angle basics") {
  const auto e1 = make(0, {1.0, 0.0, 0.0});
  const auto e2 = make(1, {0.0, 1.0, 0.0});

  CHECK(subspace_angle(e1, {}) == doctest::Approx(kPi / 2));

  // In-span vector collapses to zero angle.
  ChannelVector combo = make(2, {Complex(2, 1), Complex(-3, 0.5), 0.0});
  CHECK(subspace_angle(combo, {e1, e2}) == 0.0);

  // Against a single vector the subspace angle is the pairwise angle.
  Rng rng(11);
  ClientPlacement p{0, 10.0, 20.0};
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelVector h = sample_channel(rng, p, 3);
    const ChannelVector v = sample_channel(rng, p, 3);
    CHECK(subspace_angle(h, {v}) == doctest::Approx(inter_channel_angle(h, v)));
  }

  CHECK_THROWS_AS(subspace_angle(e1, {make(3, {1.0})}), std::invalid_argument);
}

TEST_CASE("subspace_angle agrees with the normal-equations projector") {
  Rng rng(123);
  ClientPlacement p{0, 10.0, 20.0};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 3 + (trial % 2);
    const ChannelVector h = sample_channel(rng, p, dim);
    std::vector<ChannelVector> ongoing;
    const std::size_t k = 1 + (trial % static_cast<int>(dim - 1));
    for (std::size_t i = 0; i < k; ++i) ongoing.push_back(sample_channel(rng, p, dim));
    const double theta = subspace_angle(h, ongoing);
    const double expected = oracle_subspace_sin(h, ongoing);
    CHECK(std::sin(theta) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("projected_snr") {
  CHECK(projected_snr(10.0, kPi / 2) == doctest::Approx(10.0));
  // 10 dB at 30 degrees: 10 * sin^2(30deg) = 2.5 linear = 3.98 dB.
  CHECK(projected_snr(10.0, kPi / 6) == doctest::Approx(3.9794).epsilon(1e-3));
  CHECK(is_zero_power(projected_snr(10.0, 0.0)));
  CHECK_THROWS_AS(projected_snr(10.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(projected_snr(10.0, kPi), std::domain_error);

  // The critical angle at 10 dB against a 4 dB floor sits just above 30
  // degrees; below it the projected SNR drops out of the operational region.
  const double critical = std::asin(std::sqrt(db_to_linear(4.0 - 10.0)));
  CHECK(critical * 180.0 / kPi == doctest::Approx(30.08).epsilon(1e-3));
  CHECK(projected_snr(10.0, critical - 0.01) < 4.0);
  CHECK(projected_snr(10.0, critical + 0.01) >= 4.0);

  // Never exceeds the original SNR; equality only at pi/2.
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double snr = rng.uniform_real(0.0, 30.0);
    const double theta = rng.uniform_real(0.0, kPi / 2);
    CHECK(projected_snr(snr, theta) <= snr + 1e-12);
  }
}

TEST_CASE("zf_sic_snr_chain") {
  const auto e1 = make(0, {1.0, 0.0});
  const auto e2 = make(1, {0.0, 1.0});

  SUBCASE("orthogonal clients keep their SNR") {
    const auto snrs = zf_sic_snr_chain({{e1, 12.0}, {e2, 7.0}});
    REQUIRE(snrs.size() == 2);
    CHECK(snrs[0] == doctest::Approx(12.0));
    CHECK(snrs[1] == doctest::Approx(7.0));
  }

  SUBCASE("dependent third client gets the zero-power marker") {
    const auto a = make(0, {1.0, 0.0, 0.0});
    const auto b = make(1, {0.0, 1.0, 0.0});
    const auto c = make(2, {Complex(0.5, 0), Complex(-2, 0), 0.0});
    const auto snrs = zf_sic_snr_chain({{a, 10.0}, {b, 10.0}, {c, 10.0}});
    REQUIRE(snrs.size() == 3);
    CHECK(is_zero_power(snrs[2]));
  }

  SUBCASE("chain longer than the antenna count is rejected") {
    CHECK_THROWS_AS(zf_sic_snr_chain({{e1, 10.0}, {e2, 10.0}, {e1, 10.0}}),
                    std::invalid_argument);
  }

  SUBCASE("random chains match the independent projector route") {
    Rng rng(77);
    ClientPlacement p{0, 10.0, 15.0};
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<ChainLink> chain;
      for (int i = 0; i < 3; ++i) chain.push_back({sample_channel(rng, p, 3), 15.0});
      const auto snrs = zf_sic_snr_chain(chain);
      REQUIRE(snrs.size() == 3);
      CHECK(snrs[0] == doctest::Approx(15.0));
      for (std::size_t k = 1; k < 3; ++k) {
        std::vector<ChannelVector> earlier;
        for (std::size_t i = 0; i < k; ++i) earlier.push_back(chain[i].channel);
        const double sin_theta = oracle_subspace_sin(chain[k].channel, earlier);
        const double expected = linear_to_db(db_to_linear(15.0) * sin_theta * sin_theta);
        CHECK(snrs[k] == doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }

  SUBCASE("appending a client never changes earlier positions") {
    Rng rng(88);
    ClientPlacement p{0, 10.0, 15.0};
    std::vector<ChainLink> chain{{sample_channel(rng, p, 3), 15.0},
                                 {sample_channel(rng, p, 3), 12.0}};
    const auto before = zf_sic_snr_chain(chain);
    chain.push_back({sample_channel(rng, p, 3), 9.0});
    const auto after = zf_sic_snr_chain(chain);
    CHECK(after[0] == before[0]);
    CHECK(after[1] == before[1]);
  }
}

TEST_CASE("path_loss_snr_db calibration") {
  CHECK(path_loss_snr_db(100.0, 100.0, 5.0, 3.0) == doctest::Approx(5.0));
  CHECK(path_loss_snr_db(10.0, 100.0, 5.0, 3.0) == doctest::Approx(35.0));
  CHECK_THROWS_AS(path_loss_snr_db(0.0, 100.0, 5.0, 3.0), std::invalid_argument);
}
