#include <doctest.h>

#include "mimomate/channel.hpp"
#include "mimomate/rate.hpp"
#include "mimomate/rng.hpp"

using namespace mimomate;

TEST_CASE("snr_to_rate thresholds and floor") {
  const RateTable table = RateTable::experimental_profile();
  CHECK(table.floor_snr_db() == 4.0);

  CHECK(!snr_to_rate(3.9, table).has_value());
  CHECK(snr_to_rate(60.0, table) == 27.0);
  // Inclusive boundary: a value exactly on a threshold earns that rate.
  CHECK(snr_to_rate(4.0, table) == 3.0);
  CHECK(snr_to_rate(11.0, table) == 9.0);
  CHECK(!snr_to_rate(kZeroPowerDb, table).has_value());
}

TEST_CASE("snr_to_rate is monotone in SNR") {
  const RateTable table = RateTable::simulation_profile();
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = rng.uniform_real(-5.0, 40.0);
    const double b = rng.uniform_real(-5.0, 40.0);
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double rate_lo = snr_to_rate(lo, table).value_or(0.0);
    const double rate_hi = snr_to_rate(hi, table).value_or(0.0);
    CHECK(rate_lo <= rate_hi);
  }
}

TEST_CASE("rate table validation") {
  CHECK_THROWS_AS(RateTable({}), std::invalid_argument);
  CHECK_THROWS_AS(RateTable({{4.0, 6.0}, {4.0, 9.0}}), std::invalid_argument);
  CHECK_THROWS_AS(RateTable({{4.0, 6.0}, {6.0, 6.0}}), std::invalid_argument);
}

TEST_CASE("stream_bits arithmetic") {
  CHECK(stream_bits(6.0, 2000.0) == 12000);
  CHECK(stream_bits(54.0, 0.0) == 0);
  // 27 Mb/s for 444.4 us carries 11998.8 bits, floored to whole bits.
  CHECK(stream_bits(27.0, 444.4) == 11998);
  CHECK_THROWS_AS(stream_bits(0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(stream_bits(6.0, -1.0), std::invalid_argument);
}
