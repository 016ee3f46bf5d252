#include "mimomate/rate.hpp"

#include <cmath>
#include <stdexcept>

#include "mimomate/channel.hpp"

namespace mimomate {

namespace {

// Default thresholds shared by both built-in profiles; the 4 dB floor is the
// bottom of the 802.11 operational SNR region.
constexpr double kDefaultThresholdsDb[] = {4, 6, 8, 11, 15, 19, 22, 25};

std::vector<RateTable::Entry> zip_profile(const double (&rates)[8]) {
  std::vector<RateTable::Entry> entries;
  entries.reserve(8);
  for (int i = 0; i < 8; ++i) {
    entries.push_back({kDefaultThresholdsDb[i], rates[i]});
  }
  return entries;
}

}  // namespace

RateTable::RateTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("rate table must have at least one entry");
  }
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].min_snr_db <= entries_[i - 1].min_snr_db ||
        entries_[i].rate_mbps <= entries_[i - 1].rate_mbps) {
      throw std::invalid_argument(
          "rate table entries must increase strictly in threshold and rate");
    }
  }
  for (const Entry& e : entries_) {
    if (e.rate_mbps <= 0.0 || !std::isfinite(e.min_snr_db)) {
      throw std::invalid_argument("rate table entry out of range");
    }
  }
}

RateTable RateTable::experimental_profile() {
  static const double kRates[8] = {3, 4.5, 6, 9, 12, 18, 24, 27};
  return RateTable(zip_profile(kRates));
}

RateTable RateTable::simulation_profile() {
  static const double kRates[8] = {6, 9, 12, 18, 24, 36, 48, 54};
  return RateTable(zip_profile(kRates));
}

std::optional<double> snr_to_rate(double snr_db, const RateTable& table) {
  if (is_zero_power(snr_db)) return std::nullopt;
  std::optional<double> best;
  for (const RateTable::Entry& e : table.entries()) {
    if (snr_db >= e.min_snr_db) {
      best = e.rate_mbps;
    } else {
      break;
    }
  }
  return best;
}

std::uint64_t stream_bits(double rate_mbps, double airtime_us) {
  if (rate_mbps <= 0.0 || airtime_us < 0.0) {
    throw std::invalid_argument("stream_bits requires positive rate and nonnegative airtime");
  }
  return static_cast<std::uint64_t>(std::floor(rate_mbps * airtime_us));
}

}  // namespace mimomate
