#ifndef MIMOMATE_RATE_HPP
#define MIMOMATE_RATE_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace mimomate {

/// SNR-to-bitrate lookup. Entries are strictly increasing in both threshold
/// and rate; anything below the first threshold is undecodable.
class RateTable {
 public:
  struct Entry {
    double min_snr_db;
    double rate_mbps;
  };

  RateTable(std::vector<Entry> entries);

  /// 3..27 Mb/s set used on a 10 MHz channel.
  static RateTable experimental_profile();
  /// 802.11a 6..54 Mb/s set.
  static RateTable simulation_profile();

  const std::vector<Entry>& entries() const { return entries_; }
  double floor_snr_db() const { return entries_.front().min_snr_db; }
  double top_rate_mbps() const { return entries_.back().rate_mbps; }

 private:
  std::vector<Entry> entries_;
};

/// Best rate whose threshold the SNR meets (inclusive), or nullopt when the
/// SNR sits below the operational floor or carries the zero-power marker.
std::optional<double> snr_to_rate(double snr_db, const RateTable& table);

/// Whole bits delivered in `airtime_us` microseconds at `rate_mbps`
/// (1 Mb/s == 1 bit/us), rounded down.
std::uint64_t stream_bits(double rate_mbps, double airtime_us);

}  // namespace mimomate

#endif  // MIMOMATE_RATE_HPP
