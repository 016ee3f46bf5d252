#ifndef MIMOMATE_TRAFFIC_HPP
#define MIMOMATE_TRAFFIC_HPP

#include <cstdint>
#include <vector>

#include "mimomate/rng.hpp"

namespace mimomate {

enum class TrafficKind { kContinuous, kBursty };

struct TrafficModel {
  TrafficKind kind = TrafficKind::kContinuous;
  double lambda_files_per_s = 2.0;
  int file_kb_min = 500;
  int file_kb_max = 550;
};

/// Per-client backlog driven by Poisson file arrivals. Continuous traffic
/// reports every client as backlogged and ignores the bookkeeping.
class TrafficState {
 public:
  TrafficState(std::size_t n_clients, const TrafficModel& model, Rng& rng);

  bool has_traffic(std::size_t client) const;
  std::uint64_t backlog_bits(std::size_t client) const;

  /// Advance the clock; arrivals whose time has come join the backlog.
  void step(double elapsed_us, Rng& rng);

  /// Remove transmitted bits (delivered or dropped, either way they leave
  /// the queue).
  void consume(std::size_t client, std::uint64_t bits);

 private:
  void schedule_next_arrival(std::size_t client, Rng& rng);

  TrafficModel model_;
  double now_us_ = 0.0;
  std::vector<std::uint64_t> backlog_bits_;
  std::vector<double> next_arrival_us_;
};

}  // namespace mimomate

#endif  // MIMOMATE_TRAFFIC_HPP
