#include "mimomate/traffic.hpp"

#include <limits>
#include <stdexcept>

namespace mimomate {

TrafficState::TrafficState(std::size_t n_clients, const TrafficModel& model, Rng& rng)
    : model_(model),
      backlog_bits_(n_clients, 0),
      next_arrival_us_(n_clients, std::numeric_limits<double>::infinity()) {
  if (model.kind == TrafficKind::kBursty) {
    if (model.lambda_files_per_s <= 0.0 || model.file_kb_min <= 0 ||
        model.file_kb_max < model.file_kb_min) {
      throw std::invalid_argument("invalid configuration: bad bursty traffic parameters");
    }
    for (std::size_t c = 0; c < n_clients; ++c) schedule_next_arrival(c, rng);
  }
}

bool TrafficState::has_traffic(std::size_t client) const {
  if (model_.kind == TrafficKind::kContinuous) return true;
  return backlog_bits_.at(client) > 0;
}

std::uint64_t TrafficState::backlog_bits(std::size_t client) const {
  if (model_.kind == TrafficKind::kContinuous) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return backlog_bits_.at(client);
}

void TrafficState::schedule_next_arrival(std::size_t client, Rng& rng) {
  const double gap_s = rng.exponential(model_.lambda_files_per_s);
  next_arrival_us_[client] = now_us_ + gap_s * 1e6;
}

void TrafficState::step(double elapsed_us, Rng& rng) {
  if (model_.kind == TrafficKind::kContinuous) return;
  if (elapsed_us < 0.0) throw std::invalid_argument("elapsed time must be nonnegative");
  now_us_ += elapsed_us;
  for (std::size_t c = 0; c < backlog_bits_.size(); ++c) {
    while (next_arrival_us_[c] <= now_us_) {
      const int kb = rng.uniform_int(model_.file_kb_min, model_.file_kb_max);
      backlog_bits_[c] += static_cast<std::uint64_t>(kb) * 1000ull * 8ull;
      const double arrived_at = next_arrival_us_[c];
      const double gap_s = rng.exponential(model_.lambda_files_per_s);
      next_arrival_us_[c] = arrived_at + gap_s * 1e6;
    }
  }
}

void TrafficState::consume(std::size_t client, std::uint64_t bits) {
  if (model_.kind == TrafficKind::kContinuous) return;
  std::uint64_t& backlog = backlog_bits_.at(client);
  backlog = (bits >= backlog) ? 0 : backlog - bits;
}

}  // namespace mimomate
