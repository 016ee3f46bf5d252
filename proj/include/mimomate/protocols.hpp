#ifndef MIMOMATE_PROTOCOLS_HPP
#define MIMOMATE_PROTOCOLS_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mimomate/channel.hpp"
#include "mimomate/contention.hpp"
#include "mimomate/matching.hpp"
#include "mimomate/rate.hpp"
#include "mimomate/traffic.hpp"

namespace mimomate {

enum class Protocol {
  kMimoMate,
  kMimoMateAngle,
  kSam,
  kMrc,
  kMaxThroughputFirst,
  kMaxAngleFirst,
  kLegacy80211,
};

std::string protocol_name(Protocol p);
std::optional<Protocol> protocol_from_name(const std::string& name);

enum class FailureCause { kNone, kCollision, kSicCascade, kInsufficientAirtime };

std::string failure_cause_name(FailureCause c);
std::optional<FailureCause> failure_cause_from_name(const std::string& name);

/// One concurrent stream inside a round, in joining order.
struct StreamEntry {
  int position = 0;  // 1-based
  ClientId client_id = -1;
  double rate_mbps = 0.0;
  double effective_snr_db = 0.0;
  double airtime_data_us = 0.0;
  double airtime_overhead_us = 0.0;
  std::uint64_t bits_delivered = 0;
  bool decoded = false;
};

/// Outcome of one contention round. Rounds that end in a first-stream
/// collision or run idle carry no stream entries; their channel time still
/// counts through total_airtime_us.
struct RoundRecord {
  int round = 0;
  FailureCause failure_cause = FailureCause::kNone;
  double total_airtime_us = 0.0;
  std::vector<StreamEntry> streams;
};

/// Full experiment description. Placements are sampled uniformly on a disk
/// unless given explicitly; original SNRs follow the log-distance law unless
/// overridden.
struct SimConfig {
  std::size_t n_antennas = 3;
  std::size_t n_clients = 15;
  double radius_m = 100.0;
  double path_loss_exponent = 3.0;
  double snr_at_radius_db = 5.0;
  std::vector<double> explicit_distances_m;  // optional, size n_clients
  std::vector<double> explicit_snrs_db;      // optional, size n_clients
  /// Fixed channel vectors instead of Rayleigh draws; pins the geometry for
  /// reproducible experiments.
  std::vector<ChannelVector> explicit_channels;
  std::set<ClientId> legacy_ids;
  Protocol protocol = Protocol::kMimoMate;
  int rounds = 1000;
  int packet_bytes_min = 1500;
  int packet_bytes_max = 1500;
  TrafficModel traffic;
  RateTable rate_table = RateTable::simulation_profile();
  ContentionParams contention;
  /// Rounds between channel redraws (and rematches); 0 keeps the channels of
  /// the initial draw for the whole experiment.
  int rematch_interval = 0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimOutput {
  std::vector<RoundRecord> records;
};

/// Runs `config.rounds` contention rounds under the configured protocol.
/// Deterministic given the seed. When every client is a legacy node, all
/// protocols degenerate to the plain 802.11 path.
SimOutput run_simulation(const SimConfig& config);

/// ZF-SIC failure propagation: an undecodable stream at position k drags
/// positions 1..k-1 down with it (their interference cannot be cancelled);
/// later positions decode before it and are unaffected. Returns true when a
/// cascade fired.
bool apply_sic_cascade(std::vector<StreamEntry>& streams);

struct AirtimeShare {
  int position = 0;
  double data_us = 0.0;
  double overhead_us = 0.0;
  double data_fraction = 0.0;
};

/// Per-stream split of a round's airtime into data and overhead.
std::vector<AirtimeShare> account_airtime(const RoundRecord& record,
                                          const ContentionParams& params);

}  // namespace mimomate

#endif  // MIMOMATE_PROTOCOLS_HPP
