#ifndef MIMOMATE_CONFIG_HPP
#define MIMOMATE_CONFIG_HPP

#include <string>

#include "mimomate/protocols.hpp"

namespace mimomate {

/// Parses a key = value experiment description ('#' starts a comment) into a
/// SimConfig, filling defaults for omitted keys and rejecting unknown keys,
/// malformed values, and constraint violations.
///
/// Recognized keys: clients, n_antennas, radius_m, path_loss_exponent,
/// snr_at_radius_db, distances_m, original_snr_db, legacy_ids, protocol,
/// rounds, packet_bytes (single size or min:max), traffic, lambda_files_per_s,
/// file_kb_min, file_kb_max, rate_table (simulation | experimental),
/// rate_thresholds_db, rate_values_mbps, cw_min, cw_max, slot_us, sifs_us,
/// difs_us, rematch_interval, seed.
SimConfig parse_config(const std::string& text);

SimConfig parse_config_file(const std::string& path);

}  // namespace mimomate

#endif  // MIMOMATE_CONFIG_HPP
