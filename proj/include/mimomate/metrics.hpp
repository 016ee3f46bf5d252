#ifndef MIMOMATE_METRICS_HPP
#define MIMOMATE_METRICS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mimomate/protocols.hpp"

namespace mimomate {

/// Aggregates of one experiment. Throughput is total delivered bits over
/// total channel time (bits per microsecond equals Mb/s).
struct ExperimentSummary {
  std::string protocol;
  std::uint64_t seed = 0;
  int rounds = 0;
  std::uint64_t total_bits = 0;
  double total_airtime_us = 0.0;
  double total_throughput_mbps = 0.0;
  int failures_collision = 0;
  int failures_sic_cascade = 0;
  int failures_insufficient_airtime = 0;
  /// share[client][position]: fraction of rounds the client held the position.
  std::map<ClientId, std::map<int, double>> shares;
  /// Mean data-airtime fraction per position, over rounds using the position.
  std::map<int, double> position_data_fraction;
};

ExperimentSummary summarize(const std::vector<RoundRecord>& records,
                            const SimConfig& config);

/// share(client, position) = rounds where the client held that position,
/// divided by the total number of rounds.
std::map<ClientId, std::map<int, double>> fairness_shares(
    const std::vector<RoundRecord>& records);

/// Empirical CDF: ascending (value, cumulative fraction) pairs.
std::vector<std::pair<double, double>> cdf_points(std::vector<double> values);

/// Per-round total throughput in Mb/s (delivered bits over the round span).
std::vector<double> per_round_throughputs(const std::vector<RoundRecord>& records);

/// Follower throughput against the projection angle, one sample per degree
/// in [0, 90], for each original SNR.
struct CurvePoint {
  double snr_db = 0.0;
  int theta_deg = 0;
  double throughput_mbps = 0.0;
};
std::vector<CurvePoint> projection_curve(const std::vector<double>& snrs_db,
                                         const RateTable& table);

std::string rounds_csv_header();
void write_rounds_csv(const std::string& path, const std::string& protocol,
                      const std::vector<RoundRecord>& records);
/// Rebuilds the stream-bearing rounds from an emitted CSV.
std::vector<RoundRecord> parse_rounds_csv(const std::string& path);

void write_summary(const std::string& path, const ExperimentSummary& summary);
void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& points);

struct OutputPaths {
  std::string rounds_csv;
  std::string summary;
  std::string curves_csv;  // optional, empty to skip
};

/// Writes the per-round CSV, the summary document, and (when requested) the
/// projection curve data.
void emit_outputs(const ExperimentSummary& summary,
                  const std::vector<RoundRecord>& records, const OutputPaths& paths,
                  const std::vector<CurvePoint>& curves = {});

}  // namespace mimomate

#endif  // MIMOMATE_METRICS_HPP
