#include "mimomate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mimomate {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void io_error(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

std::map<ClientId, std::map<int, double>> fairness_shares(
    const std::vector<RoundRecord>& records) {
  std::map<ClientId, std::map<int, double>> shares;
  if (records.empty()) return shares;
  const double total = static_cast<double>(records.size());
  for (const RoundRecord& r : records) {
    for (const StreamEntry& s : r.streams) {
      shares[s.client_id][s.position] += 1.0;
    }
  }
  for (auto& [client, by_pos] : shares) {
    for (auto& [pos, count] : by_pos) count /= total;
  }
  return shares;
}

std::vector<std::pair<double, double>> cdf_points(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("empirical CDF needs at least one value");
  }
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    // One step per distinct value, at its highest rank.
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

std::vector<double> per_round_throughputs(const std::vector<RoundRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const RoundRecord& r : records) {
    std::uint64_t bits = 0;
    for (const StreamEntry& s : r.streams) bits += s.bits_delivered;
    out.push_back(r.total_airtime_us > 0.0
                      ? static_cast<double>(bits) / r.total_airtime_us
                      : 0.0);
  }
  return out;
}

ExperimentSummary summarize(const std::vector<RoundRecord>& records,
                            const SimConfig& config) {
  ExperimentSummary s;
  s.protocol = protocol_name(config.protocol);
  s.seed = config.seed;
  s.rounds = static_cast<int>(records.size());
  std::map<int, double> fraction_sum;
  std::map<int, int> fraction_count;
  for (const RoundRecord& r : records) {
    s.total_airtime_us += r.total_airtime_us;
    switch (r.failure_cause) {
      case FailureCause::kNone: break;
      case FailureCause::kCollision: ++s.failures_collision; break;
      case FailureCause::kSicCascade: ++s.failures_sic_cascade; break;
      case FailureCause::kInsufficientAirtime: ++s.failures_insufficient_airtime; break;
    }
    for (const StreamEntry& e : r.streams) {
      s.total_bits += e.bits_delivered;
      const double denom = e.airtime_data_us + e.airtime_overhead_us;
      if (denom > 0.0) {
        fraction_sum[e.position] += e.airtime_data_us / denom;
        fraction_count[e.position] += 1;
      }
    }
  }
  for (const auto& [pos, sum] : fraction_sum) {
    s.position_data_fraction[pos] = sum / fraction_count[pos];
  }
  s.shares = fairness_shares(records);
  s.total_throughput_mbps =
      s.total_airtime_us > 0.0 ? static_cast<double>(s.total_bits) / s.total_airtime_us
                               : 0.0;
  return s;
}

std::vector<CurvePoint> projection_curve(const std::vector<double>& snrs_db,
                                         const RateTable& table) {
  constexpr double kPi = 3.14159265358979323846;
  std::vector<CurvePoint> out;
  for (double snr : snrs_db) {
    for (int deg = 0; deg <= 90; ++deg) {
      const double theta = deg * kPi / 180.0;
      const auto rate = snr_to_rate(projected_snr(snr, theta), table);
      out.push_back({snr, deg, rate.value_or(0.0)});
    }
  }
  return out;
}

std::string rounds_csv_header() {
  return "round,protocol,position,client_id,rate_mbps,effective_snr_db,data_us,"
         "overhead_us,bits,decoded,failure_cause";
}

void write_rounds_csv(const std::string& path, const std::string& protocol,
                      const std::vector<RoundRecord>& records) {
  std::ofstream out(path);
  if (!out) io_error("cannot open CSV for writing", path);
  out << rounds_csv_header() << "\n";
  for (const RoundRecord& r : records) {
    for (const StreamEntry& s : r.streams) {
      out << r.round << ',' << protocol << ',' << s.position << ',' << s.client_id
          << ',' << fmt_double(s.rate_mbps) << ',' << fmt_double(s.effective_snr_db)
          << ',' << fmt_double(s.airtime_data_us) << ','
          << fmt_double(s.airtime_overhead_us) << ',' << s.bits_delivered << ','
          << (s.decoded ? 1 : 0) << ',' << failure_cause_name(r.failure_cause)
          << "\n";
    }
  }
  if (!out.good()) io_error("write failed", path);
}

std::vector<RoundRecord> parse_rounds_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot open CSV for reading", path);
  std::string line;
  if (!std::getline(in, line) || line != rounds_csv_header()) {
    io_error("unexpected CSV header", path);
  }
  std::vector<RoundRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 11) io_error("malformed CSV row", path);
    const int round = std::stoi(fields[0]);
    if (records.empty() || records.back().round != round) {
      RoundRecord r;
      r.round = round;
      const auto cause = failure_cause_from_name(fields[10]);
      if (!cause) io_error("unknown failure cause in CSV", path);
      r.failure_cause = *cause;
      records.push_back(r);
    }
    StreamEntry s;
    s.position = std::stoi(fields[2]);
    s.client_id = std::stoi(fields[3]);
    s.rate_mbps = std::strtod(fields[4].c_str(), nullptr);
    s.effective_snr_db = std::strtod(fields[5].c_str(), nullptr);
    s.airtime_data_us = std::strtod(fields[6].c_str(), nullptr);
    s.airtime_overhead_us = std::strtod(fields[7].c_str(), nullptr);
    s.bits_delivered = std::stoull(fields[8]);
    s.decoded = fields[9] == "1";
    records.back().streams.push_back(s);
  }
  return records;
}

void write_summary(const std::string& path, const ExperimentSummary& summary) {
  std::ofstream out(path);
  if (!out) io_error("cannot open summary for writing", path);
  out << "protocol = " << summary.protocol << "\n";
  out << "seed = " << summary.seed << "\n";
  out << "rounds = " << summary.rounds << "\n";
  out << "total_bits = " << summary.total_bits << "\n";
  out << "total_airtime_us = " << fmt_double(summary.total_airtime_us) << "\n";
  out << "total_throughput_mbps = " << fmt_double(summary.total_throughput_mbps)
      << "\n";
  out << "failures_collision = " << summary.failures_collision << "\n";
  out << "failures_sic_cascade = " << summary.failures_sic_cascade << "\n";
  out << "failures_insufficient_airtime = " << summary.failures_insufficient_airtime
      << "\n";
  for (const auto& [pos, fraction] : summary.position_data_fraction) {
    out << "position_" << pos << "_data_fraction = " << fmt_double(fraction) << "\n";
  }
  for (const auto& [client, by_pos] : summary.shares) {
    for (const auto& [pos, share] : by_pos) {
      out << "share_client" << client << "_pos" << pos << " = " << fmt_double(share)
          << "\n";
    }
  }
  if (!out.good()) io_error("write failed", path);
}

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& points) {
  std::ofstream out(path);
  if (!out) io_error("cannot open curves file for writing", path);
  out << "snr_db,theta_deg,throughput_mbps\n";
  for (const CurvePoint& p : points) {
    out << fmt_double(p.snr_db) << ',' << p.theta_deg << ','
        << fmt_double(p.throughput_mbps) << "\n";
  }
  if (!out.good()) io_error("write failed", path);
}

void emit_outputs(const ExperimentSummary& summary,
                  const std::vector<RoundRecord>& records, const OutputPaths& paths,
                  const std::vector<CurvePoint>& curves) {
  write_rounds_csv(paths.rounds_csv, summary.protocol, records);
  write_summary(paths.summary, summary);
  if (!paths.curves_csv.empty()) write_curves_csv(paths.curves_csv, curves);
}

}  // namespace mimomate
