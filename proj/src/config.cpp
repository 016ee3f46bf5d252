#include "mimomate/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mimomate {

namespace {

[[noreturn]] void bad_config(const std::string& message) {
  throw std::invalid_argument("invalid configuration: " + message);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(value, &used);
  } catch (const std::exception&) {
    bad_config(key + " expects an integer, got '" + value + "'");
  }
  if (used != value.size()) bad_config(key + " expects an integer, got '" + value + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    bad_config(key + " expects a number, got '" + value + "'");
  }
  if (used != value.size()) bad_config(key + " expects a number, got '" + value + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(parse_double(key, trim(item)));
  }
  if (out.empty()) bad_config(key + " expects a comma-separated list");
  return out;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::vector<double> thresholds, rates;
  bool has_thresholds = false, has_rates = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad_config("line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      bad_config("line " + std::to_string(line_no) + " is not 'key = value'");
    }

    if (key == "clients") {
      const long v = parse_int(key, value);
      if (v < 1) bad_config("clients must be >= 1");
      cfg.n_clients = static_cast<std::size_t>(v);
    } else if (key == "n_antennas") {
      const long v = parse_int(key, value);
      if (v < 1) bad_config("n_antennas must be >= 1");
      cfg.n_antennas = static_cast<std::size_t>(v);
    } else if (key == "radius_m") {
      cfg.radius_m = parse_double(key, value);
    } else if (key == "path_loss_exponent") {
      cfg.path_loss_exponent = parse_double(key, value);
    } else if (key == "snr_at_radius_db") {
      cfg.snr_at_radius_db = parse_double(key, value);
    } else if (key == "distances_m") {
      cfg.explicit_distances_m = parse_double_list(key, value);
    } else if (key == "original_snr_db") {
      cfg.explicit_snrs_db = parse_double_list(key, value);
    } else if (key == "legacy_ids") {
      if (value == "all") {
        cfg.legacy_ids.clear();
        for (std::size_t c = 0; c < cfg.n_clients; ++c) {
          cfg.legacy_ids.insert(static_cast<ClientId>(c));
        }
      } else {
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) {
          cfg.legacy_ids.insert(static_cast<ClientId>(parse_int(key, trim(item))));
        }
      }
    } else if (key == "protocol") {
      const auto p = protocol_from_name(value);
      if (!p) bad_config("unknown protocol '" + value + "'");
      cfg.protocol = *p;
    } else if (key == "rounds") {
      const long v = parse_int(key, value);
      if (v < 1) bad_config("rounds must be >= 1");
      cfg.rounds = static_cast<int>(v);
    } else if (key == "packet_bytes") {
      const auto colon = value.find(':');
      if (colon == std::string::npos) {
        cfg.packet_bytes_min = cfg.packet_bytes_max =
            static_cast<int>(parse_int(key, value));
      } else {
        cfg.packet_bytes_min = static_cast<int>(parse_int(key, trim(value.substr(0, colon))));
        cfg.packet_bytes_max = static_cast<int>(parse_int(key, trim(value.substr(colon + 1))));
      }
    } else if (key == "traffic") {
      if (value == "continuous") {
        cfg.traffic.kind = TrafficKind::kContinuous;
      } else if (value == "bursty") {
        cfg.traffic.kind = TrafficKind::kBursty;
      } else {
        bad_config("traffic must be 'continuous' or 'bursty'");
      }
    } else if (key == "lambda_files_per_s") {
      cfg.traffic.lambda_files_per_s = parse_double(key, value);
    } else if (key == "file_kb_min") {
      cfg.traffic.file_kb_min = static_cast<int>(parse_int(key, value));
    } else if (key == "file_kb_max") {
      cfg.traffic.file_kb_max = static_cast<int>(parse_int(key, value));
    } else if (key == "rate_table") {
      if (value == "simulation") {
        cfg.rate_table = RateTable::simulation_profile();
      } else if (value == "experimental") {
        cfg.rate_table = RateTable::experimental_profile();
      } else {
        bad_config("rate_table must be 'simulation' or 'experimental'");
      }
    } else if (key == "rate_thresholds_db") {
      thresholds = parse_double_list(key, value);
      has_thresholds = true;
    } else if (key == "rate_values_mbps") {
      rates = parse_double_list(key, value);
      has_rates = true;
    } else if (key == "cw_min") {
      cfg.contention.cw_min = static_cast<int>(parse_int(key, value));
    } else if (key == "cw_max") {
      cfg.contention.cw_max = static_cast<int>(parse_int(key, value));
    } else if (key == "slot_us") {
      cfg.contention.slot_us = parse_double(key, value);
    } else if (key == "sifs_us") {
      cfg.contention.sifs_us = parse_double(key, value);
    } else if (key == "difs_us") {
      cfg.contention.difs_us = parse_double(key, value);
    } else if (key == "rematch_interval") {
      const long v = parse_int(key, value);
      if (v < 0) bad_config("rematch_interval must be >= 0");
      cfg.rematch_interval = static_cast<int>(v);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else {
      bad_config("unknown key '" + key + "'");
    }
  }

  if (has_thresholds != has_rates) {
    bad_config("rate_thresholds_db and rate_values_mbps must be given together");
  }
  if (has_thresholds) {
    if (thresholds.size() != rates.size()) {
      bad_config("rate_thresholds_db and rate_values_mbps must have equal length");
    }
    std::vector<RateTable::Entry> entries;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      entries.push_back({thresholds[i], rates[i]});
    }
    cfg.rate_table = RateTable(std::move(entries));
  }

  cfg.validate();
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace mimomate
