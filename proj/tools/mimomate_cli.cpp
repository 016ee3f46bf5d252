#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mimomate/config.hpp"
#include "mimomate/metrics.hpp"
#include "mimomate/oracle.hpp"
#include "mimomate/protocols.hpp"

namespace mm = mimomate;

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir) {
  mm::SimConfig cfg =
      config_path.empty() ? mm::SimConfig{} : mm::parse_config_file(config_path);
  if (seed) cfg.seed = *seed;
  cfg.validate();

  const mm::SimOutput out = mm::run_simulation(cfg);
  const mm::ExperimentSummary summary = mm::summarize(out.records, cfg);

  std::filesystem::create_directories(out_dir);
  mm::OutputPaths paths;
  paths.rounds_csv = out_dir + "/rounds.csv";
  paths.summary = out_dir + "/summary.txt";
  mm::emit_outputs(summary, out.records, paths);

  std::cout << "protocol " << summary.protocol << ", rounds " << summary.rounds
            << ", throughput " << summary.total_throughput_mbps << " Mb/s, "
            << summary.total_bits << " bits over " << summary.total_airtime_us
            << " us\n";
  std::cout << "wrote " << paths.rounds_csv << " and " << paths.summary << "\n";
  return 0;
}

int cmd_curves(const std::string& snr_list, const std::string& table_name,
               const std::string& out_path) {
  std::vector<double> snrs;
  std::istringstream in(snr_list);
  std::string item;
  while (std::getline(in, item, ',')) snrs.push_back(std::stod(item));
  const mm::RateTable table = table_name == "simulation"
                                  ? mm::RateTable::simulation_profile()
                                  : mm::RateTable::experimental_profile();
  const auto points = mm::projection_curve(snrs, table);
  mm::write_curves_csv(out_path, points);
  std::cout << "wrote " << points.size() << " curve points to " << out_path << "\n";
  return 0;
}

int cmd_verify(int instances, int max_clients, int audit_instances,
               std::uint64_t seed) {
  mm::Rng rng(seed);
  int card_mismatch = 0, weight_mismatch = 0;
  int fair_violations = 0, uniform_violations = 0;

  for (int i = 0; i < instances; ++i) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, max_clients - 3));
    const mm::WeightMatrix weights = mm::random_weight_matrix(rng, n);

    const mm::MateSet fast = mm::mwmcm_bipartite(weights, mm::MatchingConfig{});
    const mm::MateSet brute = mm::brute_force_two_mimomate(weights);
    if (fast.relations.size() != brute.relations.size()) ++card_mismatch;
    if (mm::matched_weight(fast, weights) != mm::matched_weight(brute, weights)) {
      ++weight_mismatch;
    }

    const mm::TheoremReport report = mm::verify_theorems(weights);
    if (!report.matching_at_least_best_fair) ++fair_violations;
    if (!report.matching_at_least_uniform) ++uniform_violations;
  }
  std::printf("matcher sweep: %d instances, %d cardinality mismatches, %d weight mismatches\n",
              instances, card_mismatch, weight_mismatch);
  std::printf("theorem sweep: %d instances, %d fair violations, %d uniform violations\n",
              instances, fair_violations, uniform_violations);

  // Layered matcher audit on random channel instances in a dense SNR regime.
  int constraint_failures = 0, cardinality_gaps = 0;
  double worst_ratio = 1.0;
  double ratio_sum = 0.0;
  int ratio_count = 0;
  const mm::RateTable table = mm::RateTable::simulation_profile();
  for (int i = 0; i < audit_instances; ++i) {
    const int n = 4 + static_cast<int>(rng.uniform_int(0, 3));
    std::vector<mm::ClientId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<mm::ChannelVector> channels;
    std::vector<double> snrs;
    for (int c = 0; c < n; ++c) {
      mm::ClientPlacement p{c, 10.0, rng.uniform_real(25.0, 35.0)};
      snrs.push_back(p.original_snr_db);
      channels.push_back(mm::sample_channel(rng, p, 3));
    }
    mm::MatchingConfig mc;
    mc.n_antennas = 3;
    const mm::MateSet mates = mm::n_mimomate(ids, channels, snrs, table, mc);
    if (!mm::check_mate_constraints(mates, ids, channels, snrs, table)) {
      ++constraint_failures;
    }

    const auto weight_fn = [&](mm::ClientId u, mm::ClientId v,
                               mm::ClientId w) -> std::optional<double> {
      const std::vector<mm::ChainLink> lead{{channels[u], snrs[u]}};
      const auto rv = mm::follower_weight(lead, channels[v], snrs[v], table);
      if (!rv) return std::nullopt;
      const std::vector<mm::ChainLink> pair{{channels[u], snrs[u]},
                                            {channels[v], snrs[v]}};
      const auto rw = mm::follower_weight(pair, channels[w], snrs[w], table);
      if (!rw) return std::nullopt;
      return *rv + *rw;
    };
    const mm::TripleSolution brute = mm::brute_force_three_mimomate(ids, weight_fn);

    std::size_t alg_triples = 0;
    double alg_weight = 0.0;
    for (const auto& rel : mates.relations) {
      if (rel.size() == 3) {
        ++alg_triples;
        alg_weight += *weight_fn(rel[0], rel[1], rel[2]);
      }
    }
    if (alg_triples != brute.triples.size()) ++cardinality_gaps;
    if (brute.weight > 0.0) {
      const double ratio = alg_weight / brute.weight;
      worst_ratio = std::min(worst_ratio, ratio);
      ratio_sum += ratio;
      ++ratio_count;
    }
  }
  std::printf("layered audit: %d instances, %d constraint failures, %d cardinality gaps, "
              "weight ratio mean %.4f min %.4f\n",
              audit_instances, constraint_failures, cardinality_gaps,
              ratio_count ? ratio_sum / ratio_count : 1.0, worst_ratio);

  const bool ok = card_mismatch == 0 && weight_mismatch == 0 && fair_violations == 0 &&
                  uniform_violations == 0 && constraint_failures == 0 &&
                  cardinality_gaps == 0;
  std::printf("verify: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMOMate user-matching simulator for uplink MU-MIMO LANs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed_opt = 0;
  bool seed_given = false;
  auto* run = app.add_subcommand("run", "run one simulation from a config file");
  run->add_option("--config", config_path, "experiment config (key = value lines)");
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--seed", seed_opt, "override the config seed")
      ->each([&](const std::string&) { seed_given = true; });

  std::string snr_list = "5,10,15,20,25";
  std::string table_name = "experimental";
  std::string curves_out = "curves.csv";
  auto* curves = app.add_subcommand("curves", "emit follower throughput vs angle");
  curves->add_option("--snr-list", snr_list, "comma-separated original SNRs in dB")
      ->capture_default_str();
  curves->add_option("--table", table_name, "rate table: experimental | simulation")
      ->check(CLI::IsMember({"experimental", "simulation"}))
      ->capture_default_str();
  curves->add_option("--out", curves_out, "output CSV path")->capture_default_str();

  int instances = 1000;
  int max_clients = 7;
  int audit_instances = 500;
  std::uint64_t verify_seed = 12345;
  auto* verify = app.add_subcommand("verify", "matcher and theorem sweeps");
  verify->add_option("--instances", instances, "random instances per sweep")
      ->capture_default_str();
  verify->add_option("--max-clients", max_clients, "largest instance size")
      ->check(CLI::Range(3, 8))
      ->capture_default_str();
  verify->add_option("--audit-instances", audit_instances,
                     "layered-matcher audit instances")
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "sweep seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (seed_given) seed_override = seed_opt;
      return cmd_run(config_path, seed_override, out_dir);
    }
    if (curves->parsed()) return cmd_curves(snr_list, table_name, curves_out);
    if (verify->parsed()) {
      return cmd_verify(instances, max_clients, audit_instances, verify_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
