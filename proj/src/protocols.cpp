#include "mimomate/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mimomate/airtime.hpp"

namespace mimomate {

std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kMimoMate: return "mimomate";
    case Protocol::kMimoMateAngle: return "mimomate_angle";
    case Protocol::kSam: return "sam";
    case Protocol::kMrc: return "mrc";
    case Protocol::kMaxThroughputFirst: return "max_throughput_first";
    case Protocol::kMaxAngleFirst: return "max_angle_first";
    case Protocol::kLegacy80211: return "legacy_80211";
  }
  return "unknown";
}

std::optional<Protocol> protocol_from_name(const std::string& name) {
  for (Protocol p : {Protocol::kMimoMate, Protocol::kMimoMateAngle, Protocol::kSam,
                     Protocol::kMrc, Protocol::kMaxThroughputFirst,
                     Protocol::kMaxAngleFirst, Protocol::kLegacy80211}) {
    if (protocol_name(p) == name) return p;
  }
  return std::nullopt;
}

std::string failure_cause_name(FailureCause c) {
  switch (c) {
    case FailureCause::kNone: return "none";
    case FailureCause::kCollision: return "collision";
    case FailureCause::kSicCascade: return "sic_cascade";
    case FailureCause::kInsufficientAirtime: return "insufficient_airtime";
  }
  return "unknown";
}

std::optional<FailureCause> failure_cause_from_name(const std::string& name) {
  for (FailureCause c : {FailureCause::kNone, FailureCause::kCollision,
                         FailureCause::kSicCascade, FailureCause::kInsufficientAirtime}) {
    if (failure_cause_name(c) == name) return c;
  }
  return std::nullopt;
}

void SimConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("invalid configuration: rounds must be >= 1");
  if (n_antennas < 1) throw std::invalid_argument("invalid configuration: need >= 1 antenna");
  if (n_clients < 1) throw std::invalid_argument("invalid configuration: need >= 1 client");
  if (packet_bytes_min < 1 || packet_bytes_max < packet_bytes_min) {
    throw std::invalid_argument("invalid configuration: bad packet size range");
  }
  if (radius_m <= 0.0) throw std::invalid_argument("invalid configuration: radius must be > 0");
  if (!explicit_distances_m.empty() && explicit_distances_m.size() != n_clients) {
    throw std::invalid_argument("invalid configuration: distances list must cover every client");
  }
  if (!explicit_snrs_db.empty() && explicit_snrs_db.size() != n_clients) {
    throw std::invalid_argument("invalid configuration: SNR list must cover every client");
  }
  if (!explicit_channels.empty()) {
    if (explicit_channels.size() != n_clients) {
      throw std::invalid_argument(
          "invalid configuration: channel list must cover every client");
    }
    for (const ChannelVector& h : explicit_channels) {
      if (h.antennas() != n_antennas) {
        throw std::invalid_argument(
            "invalid configuration: channel dimension must match the antenna count");
      }
    }
  }
  for (ClientId id : legacy_ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= n_clients) {
      throw std::invalid_argument("invalid configuration: legacy id out of range");
    }
  }
  if (rematch_interval < 0) {
    throw std::invalid_argument("invalid configuration: rematch interval must be >= 0");
  }
  if (contention.cw_min <= 0 || contention.cw_max < contention.cw_min) {
    throw std::invalid_argument("invalid configuration: 0 < cw_min <= cw_max required");
  }
}

bool apply_sic_cascade(std::vector<StreamEntry>& streams) {
  int deepest_bad = 0;
  for (const StreamEntry& s : streams) {
    if (!s.decoded) deepest_bad = std::max(deepest_bad, s.position);
  }
  if (deepest_bad == 0) return false;
  for (StreamEntry& s : streams) {
    if (s.position <= deepest_bad) {
      s.decoded = false;
      s.bits_delivered = 0;
    }
  }
  return true;
}

std::vector<AirtimeShare> account_airtime(const RoundRecord& record,
                                          const ContentionParams&) {
  std::vector<AirtimeShare> shares;
  shares.reserve(record.streams.size());
  for (const StreamEntry& s : record.streams) {
    AirtimeShare a;
    a.position = s.position;
    a.data_us = s.airtime_data_us;
    a.overhead_us = s.airtime_overhead_us;
    const double denom = a.data_us + a.overhead_us;
    a.data_fraction = denom > 0.0 ? a.data_us / denom : 0.0;
    shares.push_back(a);
  }
  return shares;
}

namespace {

constexpr int kMaxContentionAttempts = 10000;

struct ClientState {
  ClientPlacement placement;
  ChannelVector channel;
  std::optional<double> alone_rate;
  bool legacy = false;
  BackoffState backoff;
  std::vector<TxOutcome> pending;  // per stream, consumed at next contention
};

/// A stream being assembled: timing relative to the start of the first
/// stream's frame.
struct BuiltStream {
  std::size_t client = 0;
  int position = 0;
  double rate = 0.0;
  double snr_db = 0.0;
  double start_us = 0.0;
  double window_us = 0.0;      // payload time on air
  double contention_us = 0.0;  // contention charged to this stream
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& config)
      : cfg_(config),
        rng_(config.seed),
        traffic_(config.n_clients, config.traffic, rng_),
        floor_db_(config.rate_table.floor_snr_db()) {
    cfg_.validate();
    materialize_placements();
    all_legacy_ = true;
    for (std::size_t c = 0; c < cfg_.n_clients; ++c) {
      if (!clients_[c].legacy) all_legacy_ = false;
    }
    redraw_channels();
  }

  SimOutput run() {
    SimOutput out;
    out.records.reserve(cfg_.rounds);
    for (int r = 1; r <= cfg_.rounds; ++r) {
      if (cfg_.rematch_interval > 0 && r > 1 &&
          (r - 1) % cfg_.rematch_interval == 0) {
        redraw_channels();
      }
      RoundRecord record = play_round();
      record.round = r;
      record.total_airtime_us += pending_announce_us_;
      pending_announce_us_ = 0.0;
      traffic_.step(record.total_airtime_us, rng_);
      out.records.push_back(std::move(record));
    }
    return out;
  }

 private:
  // --- setup ---------------------------------------------------------------

  void materialize_placements() {
    clients_.reserve(cfg_.n_clients);
    for (std::size_t c = 0; c < cfg_.n_clients; ++c) {
      ClientPlacement p;
      p.client_id = static_cast<ClientId>(c);
      if (!cfg_.explicit_distances_m.empty()) {
        p.distance_m = cfg_.explicit_distances_m[c];
      } else {
        // Area-uniform draw on the disk.
        p.distance_m = cfg_.radius_m * std::sqrt(rng_.uniform_real(0.0, 1.0));
      }
      if (p.distance_m <= 0.0 || p.distance_m > cfg_.radius_m) {
        throw std::invalid_argument("invalid configuration: distance outside (0, radius]");
      }
      if (!cfg_.explicit_snrs_db.empty()) {
        p.original_snr_db = cfg_.explicit_snrs_db[c];
      } else {
        p.original_snr_db = path_loss_snr_db(p.distance_m, cfg_.radius_m,
                                             cfg_.snr_at_radius_db,
                                             cfg_.path_loss_exponent);
      }
      ClientState state{p,
                        ChannelVector{},
                        std::nullopt,
                        cfg_.legacy_ids.count(p.client_id) > 0,
                        BackoffState(cfg_.n_antennas, cfg_.contention),
                        std::vector<TxOutcome>(cfg_.n_antennas, TxOutcome::kNoEvent)};
      clients_.push_back(std::move(state));
    }
  }

  void redraw_channels() {
    for (std::size_t i = 0; i < clients_.size(); ++i) {
      ClientState& c = clients_[i];
      if (!cfg_.explicit_channels.empty()) {
        c.channel = cfg_.explicit_channels[i];
        c.channel.client_id = c.placement.client_id;
      } else {
        c.channel = sample_channel(rng_, c.placement, cfg_.n_antennas);
      }
      c.alone_rate = snr_to_rate(c.placement.original_snr_db, cfg_.rate_table);
    }
    if (!all_legacy_ && (cfg_.protocol == Protocol::kMimoMate ||
                         cfg_.protocol == Protocol::kMimoMateAngle)) {
      MatchingConfig mc;
      mc.n_antennas = cfg_.n_antennas;
      mc.legacy_ids = cfg_.legacy_ids;
      std::vector<ClientId> ids;
      std::vector<ChannelVector> channels;
      std::vector<double> snrs;
      for (const ClientState& c : clients_) {
        ids.push_back(c.placement.client_id);
        channels.push_back(c.channel);
        snrs.push_back(c.placement.original_snr_db);
      }
      mates_ = cfg_.n_antennas >= 2
                   ? n_mimomate(ids, channels, snrs, cfg_.rate_table, mc)
                   : MateSet{};
      std::size_t members = 0;
      for (const auto& rel : mates_.relations) members += rel.size();
      // The AP announces the match result in one control frame per rematch.
      pending_announce_us_ += announcement_us(members);
    }
  }

  // --- helpers -------------------------------------------------------------

  std::vector<std::size_t> backlogged_clients() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < clients_.size(); ++c) {
      if (clients_[c].alone_rate && traffic_.has_traffic(c)) out.push_back(c);
    }
    return out;
  }

  int draw_packet_bytes() {
    if (cfg_.packet_bytes_min == cfg_.packet_bytes_max) return cfg_.packet_bytes_min;
    return rng_.uniform_int(cfg_.packet_bytes_min, cfg_.packet_bytes_max);
  }

  std::uint64_t packet_bits_for(std::size_t client, int packet_bytes) const {
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(packet_bytes) * 8ull,
                                   traffic_.backlog_bits(client));
  }

  struct DcfResult {
    std::size_t winner = 0;
    double contention_us = 0.0;
  };

  /// First-stream DCF: everyone draws from its stream-1 window, the unique
  /// minimum wins. A tied minimum is a collision: the tied frames burn their
  /// airtime, the colliders double their windows and drop the packet, and
  /// the survivors try again.
  std::optional<DcfResult> dcf_contend(const std::vector<std::size_t>& contenders,
                                       int packet_bytes) {
    if (contenders.empty()) return std::nullopt;
    DcfResult result;
    for (int attempt = 0; attempt < kMaxContentionAttempts; ++attempt) {
      std::map<ClientId, int> draws;
      for (std::size_t c : contenders) {
        draws[clients_[c].placement.client_id] = draw_backoff(clients_[c].backoff, 1, rng_);
      }
      const ContentionResult res = resolve_contention(draws);
      if (res.has_winner) {
        result.winner = static_cast<std::size_t>(res.winner);
        result.contention_us += cfg_.contention.difs_us +
                                res.winning_slots * cfg_.contention.slot_us;
        return result;
      }
      // Collided frames occupy the channel for the longest of the attempts,
      // then everyone waits out the missing ACK.
      double frame = 0.0;
      for (ClientId id : res.colliders) {
        const std::size_t c = static_cast<std::size_t>(id);
        frame = std::max(frame, frame_us(packet_bytes, *clients_[c].alone_rate));
        clients_[c].backoff.standard_update(1, TxOutcome::kCollision, cfg_.contention);
        traffic_.consume(c, packet_bits_for(c, packet_bytes));
      }
      result.contention_us += cfg_.contention.difs_us +
                              res.winning_slots * cfg_.contention.slot_us + frame +
                              cfg_.contention.sifs_us + ack_us();
    }
    throw std::runtime_error("contention failed to resolve");
  }

  bool transmitting(const std::vector<BuiltStream>& streams, std::size_t client) const {
    for (const BuiltStream& s : streams) {
      if (s.client == client) return true;
    }
    return false;
  }

  std::vector<ChannelVector> chain_channels(const std::vector<BuiltStream>& streams) const {
    std::vector<ChannelVector> chain;
    chain.reserve(streams.size());
    for (const BuiltStream& s : streams) chain.push_back(clients_[s.client].channel);
    return chain;
  }

  /// Projected rate of `client` against the currently transmitting chain.
  std::optional<double> projected_rate(const std::vector<BuiltStream>& streams,
                                       std::size_t client, double* theta_out = nullptr,
                                       double* snr_out = nullptr) const {
    const double theta = subspace_angle(clients_[client].channel, chain_channels(streams));
    const double snr = projected_snr(clients_[client].placement.original_snr_db, theta);
    if (theta_out) *theta_out = theta;
    if (snr_out) *snr_out = snr;
    return snr_to_rate(snr, cfg_.rate_table);
  }

  /// First stream of a round: the winner sends one packet at its alone rate.
  BuiltStream make_first_stream(std::size_t winner, int packet_bytes,
                                double contention_us) {
    BuiltStream s;
    s.client = winner;
    s.position = 1;
    s.rate = *clients_[winner].alone_rate;
    s.snr_db = clients_[winner].placement.original_snr_db;
    s.start_us = 0.0;
    const std::uint64_t payload_bits = packet_bits_for(winner, packet_bytes);
    s.window_us = static_cast<double>(payload_bits) / s.rate;
    s.contention_us = contention_us;
    return s;
  }

  double stream_end_us(const BuiltStream& s) const {
    return s.start_us + kPlcpUs + mac_header_us(s.rate) + s.window_us;
  }

  /// Later joiner whose frame must end with the first stream; returns
  /// nullopt when the remaining window cannot hold a minimum fragment.
  std::optional<BuiltStream> make_joiner(std::size_t client, int position,
                                         double start_us, double t_end,
                                         double rate, double snr_db,
                                         double contention_us) {
    BuiltStream s;
    s.client = client;
    s.position = position;
    s.rate = rate;
    s.snr_db = snr_db;
    s.start_us = start_us;
    s.window_us = t_end - start_us - kPlcpUs - mac_header_us(rate);
    s.contention_us = contention_us;
    if (s.window_us < kMinFragmentUs) return std::nullopt;
    return s;
  }

  /// Turns built streams into record entries, splitting airtime into data
  /// and per-stream overhead (own contention, preamble waits while counting
  /// predecessors, PLCP, MAC header, and an equal share of SIFS + ACK plus
  /// any shared prelude such as MRC's RTS/CTS exchange).
  RoundRecord finish_round(std::vector<BuiltStream> streams, double preamble_wait_per_pos,
                           double shared_prelude_us, double round_span_us,
                           FailureCause cause) {
    RoundRecord record;
    record.failure_cause = cause;
    record.total_airtime_us = round_span_us;
    const double n = static_cast<double>(streams.size());
    for (const BuiltStream& b : streams) {
      StreamEntry e;
      e.position = b.position;
      e.client_id = clients_[b.client].placement.client_id;
      e.rate_mbps = b.rate;
      e.effective_snr_db = b.snr_db;
      e.airtime_data_us = b.window_us;
      e.airtime_overhead_us = b.contention_us +
                              preamble_wait_per_pos * (b.position - 1) + kPlcpUs +
                              mac_header_us(b.rate) +
                              (shared_prelude_us + cfg_.contention.sifs_us + ack_us()) / n;
      e.decoded = cause != FailureCause::kCollision;
      const std::uint64_t capacity = stream_bits(b.rate, b.window_us);
      const std::uint64_t attempted = std::min(capacity, traffic_.backlog_bits(b.client));
      e.bits_delivered = e.decoded ? attempted : 0;
      traffic_.consume(b.client, attempted);  // delivered or dropped, it left the queue
      record.streams.push_back(e);
    }
    if (apply_sic_cascade(record.streams) && cause == FailureCause::kNone) {
      record.failure_cause = FailureCause::kSicCascade;
    }
    return record;
  }

  // --- protocol rounds -----------------------------------------------------

  RoundRecord idle_round() {
    RoundRecord record;
    record.total_airtime_us = cfg_.contention.slot_us;
    return record;
  }

  RoundRecord legacy_round() {
    const int packet = draw_packet_bytes();
    const auto contenders = backlogged_clients();
    const auto dcf = dcf_contend(contenders, packet);
    if (!dcf) return idle_round();
    std::vector<BuiltStream> streams{make_first_stream(dcf->winner, packet,
                                                       dcf->contention_us)};
    clients_[dcf->winner].backoff.standard_update(1, TxOutcome::kSuccess, cfg_.contention);
    const double t_end = stream_end_us(streams.front());
    const double span = dcf->contention_us + t_end + cfg_.contention.sifs_us + ack_us();
    return finish_round(std::move(streams), kPlcpUs, 0.0, span, FailureCause::kNone);
  }

  /// Scheduled mates join the winner by counting preambles; an idle mate
  /// breaks the chain because later mates never see the preamble count they
  /// wait for. With angle-based contention enabled, unused positions go to
  /// an in-transmission contention weighted by channel angle.
  RoundRecord mimomate_round(bool angle_fill) {
    const int packet = draw_packet_bytes();
    const auto contenders = backlogged_clients();
    const auto dcf = dcf_contend(contenders, packet);
    if (!dcf) return idle_round();
    std::vector<BuiltStream> streams{make_first_stream(dcf->winner, packet,
                                                       dcf->contention_us)};
    clients_[dcf->winner].backoff.standard_update(1, TxOutcome::kSuccess, cfg_.contention);
    const double t_end = stream_end_us(streams.front());
    FailureCause cause = FailureCause::kNone;

    const std::vector<ClientId>* rel =
        mates_.relation_led_by(clients_[dcf->winner].placement.client_id);
    if (rel != nullptr) {
      for (std::size_t idx = 1; idx < rel->size(); ++idx) {
        const std::size_t mate = static_cast<std::size_t>((*rel)[idx]);
        if (!traffic_.has_traffic(mate) || !clients_[mate].alone_rate) break;
        const int position = static_cast<int>(streams.size()) + 1;
        double theta = 0.0, snr = 0.0;
        const auto rate = projected_rate(streams, mate, &theta, &snr);
        if (!rate) break;  // cannot happen for an intact matched prefix
        const double start = (position - 1) * kPlcpUs;
        auto joiner = make_joiner(mate, position, start, t_end, *rate, snr, 0.0);
        if (!joiner) {
          cause = FailureCause::kInsufficientAirtime;
          break;
        }
        streams.push_back(*joiner);
      }
    }

    if (angle_fill && streams.size() < cfg_.n_antennas) {
      const auto fill = angle_based_fill(streams, t_end);
      if (fill != FailureCause::kNone) cause = fill;
    }

    const double span = dcf->contention_us + t_end + cfg_.contention.sifs_us + ack_us();
    return finish_round(std::move(streams), kPlcpUs, 0.0, span, cause);
  }

  /// In-transmission contention with angle-scaled windows (used when the
  /// scheduled mates leave positions idle). A slot tie wrecks the whole
  /// round like in SAM. Returns a failure cause when one fired.
  FailureCause angle_based_fill(std::vector<BuiltStream>& streams, double t_end) {
    while (streams.size() < cfg_.n_antennas) {
      const std::size_t k = streams.size() + 1;
      const double cont_start = streams.back().start_us + kPlcpUs;
      // Participation: each candidate learns its angle to the ongoing
      // streams and updates its per-stream window; too-projected candidates
      // give up before drawing.
      std::vector<std::size_t> participants;
      std::map<ClientId, int> draws;
      for (std::size_t c = 0; c < clients_.size(); ++c) {
        if (clients_[c].legacy || !clients_[c].alone_rate) continue;
        if (!traffic_.has_traffic(c) || transmitting(streams, c)) continue;
        double theta = 0.0, snr = 0.0;
        projected_rate(streams, c, &theta, &snr);
        const TxOutcome outcome = clients_[c].pending[k - 1];
        const auto update = angle_cw_update(clients_[c].backoff, k, theta, snr,
                                            floor_db_, cfg_.contention, outcome);
        if (!update.participate) continue;
        clients_[c].pending[k - 1] = TxOutcome::kNoEvent;
        participants.push_back(c);
        draws[clients_[c].placement.client_id] = draw_backoff(clients_[c].backoff, k, rng_);
      }
      if (participants.empty()) return FailureCause::kNone;
      if (t_end - (cont_start + cfg_.contention.slot_us + kPlcpUs) < kMinFragmentUs) {
        return FailureCause::kInsufficientAirtime;
      }
      const ContentionResult res = resolve_contention(draws);
      if (!res.has_winner) {
        for (ClientId id : res.colliders) {
          clients_[static_cast<std::size_t>(id)].pending[k - 1] = TxOutcome::kCollision;
        }
        return FailureCause::kCollision;
      }
      const std::size_t winner = static_cast<std::size_t>(res.winner);
      clients_[winner].pending[k - 1] = TxOutcome::kSuccess;
      double theta = 0.0, snr = 0.0;
      const auto rate = projected_rate(streams, winner, &theta, &snr);
      const double contention_us = res.winning_slots * cfg_.contention.slot_us;
      const double start = cont_start + contention_us;
      auto joiner = make_joiner(winner, static_cast<int>(k), start, t_end, *rate, snr,
                                contention_us);
      if (!joiner) return FailureCause::kInsufficientAirtime;
      streams.push_back(*joiner);
    }
    return FailureCause::kNone;
  }

  /// SAM: every concurrent stream is won by a separate contention held over
  /// the ongoing transmission. A tied minimum puts more simultaneous streams
  /// on air than the AP can separate and the whole round's ZF-SIC fails.
  RoundRecord sam_round() {
    const int packet = draw_packet_bytes();
    const auto contenders = backlogged_clients();
    const auto dcf = dcf_contend(contenders, packet);
    if (!dcf) return idle_round();
    std::vector<BuiltStream> streams{make_first_stream(dcf->winner, packet,
                                                       dcf->contention_us)};
    clients_[dcf->winner].backoff.standard_update(1, TxOutcome::kSuccess, cfg_.contention);
    const double t_end = stream_end_us(streams.front());
    FailureCause cause = FailureCause::kNone;

    while (streams.size() < cfg_.n_antennas) {
      const std::size_t k = streams.size() + 1;
      const double cont_start = streams.back().start_us + kPlcpUs;
      std::vector<std::size_t> willing;
      for (std::size_t c = 0; c < clients_.size(); ++c) {
        if (clients_[c].legacy || !clients_[c].alone_rate) continue;
        if (!traffic_.has_traffic(c) || transmitting(streams, c)) continue;
        if (!projected_rate(streams, c)) continue;  // TurboRate give-up
        willing.push_back(c);
      }
      if (willing.empty()) break;
      if (t_end - (cont_start + cfg_.contention.slot_us + kPlcpUs) < kMinFragmentUs) {
        cause = FailureCause::kInsufficientAirtime;
        break;
      }
      std::map<ClientId, int> draws;
      for (std::size_t c : willing) {
        clients_[c].backoff.standard_update(k, clients_[c].pending[k - 1], cfg_.contention);
        clients_[c].pending[k - 1] = TxOutcome::kNoEvent;
        draws[clients_[c].placement.client_id] = draw_backoff(clients_[c].backoff, k, rng_);
      }
      const ContentionResult res = resolve_contention(draws);
      if (!res.has_winner) {
        for (ClientId id : res.colliders) {
          clients_[static_cast<std::size_t>(id)].pending[k - 1] = TxOutcome::kCollision;
        }
        cause = FailureCause::kCollision;
        break;
      }
      const std::size_t winner = static_cast<std::size_t>(res.winner);
      clients_[winner].pending[k - 1] = TxOutcome::kSuccess;
      double theta = 0.0, snr = 0.0;
      const auto rate = projected_rate(streams, winner, &theta, &snr);
      const double contention_us = res.winning_slots * cfg_.contention.slot_us;
      const double start = cont_start + contention_us;
      auto joiner = make_joiner(winner, static_cast<int>(k), start, t_end, *rate, snr,
                                contention_us);
      if (!joiner) {
        cause = FailureCause::kInsufficientAirtime;
        break;
      }
      streams.push_back(*joiner);
    }

    const double span = dcf->contention_us + t_end + cfg_.contention.sifs_us + ack_us();
    return finish_round(std::move(streams), kPlcpUs, 0.0, span, cause);
  }

  /// MRC: N RTS rounds admit up to N clients, one CTS releases them, and all
  /// admitted streams run side by side with equal airtime.
  RoundRecord mrc_round() {
    const int packet = draw_packet_bytes();
    double prelude_us = 0.0;
    std::vector<std::size_t> admitted;
    std::vector<BuiltStream> admitted_chain;  // for projection checks only

    for (std::size_t rts_round = 0; rts_round < cfg_.n_antennas; ++rts_round) {
      std::vector<std::size_t> contenders;
      for (std::size_t c = 0; c < clients_.size(); ++c) {
        if (clients_[c].legacy || !clients_[c].alone_rate) continue;
        if (!traffic_.has_traffic(c)) continue;
        if (std::find(admitted.begin(), admitted.end(), c) != admitted.end()) continue;
        if (!projected_rate(admitted_chain, c)) continue;
        contenders.push_back(c);
      }
      if (contenders.empty()) {
        // Nobody left to ask, but the CTS still waits out the full schedule.
        prelude_us += cfg_.contention.difs_us +
                      cfg_.contention.cw_min * cfg_.contention.slot_us;
        continue;
      }
      std::map<ClientId, int> draws;
      for (std::size_t c : contenders) {
        draws[clients_[c].placement.client_id] = draw_backoff(clients_[c].backoff, 1, rng_);
      }
      const ContentionResult res = resolve_contention(draws);
      std::vector<std::size_t> senders;
      if (res.has_winner) {
        senders.push_back(static_cast<std::size_t>(res.winner));
      } else {
        for (ClientId id : res.colliders) senders.push_back(static_cast<std::size_t>(id));
        std::sort(senders.begin(), senders.end());
      }
      prelude_us += cfg_.contention.difs_us +
                    res.winning_slots * cfg_.contention.slot_us + rts_us();
      if (senders.size() <= cfg_.n_antennas - admitted.size()) {
        for (std::size_t c : senders) {
          admitted.push_back(c);
          BuiltStream marker;
          marker.client = c;
          admitted_chain.push_back(marker);
          clients_[c].backoff.standard_update(1, TxOutcome::kSuccess, cfg_.contention);
        }
      } else {
        // More simultaneous RTSs than free dimensions: those RTSs are lost.
        // No data frame was on air, so only the windows take the hit.
        for (std::size_t c : senders) {
          clients_[c].backoff.standard_update(1, TxOutcome::kCollision, cfg_.contention);
        }
      }
    }
    prelude_us += cfg_.contention.sifs_us + cts_us();

    if (admitted.empty()) {
      RoundRecord record;
      record.total_airtime_us = prelude_us;
      return record;
    }

    // Data phase: everyone starts on the CTS, the first admitted client's
    // packet sets the common duration, later ones fragment or aggregate.
    std::vector<BuiltStream> streams{make_first_stream(admitted.front(), packet, 0.0)};
    const double t_end = stream_end_us(streams.front());
    FailureCause cause = FailureCause::kNone;
    for (std::size_t idx = 1; idx < admitted.size(); ++idx) {
      const std::size_t c = admitted[idx];
      double theta = 0.0, snr = 0.0;
      const auto rate = projected_rate(streams, c, &theta, &snr);
      if (!rate) continue;  // screened at RTS time; channels are static in-round
      const int position = static_cast<int>(streams.size()) + 1;
      auto joiner = make_joiner(c, position, 0.0, t_end, *rate, snr, 0.0);
      if (!joiner) {
        cause = FailureCause::kInsufficientAirtime;
        continue;
      }
      streams.push_back(*joiner);
    }
    const double span = prelude_us + t_end + cfg_.contention.sifs_us + ack_us();
    return finish_round(std::move(streams), 0.0, prelude_us, span, cause);
  }

  RoundRecord greedy_round(bool max_angle) {
    const int packet = draw_packet_bytes();
    const auto contenders = backlogged_clients();
    const auto dcf = dcf_contend(contenders, packet);
    if (!dcf) return idle_round();
    std::vector<BuiltStream> streams{make_first_stream(dcf->winner, packet,
                                                       dcf->contention_us)};
    clients_[dcf->winner].backoff.standard_update(1, TxOutcome::kSuccess, cfg_.contention);
    const double t_end = stream_end_us(streams.front());
    FailureCause cause = FailureCause::kNone;

    while (streams.size() < cfg_.n_antennas) {
      const int position = static_cast<int>(streams.size()) + 1;
      std::optional<std::size_t> best;
      double best_key = -1.0;
      double best_rate = 0.0, best_snr = 0.0;
      for (std::size_t c = 0; c < clients_.size(); ++c) {
        if (clients_[c].legacy || !clients_[c].alone_rate) continue;
        if (!traffic_.has_traffic(c) || transmitting(streams, c)) continue;
        double theta = 0.0, snr = 0.0;
        const auto rate = projected_rate(streams, c, &theta, &snr);
        if (!rate) continue;
        const double key = max_angle ? theta : *rate;
        if (!best || key > best_key) {
          best = c;
          best_key = key;
          best_rate = *rate;
          best_snr = snr;
        }
      }
      if (!best) break;
      const double start = (position - 1) * kPlcpUs;
      auto joiner = make_joiner(*best, position, start, t_end, best_rate, best_snr, 0.0);
      if (!joiner) {
        cause = FailureCause::kInsufficientAirtime;
        break;
      }
      streams.push_back(*joiner);
    }

    const double span = dcf->contention_us + t_end + cfg_.contention.sifs_us + ack_us();
    return finish_round(std::move(streams), kPlcpUs, 0.0, span, FailureCause::kNone);
  }

  RoundRecord play_round() {
    if (backlogged_clients().empty()) return idle_round();
    if (all_legacy_ || cfg_.protocol == Protocol::kLegacy80211) return legacy_round();
    switch (cfg_.protocol) {
      case Protocol::kMimoMate: return mimomate_round(false);
      case Protocol::kMimoMateAngle: return mimomate_round(true);
      case Protocol::kSam: return sam_round();
      case Protocol::kMrc: return mrc_round();
      case Protocol::kMaxThroughputFirst: return greedy_round(false);
      case Protocol::kMaxAngleFirst: return greedy_round(true);
      case Protocol::kLegacy80211: return legacy_round();
    }
    throw std::logic_error("unhandled protocol");
  }

  SimConfig cfg_;
  Rng rng_;
  std::vector<ClientState> clients_;
  TrafficState traffic_;
  MateSet mates_;
  bool all_legacy_ = false;
  double pending_announce_us_ = 0.0;
  double floor_db_ = 0.0;
};

}  // namespace

SimOutput run_simulation(const SimConfig& config) {
  Simulator sim(config);
  return sim.run();
}

}  // namespace mimomate
