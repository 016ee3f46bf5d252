#ifndef MIMOMATE_CONTENTION_HPP
#define MIMOMATE_CONTENTION_HPP

#include <map>
#include <set>
#include <vector>

#include "mimomate/channel.hpp"
#include "mimomate/rng.hpp"

namespace mimomate {

/// 802.11 timing and window bounds. Defaults follow 802.11a OFDM.
struct ContentionParams {
  int cw_min = 16;
  int cw_max = 1024;
  double slot_us = 9.0;
  double sifs_us = 16.0;
  double difs_us = 34.0;
};

/// What happened to a stream's previous transmission attempt; drives the
/// traditional backoff component of the window update.
enum class TxOutcome { kNoEvent, kSuccess, kCollision };

/// Per-client contention state, one window per stream index. delta_cur
/// carries the angle-scaling debt to pay back on the next packet.
class BackoffState {
 public:
  BackoffState(std::size_t n_streams, const ContentionParams& params);

  double cw(std::size_t k) const;          // k is 1-based
  double delta_cur(std::size_t k) const;
  std::size_t streams() const { return cw_.size(); }

  /// Traditional 802.11 rule: double the window on collision, reset to
  /// cw_min on success, leave it on no event.
  void standard_update(std::size_t k, TxOutcome outcome, const ContentionParams& params);

  void set_cw(std::size_t k, double cw);           // test hook
  void set_delta_cur(std::size_t k, double delta); // test hook

 private:
  std::vector<double> cw_;
  std::vector<double> delta_cur_;
};

/// Uniform backoff draw in [1, cw_k].
int draw_backoff(const BackoffState& state, std::size_t k, Rng& rng);

struct ContentionResult {
  bool has_winner = false;
  ClientId winner = -1;
  int winning_slots = 0;
  std::set<ClientId> colliders;  // the tied minimum when there is no winner
};

/// Smallest backoff wins; a tied minimum is a collision of the tied set.
ContentionResult resolve_contention(const std::map<ClientId, int>& backoffs);

struct AngleUpdateResult {
  bool participate = false;  // false: stream gave up before contending
};

/// Window update for the k-th stream contention (k > 1) given the angle to
/// the ongoing streams. Gives up when the projected SNR is at or below the
/// operational floor; otherwise applies the traditional update, repays the
/// previous packet's scaling delta, scales the window by (theta - pi/4) /
/// (pi/4), clamps, and records the new delta.
AngleUpdateResult angle_cw_update(BackoffState& state, std::size_t k, double theta,
                                  double snr_after_projection_db, double floor_db,
                                  const ContentionParams& params, TxOutcome outcome);

}  // namespace mimomate

#endif  // MIMOMATE_CONTENTION_HPP
