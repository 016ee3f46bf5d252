#include "mimomate/contention.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mimomate {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

BackoffState::BackoffState(std::size_t n_streams, const ContentionParams& params)
    : cw_(n_streams, static_cast<double>(params.cw_min)),
      delta_cur_(n_streams, 0.0) {
  if (params.cw_min <= 0 || params.cw_max < params.cw_min) {
    throw std::invalid_argument("invalid configuration: 0 < cw_min <= cw_max required");
  }
  if (n_streams == 0) {
    throw std::invalid_argument("invalid configuration: need at least one stream");
  }
}

double BackoffState::cw(std::size_t k) const {
  if (k < 1 || k > cw_.size()) throw std::invalid_argument("stream index out of range");
  return cw_[k - 1];
}

double BackoffState::delta_cur(std::size_t k) const {
  if (k < 1 || k > delta_cur_.size()) throw std::invalid_argument("stream index out of range");
  return delta_cur_[k - 1];
}

void BackoffState::set_cw(std::size_t k, double cw) { cw_.at(k - 1) = cw; }
void BackoffState::set_delta_cur(std::size_t k, double delta) { delta_cur_.at(k - 1) = delta; }

void BackoffState::standard_update(std::size_t k, TxOutcome outcome,
                                   const ContentionParams& params) {
  double& cw = cw_.at(k - 1);
  switch (outcome) {
    case TxOutcome::kNoEvent:
      break;
    case TxOutcome::kSuccess:
      cw = params.cw_min;
      break;
    case TxOutcome::kCollision:
      cw = std::min(2.0 * cw, static_cast<double>(params.cw_max));
      break;
  }
}

int draw_backoff(const BackoffState& state, std::size_t k, Rng& rng) {
  const int hi = std::max(1, static_cast<int>(std::lround(state.cw(k))));
  return rng.uniform_int(1, hi);
}

ContentionResult resolve_contention(const std::map<ClientId, int>& backoffs) {
  if (backoffs.empty()) {
    throw std::invalid_argument("no contenders");
  }
  int best = backoffs.begin()->second;
  for (const auto& [id, b] : backoffs) best = std::min(best, b);
  ContentionResult result;
  result.winning_slots = best;
  for (const auto& [id, b] : backoffs) {
    if (b == best) result.colliders.insert(id);
  }
  if (result.colliders.size() == 1) {
    result.has_winner = true;
    result.winner = *result.colliders.begin();
    result.colliders.clear();
  }
  return result;
}

AngleUpdateResult angle_cw_update(BackoffState& state, std::size_t k, double theta,
                                  double snr_after_projection_db, double floor_db,
                                  const ContentionParams& params, TxOutcome outcome) {
  if (k <= 1) {
    throw std::invalid_argument("angle adjustment applies to streams after the first");
  }
  if (theta < 0.0 || theta > kPi / 2.0 + 1e-12) {
    throw std::domain_error("projection angle outside [0, pi/2]");
  }
  AngleUpdateResult result;
  if (is_zero_power(snr_after_projection_db) || snr_after_projection_db <= floor_db) {
    return result;  // give up; window and delta untouched
  }
  result.participate = true;

  state.standard_update(k, outcome, params);
  const double delta_last = state.delta_cur(k);
  const double cw_orig = state.cw(k) - delta_last;
  double cw = cw_orig - ((theta - kPi / 4.0) / (kPi / 4.0)) * cw_orig;
  cw = std::clamp(cw, static_cast<double>(params.cw_min),
                  static_cast<double>(params.cw_max));
  state.set_cw(k, cw);
  state.set_delta_cur(k, cw - cw_orig);
  return result;
}

}  // namespace mimomate
