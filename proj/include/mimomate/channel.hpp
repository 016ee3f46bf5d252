#ifndef MIMOMATE_CHANNEL_HPP
#define MIMOMATE_CHANNEL_HPP

#include <complex>
#include <limits>
#include <vector>

#include "mimomate/rng.hpp"

namespace mimomate {

using Complex = std::complex<double>;
using ClientId = int;

/// Sentinel for a stream whose projected signal power is exactly zero.
/// Distinct from every finite SNR; rate mapping must treat it as undecodable.
inline constexpr double kZeroPowerDb = -std::numeric_limits<double>::infinity();

inline bool is_zero_power(double snr_db) { return snr_db == kZeroPowerDb; }

/// Residual fraction below which a vector counts as lying in a subspace.
/// Rank decisions must be deterministic, so the cut is a fixed constant.
inline constexpr double kInSpanTolerance = 1e-9;

/// Uplink channel from one client to every AP antenna.
struct ChannelVector {
  ClientId client_id = 0;
  std::vector<Complex> gains;  // one entry per AP antenna, nonzero norm

  std::size_t antennas() const { return gains.size(); }
};

/// Where a client sits relative to the AP and the SNR it sees when
/// transmitting alone.
struct ClientPlacement {
  ClientId client_id = 0;
  double distance_m = 0.0;
  double original_snr_db = 0.0;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Log-distance path loss calibrated at the cell edge: a client at
/// `radius_m` sees `snr_at_radius_db`, closer clients see more by
/// 10*exponent*log10(radius/d).
double path_loss_snr_db(double distance_m, double radius_m,
                        double snr_at_radius_db, double exponent);

/// Draws an i.i.d. Rayleigh channel (circularly-symmetric complex Gaussian
/// per antenna), scaled so the mean of ||h||^2 equals the placement's
/// original SNR in linear units.
ChannelVector sample_channel(Rng& rng, const ClientPlacement& placement,
                             std::size_t n_antennas);

/// Hermitian inner product <u,v> = sum conj(u_i) * v_i.
Complex inner_product(const ChannelVector& u, const ChannelVector& v);

double norm(const ChannelVector& h);

/// Angle between two channel directions, in [0, pi/2]. Scale invariant and
/// symmetric; pi/2 means orthogonal.
double inter_channel_angle(const ChannelVector& h_u, const ChannelVector& h_v);

/// Angle between h and the span of the ongoing channels: sin(theta) is the
/// fraction of h's norm surviving projection onto the orthogonal complement.
/// Empty `ongoing` leaves h untouched (pi/2); h inside the span gives 0.
double subspace_angle(const ChannelVector& h,
                      const std::vector<ChannelVector>& ongoing);

/// SNR left after zero-forcing projection at angle theta: linear SNR scaled
/// by sin^2(theta). theta = 0 yields the zero-power marker.
double projected_snr(double original_snr_db, double theta);

struct ChainLink {
  ChannelVector channel;
  double original_snr_db = 0.0;
};

/// Effective SNR per position of a ZF-SIC decode chain, in joining order.
/// Position 1 keeps its original SNR; position k is projected orthogonal to
/// the channels of positions 1..k-1. Chains longer than the antenna count
/// exceed the degrees of freedom and are rejected.
std::vector<double> zf_sic_snr_chain(const std::vector<ChainLink>& chain);

}  // namespace mimomate

#endif  // MIMOMATE_CHANNEL_HPP
