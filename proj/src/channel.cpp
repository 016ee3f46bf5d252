#include "mimomate/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mimomate {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_same_length(const ChannelVector& a, const ChannelVector& b) {
  if (a.antennas() != b.antennas()) {
    throw std::invalid_argument("invalid channel: antenna count mismatch");
  }
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (linear <= 0.0) return kZeroPowerDb;
  return 10.0 * std::log10(linear);
}

double path_loss_snr_db(double distance_m, double radius_m,
                        double snr_at_radius_db, double exponent) {
  if (distance_m <= 0.0 || radius_m <= 0.0) {
    throw std::invalid_argument("invalid configuration: nonpositive distance");
  }
  return snr_at_radius_db + 10.0 * exponent * std::log10(radius_m / distance_m);
}

ChannelVector sample_channel(Rng& rng, const ClientPlacement& placement,
                             std::size_t n_antennas) {
  if (n_antennas == 0) {
    throw std::invalid_argument("invalid configuration: antenna count must be >= 1");
  }
  // Per-antenna variance snr/N makes E[||h||^2] equal the linear SNR.
  const double snr_linear = db_to_linear(placement.original_snr_db);
  const double sigma = std::sqrt(snr_linear / static_cast<double>(n_antennas));
  ChannelVector h;
  h.client_id = placement.client_id;
  h.gains.reserve(n_antennas);
  for (std::size_t i = 0; i < n_antennas; ++i) {
    const double re = rng.normal() * sigma / std::sqrt(2.0);
    const double im = rng.normal() * sigma / std::sqrt(2.0);
    h.gains.emplace_back(re, im);
  }
  return h;
}

Complex inner_product(const ChannelVector& u, const ChannelVector& v) {
  check_same_length(u, v);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < u.gains.size(); ++i) {
    acc += std::conj(u.gains[i]) * v.gains[i];
  }
  return acc;
}

double norm(const ChannelVector& h) {
  double acc = 0.0;
  for (const Complex& g : h.gains) acc += std::norm(g);
  return std::sqrt(acc);
}

double inter_channel_angle(const ChannelVector& h_u, const ChannelVector& h_v) {
  check_same_length(h_u, h_v);
  const double nu = norm(h_u);
  const double nv = norm(h_v);
  if (nu == 0.0 || nv == 0.0) {
    throw std::invalid_argument("invalid channel: zero-norm vector");
  }
  const double c = std::abs(inner_product(h_u, h_v)) / (nu * nv);
  return std::acos(std::clamp(c, 0.0, 1.0));
}

double subspace_angle(const ChannelVector& h,
                      const std::vector<ChannelVector>& ongoing) {
  const double nh = norm(h);
  if (nh == 0.0) {
    throw std::invalid_argument("invalid channel: zero-norm vector");
  }
  if (ongoing.empty()) return kPi / 2.0;

  // Orthonormal basis of span(ongoing) by modified Gram-Schmidt; vectors
  // already inside the partial span contribute nothing and are dropped.
  std::vector<ChannelVector> basis;
  for (const ChannelVector& v : ongoing) {
    check_same_length(h, v);
    ChannelVector r = v;
    for (const ChannelVector& q : basis) {
      const Complex coef = inner_product(q, r);
      for (std::size_t i = 0; i < r.gains.size(); ++i) {
        r.gains[i] -= coef * q.gains[i];
      }
    }
    const double nr = norm(r);
    if (nr > kInSpanTolerance * norm(v)) {
      for (Complex& g : r.gains) g /= nr;
      basis.push_back(std::move(r));
    }
  }

  ChannelVector residual = h;
  for (const ChannelVector& q : basis) {
    const Complex coef = inner_product(q, residual);
    for (std::size_t i = 0; i < residual.gains.size(); ++i) {
      residual.gains[i] -= coef * q.gains[i];
    }
  }
  const double frac = norm(residual) / nh;
  if (frac < kInSpanTolerance) return 0.0;
  return std::asin(std::clamp(frac, 0.0, 1.0));
}

double projected_snr(double original_snr_db, double theta) {
  if (theta < 0.0 || theta > kPi / 2.0 + 1e-12) {
    throw std::domain_error("projection angle outside [0, pi/2]");
  }
  const double s = std::sin(theta);
  if (s <= 0.0) return kZeroPowerDb;
  return linear_to_db(db_to_linear(original_snr_db) * s * s);
}

std::vector<double> zf_sic_snr_chain(const std::vector<ChainLink>& chain) {
  if (chain.empty()) return {};
  const std::size_t n_antennas = chain.front().channel.antennas();
  if (chain.size() > n_antennas) {
    throw std::invalid_argument(
        "degrees of freedom exceeded: chain longer than antenna count");
  }
  std::vector<double> out;
  out.reserve(chain.size());
  std::vector<ChannelVector> earlier;
  for (const ChainLink& link : chain) {
    const double theta = subspace_angle(link.channel, earlier);
    out.push_back(projected_snr(link.original_snr_db, theta));
    earlier.push_back(link.channel);
  }
  return out;
}

}  // namespace mimomate
