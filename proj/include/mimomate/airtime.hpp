#ifndef MIMOMATE_AIRTIME_HPP
#define MIMOMATE_AIRTIME_HPP

#include "mimomate/contention.hpp"

namespace mimomate {

// 802.11a OFDM frame constants. Control frames go out at the base rate.
inline constexpr double kPlcpUs = 20.0;          // preamble + SIGNAL
inline constexpr int kMacHeaderBytes = 28;       // header + FCS
inline constexpr int kAckBytes = 14;
inline constexpr int kRtsBytes = 20;
inline constexpr int kCtsBytes = 14;
inline constexpr double kControlRateMbps = 6.0;
inline constexpr double kMinFragmentUs = 4.0;    // one OFDM symbol of payload

inline double bytes_us(int bytes, double rate_mbps) {
  return static_cast<double>(bytes) * 8.0 / rate_mbps;
}

inline double mac_header_us(double rate_mbps) {
  return bytes_us(kMacHeaderBytes, rate_mbps);
}

inline double ack_us() { return kPlcpUs + bytes_us(kAckBytes, kControlRateMbps); }
inline double rts_us() { return kPlcpUs + bytes_us(kRtsBytes, kControlRateMbps); }
inline double cts_us() { return kPlcpUs + bytes_us(kCtsBytes, kControlRateMbps); }

inline double payload_us(int bytes, double rate_mbps) {
  return bytes_us(bytes, rate_mbps);
}

/// Full frame on air: PLCP, MAC header, payload.
inline double frame_us(int payload_bytes, double rate_mbps) {
  return kPlcpUs + mac_header_us(rate_mbps) + payload_us(payload_bytes, rate_mbps);
}

/// Matching announcement control frame: a minimal management frame carrying
/// one byte per matched position.
inline double announcement_us(std::size_t matched_members) {
  return kPlcpUs +
         bytes_us(kMacHeaderBytes + static_cast<int>(matched_members), kControlRateMbps);
}

}  // namespace mimomate

#endif  // MIMOMATE_AIRTIME_HPP
