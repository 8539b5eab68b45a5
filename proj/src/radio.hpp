#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "random.hpp"

namespace vanetflow::radio {

struct RadioConfig {
  double tx_power = 0.1;     // W
  double gain_tx = 1.0;
  double gain_rx = 1.0;
  double wavelength = 0.0508;  // m, 5.9 GHz
  double system_loss = 1.0;
  double tx_range = 100.0;            // Rc, m
  double interference_range = 200.0;  // Ri, m
  double reception_prob = 0.95;
  int backoff_min = 0;   // ticks
  int backoff_max = 15;  // ticks
  int max_backoff_stage = 5;

  void validate() const;

  bool operator==(const RadioConfig&) const = default;
};

struct MacState {
  int backoff_stage = 0;
  int backoff_remaining = 0;
  std::optional<std::uint64_t> pending_message;
};

struct MacTick {
  MacState state;
  bool transmit_now = false;
};

// Friis free-space received power in watts. Throws DomainError for d <= 0.
double friis_received_power(double d, const RadioConfig& cfg);

// Distance at which the Friis received power drops to `sensitivity_dbm`.
double range_for_sensitivity(double sensitivity_dbm, const RadioConfig& cfg);

inline bool in_range(double d, double range) { return d <= range; }

bool medium_busy(double me, std::span<const double> transmitting_positions,
                 const RadioConfig& cfg);

// Uniform integer in 2^min(n, max_stage) * [Bmin, Bmax].
int draw_backoff(int stage, const RadioConfig& cfg, Rng& rng);

// One MAC slot. The backoff timer keeps running while the medium is busy;
// a busy medium only matters once the timer has expired.
MacTick mac_tick(const MacState& state, bool busy, const RadioConfig& cfg,
                 Rng& rng);

bool receive_roll(double d, const RadioConfig& cfg, Rng& rng);

}  // namespace vanetflow::radio
