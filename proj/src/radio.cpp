#include "radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace vanetflow::radio {

void RadioConfig::validate() const {
  auto fail = [](const char* key, const std::string& constraint, double v) {
    throw ConfigError(key, std::string(key) + " must be " + constraint +
                               " (got " + std::to_string(v) + ")");
  };
  if (!(tx_power > 0)) fail("radio.tx_power", "> 0", tx_power);
  if (!(gain_tx > 0)) fail("radio.gain_tx", "> 0", gain_tx);
  if (!(gain_rx > 0)) fail("radio.gain_rx", "> 0", gain_rx);
  if (!(wavelength > 0)) fail("radio.wavelength", "> 0", wavelength);
  if (!(system_loss >= 1)) fail("radio.system_loss", ">= 1", system_loss);
  if (!(tx_range > 0)) fail("radio.tx_range", "> 0", tx_range);
  if (!(interference_range >= tx_range)) {
    fail("radio.interference_range", ">= radio.tx_range", interference_range);
  }
  if (!(reception_prob >= 0 && reception_prob <= 1)) {
    fail("radio.reception_prob", "in [0, 1]", reception_prob);
  }
  if (backoff_min < 0) fail("radio.backoff_min", ">= 0", backoff_min);
  if (backoff_max < backoff_min) {
    fail("radio.backoff_max", ">= radio.backoff_min", backoff_max);
  }
  if (max_backoff_stage < 0 || max_backoff_stage > 20) {
    fail("radio.max_backoff_stage", "in [0, 20]", max_backoff_stage);
  }
}

double friis_received_power(double d, const RadioConfig& cfg) {
  if (!(d > 0.0)) {
    throw DomainError("friis_received_power: distance must be > 0 (got " +
                      std::to_string(d) + ")");
  }
  const double four_pi = 4.0 * std::numbers::pi;
  return cfg.tx_power * cfg.gain_tx * cfg.gain_rx * cfg.wavelength *
         cfg.wavelength / (four_pi * four_pi * d * d * cfg.system_loss);
}

double range_for_sensitivity(double sensitivity_dbm, const RadioConfig& cfg) {
  const double threshold_w = std::pow(10.0, sensitivity_dbm / 10.0) * 1e-3;
  // Pr(1 m) / Pr(d) = d^2
  return std::sqrt(friis_received_power(1.0, cfg) / threshold_w);
}

bool medium_busy(double me, std::span<const double> transmitting_positions,
                 const RadioConfig& cfg) {
  return std::any_of(
      transmitting_positions.begin(), transmitting_positions.end(),
      [&](double x) { return in_range(std::abs(x - me), cfg.interference_range); });
}

int draw_backoff(int stage, const RadioConfig& cfg, Rng& rng) {
  const int n = std::clamp(stage, 0, cfg.max_backoff_stage);
  const long factor = 1L << n;
  const long lo = factor * cfg.backoff_min;
  const long span = factor * (cfg.backoff_max - cfg.backoff_min) + 1;
  return static_cast<int>(lo + static_cast<long>(uniform01(rng) * double(span)));
}

MacTick mac_tick(const MacState& state, bool busy, const RadioConfig& cfg,
                 Rng& rng) {
  MacTick out{state, false};
  if (!state.pending_message) return out;
  if (state.backoff_remaining > 0) {
    --out.state.backoff_remaining;
    return out;
  }
  if (!busy) {
    out.transmit_now = true;
    out.state.backoff_stage = 0;
    out.state.pending_message.reset();
    return out;
  }
  out.state.backoff_stage =
      std::min(state.backoff_stage + 1, cfg.max_backoff_stage);
  out.state.backoff_remaining = draw_backoff(out.state.backoff_stage, cfg, rng);
  return out;
}

bool receive_roll(double d, const RadioConfig& cfg, Rng& rng) {
  if (!in_range(d, cfg.tx_range)) return false;
  return bernoulli(rng, cfg.reception_prob);
}

}  // namespace vanetflow::radio
