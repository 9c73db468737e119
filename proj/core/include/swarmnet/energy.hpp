#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmnet/types.hpp"

namespace swarmnet::energy {

enum class RadioState : std::uint8_t { kTx = 0, kRx = 1, kIdle = 2, kSleep = 3 };

const char* to_string(RadioState s);

/// Radio current draw per state (amperes), supply voltage and battery size.
/// Defaults are the CC2420-derived values of the ns-3 WiFi radio energy model.
struct EnergyParams {
  double tx_current_a = 0.0174;
  double rx_current_a = 0.0197;
  double idle_current_a = 0.000273;
  double sleep_current_a = 0.000033;
  double supply_voltage_v = 3.0;
  double initial_energy_j = 100.0;

  double current(RadioState s) const;
  double power_w(RadioState s) const { return current(s) * supply_voltage_v; }

  std::vector<std::string> validate() const;
  /// Non-fatal findings, e.g. tx < rx.
  std::vector<std::string> warnings() const;
};

struct EnergyLedger {
  double initial = 0.0;
  double residual = 0.0;
  std::array<double, 4> consumed{};  // indexed by RadioState
  RadioState state = RadioState::kIdle;
  SimTime state_since;
  bool alive = true;
  std::optional<SimTime> died_at;
  std::uint64_t ignored_on_dead = 0;

  double total_consumed() const { return consumed[0] + consumed[1] + consumed[2] + consumed[3]; }
};

EnergyLedger make_ledger(const EnergyParams& p, SimTime start, RadioState initial_state);

/// Charges the elapsed interval to the current state, then switches. A node
/// whose battery runs out mid-interval dies at the exact instant it empties.
void transition(EnergyLedger& ledger, RadioState new_state, SimTime now, const EnergyParams& p);

/// Brings the ledger up to `now` without changing state.
inline void settle(EnergyLedger& ledger, SimTime now, const EnergyParams& p) {
  transition(ledger, ledger.state, now, p);
}

/// Processing (crypto, trust bookkeeping) billed as extra active time at the
/// idle current.
void charge_processing(EnergyLedger& ledger, double seconds, SimTime now, const EnergyParams& p);

double normalized_energy(const EnergyLedger& ledger, const EnergyParams& p);

}  // namespace swarmnet::energy
