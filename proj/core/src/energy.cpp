#include "swarmnet/energy.hpp"

#include <algorithm>

namespace swarmnet::energy {

const char* to_string(RadioState s) {
  switch (s) {
    case RadioState::kTx: return "tx";
    case RadioState::kRx: return "rx";
    case RadioState::kIdle: return "idle";
    case RadioState::kSleep: return "sleep";
  }
  return "unknown";
}

double EnergyParams::current(RadioState s) const {
  switch (s) {
    case RadioState::kTx: return tx_current_a;
    case RadioState::kRx: return rx_current_a;
    case RadioState::kIdle: return idle_current_a;
    case RadioState::kSleep: return sleep_current_a;
  }
  return 0.0;
}

std::vector<std::string> EnergyParams::validate() const {
  std::vector<std::string> errors;
  if (!(tx_current_a > 0.0 && rx_current_a > 0.0 && idle_current_a > 0.0 && sleep_current_a > 0.0))
    errors.emplace_back("energy currents must all be > 0");
  if (!(supply_voltage_v > 0.0)) errors.emplace_back("energy.supply_voltage_v must be > 0");
  if (!(initial_energy_j > 0.0)) errors.emplace_back("energy.initial_energy_j must be > 0");
  return errors;
}

std::vector<std::string> EnergyParams::warnings() const {
  std::vector<std::string> w;
  if (!(tx_current_a >= rx_current_a && rx_current_a >= idle_current_a &&
        idle_current_a >= sleep_current_a))
    w.emplace_back("energy currents are not ordered tx >= rx >= idle >= sleep");
  return w;
}

EnergyLedger make_ledger(const EnergyParams& p, SimTime start, RadioState initial_state) {
  EnergyLedger l;
  l.initial = p.initial_energy_j;
  l.residual = p.initial_energy_j;
  l.state = initial_state;
  l.state_since = start;
  return l;
}

namespace {

// Bills `joules` to `bucket`; returns the fraction actually affordable.
double spend(EnergyLedger& ledger, RadioState bucket, double joules) {
  if (joules <= 0.0) return 1.0;
  if (joules < ledger.residual) {
    ledger.residual -= joules;
    ledger.consumed[static_cast<int>(bucket)] += joules;
    return 1.0;
  }
  const double affordable = ledger.residual;
  ledger.consumed[static_cast<int>(bucket)] += affordable;
  ledger.residual = 0.0;
  ledger.alive = false;
  return affordable / joules;
}

}  // namespace

void transition(EnergyLedger& ledger, RadioState new_state, SimTime now, const EnergyParams& p) {
  if (!ledger.alive) {
    ++ledger.ignored_on_dead;
    return;
  }
  if (now < ledger.state_since) throw HardFault("energy transition before last state change");
  const double dt = (now - ledger.state_since).seconds();
  const double frac = spend(ledger, ledger.state, p.power_w(ledger.state) * dt);
  if (!ledger.alive) {
    const auto offset = static_cast<std::int64_t>(frac * static_cast<double>((now - ledger.state_since).us()));
    ledger.died_at = ledger.state_since + SimTime::from_us(offset);
    ledger.state_since = *ledger.died_at;
    return;
  }
  ledger.state = new_state;
  ledger.state_since = now;
}

void charge_processing(EnergyLedger& ledger, double seconds, SimTime now, const EnergyParams& p) {
  if (!ledger.alive) {
    ++ledger.ignored_on_dead;
    return;
  }
  spend(ledger, RadioState::kIdle, p.power_w(RadioState::kIdle) * seconds);
  if (!ledger.alive) ledger.died_at = now;
}

double normalized_energy(const EnergyLedger& ledger, const EnergyParams& p) {
  if (!ledger.alive) return 0.0;
  return std::clamp(ledger.residual / p.initial_energy_j, 0.0, 1.0);
}

}  // namespace swarmnet::energy
