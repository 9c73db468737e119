#include "swarmnet/trust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

namespace swarmnet::trust {

std::vector<std::string> TrustParams::validate() const {
  std::vector<std::string> errors;
  if (!(delta_alpha > 0.0 && delta_beta > 0.0))
    errors.emplace_back("trust increments must be > 0");
  if (!(lambda >= 0.0)) errors.emplace_back("trust.lambda must be >= 0");
  if (!(isolation_threshold >= 0.0 && isolation_threshold < 1.0))
    errors.emplace_back("trust.isolation_threshold must lie in [0, 1)");
  if (!(prior_alpha > 0.0 && prior_beta > 0.0))
    errors.emplace_back("trust prior components must be > 0");
  return errors;
}

double expected_trust(const TrustRecord& r) { return r.alpha / (r.alpha + r.beta); }

namespace {

// Multiplies (a, b) by `factor`. A long silence can push the products below
// the normal range or to zero; the pair is then rescaled so its smaller
// component sits at kTiny, which keeps the ratio and alpha, beta > 0.
std::pair<double, double> scaled(double a, double b, double factor) {
  constexpr double kTiny = std::numeric_limits<double>::min() * 1e10;
  if (std::min(a * factor, b * factor) >= kTiny) return {a * factor, b * factor};
  const double k = kTiny / std::min(a, b);
  return {a * k, b * k};
}

double decay_factor(const TrustRecord& r, SimTime now, const TrustParams& p) {
  return std::exp(-p.lambda * (now - r.last_update).seconds());
}

}  // namespace

TrustRecord decay(const TrustRecord& r, SimTime now, const TrustParams& p) {
  if (now < r.last_update) throw HardFault("trust decay before last update");
  const auto [a, b] = scaled(r.alpha, r.beta, decay_factor(r, now, p));
  return TrustRecord{a, b, now};
}

TrustRecord update(const TrustRecord& r, Verdict event, SimTime now, const TrustParams& p) {
  if (now < r.last_update) throw HardFault("trust update out of event order");
  const double factor = decay_factor(r, now, p);
  const double da = event == Verdict::kPositive ? p.delta_alpha : 0.0;
  const double db = event == Verdict::kNegative ? p.delta_beta : 0.0;

  TrustRecord out;
  if (p.order == DecayOrder::kIncrementThenDecay) {
    std::tie(out.alpha, out.beta) = scaled(r.alpha + da, r.beta + db, factor);
  } else {
    std::tie(out.alpha, out.beta) = scaled(r.alpha, r.beta, factor);
    out.alpha += da;
    out.beta += db;
  }
  out.last_update = now;
  return out;
}

bool is_isolated(const TrustRecord& r, const TrustParams& p) {
  return expected_trust(r) < p.isolation_threshold;
}

const TrustRecord& TrustTable::observe(NodeId peer, Verdict v, SimTime now, const TrustParams& p) {
  auto& slot = records_.at(peer);
  if (!slot) slot = prior_record(p, now);
  slot = update(*slot, v, now, p);
  return *slot;
}

double TrustTable::score(NodeId peer, const TrustParams& p) const {
  const auto& slot = records_.at(peer);
  if (!slot) return p.prior_alpha / (p.prior_alpha + p.prior_beta);
  return expected_trust(*slot);
}

bool TrustTable::distrusts(NodeId peer, const TrustParams& p) const {
  const auto& slot = records_.at(peer);
  return slot && is_isolated(*slot, p);
}

}  // namespace swarmnet::trust
