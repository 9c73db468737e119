#pragma once

// Randomized property suites. The unit tests and the acceptance driver both
// run them, so each returns counters instead of asserting.

#include <cstdint>
#include <string>
#include <vector>

#include "swarmnet/clustering.hpp"
#include "swarmnet/security.hpp"

namespace swarmnet::props {

struct TrustReport {
  std::size_t sequences = 0;
  std::size_t steps = 0;
  std::size_t monotonicity_failures = 0;
  double max_decay_score_error = 0.0;    // |E[T] before - E[T] after| under pure decay
  double max_evidence_decay_error = 0.0; // relative error of (a+b) against e^{-lambda dt}
  double min_score = 1.0;
  double max_score = 0.0;
};

TrustReport trust_sequences(std::size_t count, std::uint64_t seed);

/// Independent greedy election over an adjacency matrix: linear argmax with
/// the lower id on ties, enrolment by ascending id.
clustering::Election greedy_oracle(const std::vector<clustering::CandidacyScore>& cands,
                                   const std::vector<std::vector<bool>>& adj);

struct ElectionReport {
  std::size_t graphs = 0;
  std::size_t oracle_mismatches = 0;
  std::size_t permutation_failures = 0;
  std::size_t adjacent_heads = 0;  // two heads sharing an edge
  std::size_t uncovered = 0;       // node neither head nor member of a neighbouring head
};

ElectionReport election_oracle(std::size_t graphs, std::uint64_t seed);

struct CryptoCase {
  std::string name;
  bool expected = false;  // accept?
  bool observed = false;
};

/// Round trip, forgery, tamper, key agreement and nonce-freshness cases.
/// Deterministic case list so two backends can be compared entry by entry.
std::vector<CryptoCase> crypto_suite(security::BackendKind kind);

struct FadingReport {
  double shape = 0.0;
  std::size_t draws = 0;
  double mean = 0.0;
  double variance = 0.0;
  double max_abs_dev = 0.0;  // largest |g - 1|
};

FadingReport fading_draws(double shape, std::size_t draws, std::uint64_t seed);

}  // namespace swarmnet::props
