#pragma once

#include <map>
#include <tuple>

#include "swarmnet/security.hpp"

namespace swarmnet::security::detail {

// Backend-side record of the highest counter each sender used under each
// session key. A nonce at or below it is a reuse.
class NonceLedger {
 public:
  void consume(const SessionKey& key, const Nonce& nonce);

 private:
  std::map<std::tuple<NodeId, NodeId, NodeId>, std::uint64_t> next_;
};

}  // namespace swarmnet::security::detail
