#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "random.hpp"

namespace vanetflow::dissemination {

enum class Direction { kBackward, kForward };

struct WarningMessage {
  std::uint64_t msg_id = 1;
  double origin_position = 0.0;
  double created_at = 0.0;
  double ttl_time = 120.0;
  double ttl_distance = 2000.0;
  Direction propagation = Direction::kBackward;
};

struct LedgerEntry {
  WarningMessage message;  // freshest copy received
  std::uint64_t n_front = 0;
  std::uint64_t n_back = 0;
  double first_received_at = 0.0;
  bool has_rebroadcast = false;
};

// Per-vehicle reception history. A vehicle with any entry is infected.
struct MessageLedger {
  std::vector<LedgerEntry> entries;

  const LedgerEntry* find(std::uint64_t msg_id) const;
  LedgerEntry* find(std::uint64_t msg_id);
  bool infected() const { return !entries.empty(); }
};

enum class PolicyKind { kFlooding, kEdge, kDistance, kMixed };

struct DisseminationPolicy {
  PolicyKind kind = PolicyKind::kMixed;
  double alpha = 1.0;
  bool operator==(const DisseminationPolicy&) const = default;
};

std::string_view to_string(PolicyKind kind);
// Throws ConfigError for an unknown name.
PolicyKind parse_policy_kind(std::string_view name);

// Counts one reception. Senders ahead (higher position) increment n_front,
// senders behind n_back. Throws DomainError when sender_pos == my_pos.
MessageLedger record_reception(MessageLedger ledger, const WarningMessage& msg,
                               double sender_pos, double my_pos, double now);

double rebroadcast_prob_bidirectional(std::uint64_t n_f, std::uint64_t n_b,
                                      double alpha);
double rebroadcast_prob_directional(std::uint64_t n_k, std::uint64_t n_k_opp,
                                    double alpha);
// Throws DomainError when d exceeds the transmission range.
double rebroadcast_prob_distance(double d_from_sender, double tx_range);
double rebroadcast_prob_mixed(std::uint64_t n_k, std::uint64_t n_k_opp,
                              double alpha, double d_from_sender,
                              double tx_range);

bool ttl_alive(const WarningMessage& msg, double now, double my_pos);

struct ReceptionGeometry {
  double d_from_sender = 0.0;
  double tx_range = 100.0;
  double my_pos = 0.0;
};

// One rebroadcast decision for one reception event. Flooding answers true
// only while the entry has not been rebroadcast; the caller records that.
bool should_rebroadcast(const DisseminationPolicy& policy,
                        const LedgerEntry& entry, const ReceptionGeometry& geo,
                        double now, Rng& rng);

}  // namespace vanetflow::dissemination
