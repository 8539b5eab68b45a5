#include "dissemination.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace vanetflow::dissemination {

const LedgerEntry* MessageLedger::find(std::uint64_t msg_id) const {
  for (const auto& e : entries) {
    if (e.message.msg_id == msg_id) return &e;
  }
  return nullptr;
}

LedgerEntry* MessageLedger::find(std::uint64_t msg_id) {
  for (auto& e : entries) {
    if (e.message.msg_id == msg_id) return &e;
  }
  return nullptr;
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFlooding: return "flooding";
    case PolicyKind::kEdge: return "edge";
    case PolicyKind::kDistance: return "distance";
    case PolicyKind::kMixed: return "mixed";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "flooding") return PolicyKind::kFlooding;
  if (name == "edge") return PolicyKind::kEdge;
  if (name == "distance") return PolicyKind::kDistance;
  if (name == "mixed") return PolicyKind::kMixed;
  throw ConfigError("policy", "policy must be one of flooding|edge|distance|mixed"
                              " (got '" + std::string(name) + "')");
}

MessageLedger record_reception(MessageLedger ledger, const WarningMessage& msg,
                               double sender_pos, double my_pos, double now) {
  if (sender_pos == my_pos) {
    throw DomainError("record_reception: sender and receiver share position " +
                      std::to_string(my_pos));
  }
  LedgerEntry* entry = ledger.find(msg.msg_id);
  if (entry == nullptr) {
    ledger.entries.push_back(LedgerEntry{msg, 0, 0, now, false});
    entry = &ledger.entries.back();
  } else if (msg.created_at > entry->message.created_at) {
    entry->message = msg;
  }
  if (sender_pos > my_pos) {
    ++entry->n_front;
  } else {
    ++entry->n_back;
  }
  return ledger;
}

double rebroadcast_prob_bidirectional(std::uint64_t n_f, std::uint64_t n_b,
                                      double alpha) {
  if (n_f == 0 || n_b == 0) return 1.0;
  const double diff = n_f > n_b ? double(n_f - n_b) : double(n_b - n_f);
  return 1.0 - std::exp(-alpha * diff / double(n_f + n_b));
}

double rebroadcast_prob_directional(std::uint64_t n_k, std::uint64_t n_k_opp,
                                    double alpha) {
  if (n_k == 0) return 1.0;
  return 1.0 - std::exp(-alpha * double(n_k) / double(n_k + n_k_opp));
}

double rebroadcast_prob_distance(double d_from_sender, double tx_range) {
  if (d_from_sender > tx_range || d_from_sender < 0.0) {
    throw DomainError("rebroadcast_prob_distance: distance " +
                      std::to_string(d_from_sender) +
                      " outside [0, tx_range]");
  }
  return std::min(1.0, d_from_sender / tx_range);
}

double rebroadcast_prob_mixed(std::uint64_t n_k, std::uint64_t n_k_opp,
                              double alpha, double d_from_sender,
                              double tx_range) {
  return std::max(rebroadcast_prob_directional(n_k, n_k_opp, alpha),
                  rebroadcast_prob_distance(d_from_sender, tx_range));
}

bool ttl_alive(const WarningMessage& msg, double now, double my_pos) {
  return now - msg.created_at <= msg.ttl_time &&
         std::abs(my_pos - msg.origin_position) <= msg.ttl_distance;
}

bool should_rebroadcast(const DisseminationPolicy& policy,
                        const LedgerEntry& entry, const ReceptionGeometry& geo,
                        double now, Rng& rng) {
  if (!ttl_alive(entry.message, now, geo.my_pos)) return false;

  // Counts from the direction the message travels in.
  const bool backward = entry.message.propagation == Direction::kBackward;
  const std::uint64_t n_k = backward ? entry.n_front : entry.n_back;
  const std::uint64_t n_opp = backward ? entry.n_back : entry.n_front;

  double p = 0.0;
  switch (policy.kind) {
    case PolicyKind::kFlooding:
      return !entry.has_rebroadcast;
    case PolicyKind::kEdge:
      p = rebroadcast_prob_directional(n_k, n_opp, policy.alpha);
      break;
    case PolicyKind::kDistance:
      p = rebroadcast_prob_distance(geo.d_from_sender, geo.tx_range);
      break;
    case PolicyKind::kMixed:
      p = rebroadcast_prob_mixed(n_k, n_opp, policy.alpha, geo.d_from_sender,
                                 geo.tx_range);
      break;
  }
  return bernoulli(rng, p);
}

}  // namespace vanetflow::dissemination
