#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcons/digraph.hpp"

namespace qcons {

using Integer = std::int64_t;

// Intermediate width for cross-multiplication and sums of Integer.
__extension__ typedef __int128 WideInteger;

/// Ordering key for masses and states: larger z wins, ties broken by larger y.
struct Weight {
  Integer z = 0;
  Integer y = 0;

  friend bool operator==(const Weight&, const Weight&) = default;
  friend std::strong_ordering operator<=>(const Weight&, const Weight&) = default;
};

/// Compares two (z, y) pairs the way the leading mass is selected.
std::strong_ordering leading_order(Weight a, Weight b);

/// Unreduced integer ratio. Equality is value equality by cross-multiplication,
/// so 11/2 == 22/4; use the terms directly when the representation matters.
struct Fraction {
  Integer num = 0;
  Integer den = 1;

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return static_cast<WideInteger>(a.num) * b.den == static_cast<WideInteger>(b.num) * a.den;
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// The conserved quantity a node holds. z counts merged unit masses.
struct MassPair {
  Integer y = 0;
  Integer z = 0;

  Weight weight() const { return {z, y}; }
  bool empty() const { return z == 0; }

  friend bool operator==(const MassPair&, const MassPair&) = default;
};

/// A node's best-known candidate for the leading mass; q_s = y_s / z_s is its
/// running estimate of the network average.
struct StateTriple {
  Integer y_s = 0;
  Integer z_s = 1;

  Fraction q_s() const { return {y_s, z_s}; }
  Weight weight() const { return {z_s, y_s}; }

  friend bool operator==(const StateTriple&, const StateTriple&) = default;
};

struct NodeState {
  NodeId id = 0;
  MassPair mass;
  StateTriple state;
  bool s_br = false;  // broadcast state this round
  bool m_tr = false;  // unicast mass this round
  std::size_t rr_cursor = 0;
  std::uint64_t tx_count = 0;
  std::uint64_t comp_count = 0;

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

enum class MessageKind { broadcast, directed };

/// Broadcast carries (y_s, z_s) to every out-neighbor of the sender; Directed
/// carries a whole mass (y, z) to exactly one out-neighbor.
struct Message {
  MessageKind kind = MessageKind::broadcast;
  NodeId sender = 0;
  std::optional<NodeId> receiver;
  Integer y = 0;
  Integer z = 0;

  static Message broadcast(NodeId sender, const StateTriple& state) {
    return {MessageKind::broadcast, sender, std::nullopt, state.y_s, state.z_s};
  }
  static Message directed(NodeId sender, NodeId receiver, const MassPair& mass) {
    return {MessageKind::directed, sender, receiver, mass.y, mass.z};
  }

  friend bool operator==(const Message&, const Message&) = default;
};

/// Everything delivered to one node in one round.
struct Inbox {
  std::vector<StateTriple> states;
  std::vector<MassPair> masses;

  bool empty() const { return states.empty() && masses.empty(); }
};

struct NodeInit {
  NodeState node;
  Message broadcast;
};

/// Mass and state both start at (value, 1). The initial broadcast counts as
/// one transmission and the initialization as one computation.
NodeInit init_node(NodeId id, Integer initial_value);

/// Component-wise sum of the received masses into the node's own.
/// Throws ProtocolError on int64 overflow.
NodeState merge_masses(NodeState node, std::span<const MassPair> incoming);

/// Adopt the largest received state if it strictly beats ours; sets s_br.
NodeState apply_condition_1(NodeState node, std::span<const StateTriple> received);

/// Promote our own mass to state if it strictly beats the state; sets s_br.
NodeState apply_condition_2(NodeState node);

/// Mark a nonzero mass that the state strictly beats for forwarding; sets m_tr.
NodeState apply_condition_3(NodeState node);

struct Emission {
  NodeState node;
  std::vector<Message> messages;
};

/// Turns the flags into messages (Broadcast before Directed), advances the
/// round-robin cursor, zeroes a forwarded mass and clears both flags.
Emission emit(NodeState node, const PriorityMap& priorities);

struct RoundResult {
  NodeState node;
  std::vector<Message> messages;
  MassPair held_mass;   // after merging, before any unicast
  bool evaluated = false;
};

/// One synchronous round for one node. An empty inbox leaves the node
/// untouched; otherwise merge, conditions 1-3 and emit run in that order.
RoundResult node_round(NodeState node, const Inbox& inbox, const PriorityMap& priorities);

}  // namespace qcons
