#include "qcons/protocol.hpp"

#include <algorithm>
#include <string>

#include "qcons/error.hpp"

namespace qcons {

namespace {

Integer checked_add(Integer a, Integer b) {
  Integer out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ProtocolError("integer overflow while merging masses");
  }
  return out;
}

}  // namespace

std::strong_ordering leading_order(Weight a, Weight b) { return a <=> b; }

NodeInit init_node(NodeId id, Integer initial_value) {
  NodeState node;
  node.id = id;
  node.mass = {initial_value, 1};
  node.state = {initial_value, 1};
  node.tx_count = 1;
  node.comp_count = 1;
  return {node, Message::broadcast(id, node.state)};
}

NodeState merge_masses(NodeState node, std::span<const MassPair> incoming) {
  for (const MassPair& m : incoming) {
    node.mass.y = checked_add(node.mass.y, m.y);
    node.mass.z = checked_add(node.mass.z, m.z);
  }
  return node;
}

NodeState apply_condition_1(NodeState node, std::span<const StateTriple> received) {
  if (received.empty()) {
    return node;
  }
  const auto best = std::max_element(
      received.begin(), received.end(),
      [](const StateTriple& a, const StateTriple& b) { return a.weight() < b.weight(); });
  if (leading_order(best->weight(), node.state.weight()) > 0) {
    node.state = *best;
    node.s_br = true;
  }
  return node;
}

NodeState apply_condition_2(NodeState node) {
  if (leading_order(node.mass.weight(), node.state.weight()) > 0) {
    node.state = {node.mass.y, node.mass.z};
    node.s_br = true;
  }
  return node;
}

NodeState apply_condition_3(NodeState node) {
  const MassPair& m = node.mass;
  const StateTriple& s = node.state;
  if ((0 < m.z && m.z < s.z_s) || (m.z == s.z_s && m.y < s.y_s)) {
    node.m_tr = true;
  }
  return node;
}

Emission emit(NodeState node, const PriorityMap& priorities) {
  Emission out;
  if (node.s_br) {
    out.messages.push_back(Message::broadcast(node.id, node.state));
  }
  if (node.m_tr) {
    if (node.mass.empty()) {
      throw ProtocolError("node " + std::to_string(node.id + 1) + " tried to unicast a zero mass");
    }
    const auto order = priorities.order(node.id);
    if (order.empty()) {
      throw ProtocolError("node " + std::to_string(node.id + 1) +
                          " must forward its mass but has no out-neighbors");
    }
    out.messages.push_back(Message::directed(node.id, order[node.rr_cursor], node.mass));
    node.rr_cursor = (node.rr_cursor + 1) % order.size();
    node.mass = {};
  }
  node.tx_count += out.messages.size();
  node.s_br = false;
  node.m_tr = false;
  out.node = node;
  return out;
}

RoundResult node_round(NodeState node, const Inbox& inbox, const PriorityMap& priorities) {
  if (inbox.empty()) {
    return {node, {}, node.mass, false};
  }
  node = merge_masses(node, inbox.masses);
  const MassPair held = node.mass;
  node = apply_condition_1(node, inbox.states);
  node = apply_condition_2(node);
  node = apply_condition_3(node);
  ++node.comp_count;
  auto [after, messages] = emit(node, priorities);
  return {after, std::move(messages), held, true};
}

}  // namespace qcons
