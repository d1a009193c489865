#include <doctest.h>

#include <vector>

#include "qcons/error.hpp"
#include "qcons/experiment.hpp"
#include "qcons/protocol.hpp"

using namespace qcons;

namespace {

NodeState node_with(NodeId id, MassPair mass, StateTriple state) {
  NodeState n = init_node(id, 0).node;
  n.mass = mass;
  n.state = state;
  return n;
}

}  // namespace

TEST_CASE("init_node") {
  const auto [v1, hello] = init_node(0, 2);
  CHECK(v1.mass == MassPair{2, 1});
  CHECK(v1.state == StateTriple{2, 1});
  CHECK(v1.state.q_s().num == 2);
  CHECK(v1.state.q_s().den == 1);
  CHECK_FALSE(v1.s_br);
  CHECK_FALSE(v1.m_tr);
  CHECK(hello == Message::broadcast(0, {2, 1}));
  CHECK(v1.tx_count == 1);
  CHECK(v1.comp_count == 1);

  CHECK(init_node(5, 0).node.mass == MassPair{0, 1});
  CHECK(init_node(5, 0).node.state == StateTriple{0, 1});
  CHECK(init_node(5, -5).node.mass == MassPair{-5, 1});
  CHECK(init_node(5, -5).node.state == StateTriple{-5, 1});
}

TEST_CASE("merge_masses") {
  const NodeState v4 = node_with(3, {9, 1}, {9, 1});
  const std::vector<MassPair> from_v1{{2, 1}};
  CHECK(merge_masses(v4, from_v1).mass == MassPair{11, 2});
  CHECK(merge_masses(v4, {}).mass == MassPair{9, 1});

  // Oracle: element-wise sum.
  const NodeState empty = node_with(0, {0, 0}, {5, 1});
  const std::vector<MassPair> two{{3, 1}, {4, 1}};
  CHECK(merge_masses(empty, two).mass == MassPair{3 + 4, 1 + 1});

  const std::vector<MassPair> huge{{INT64_MAX, 1}};
  CHECK_THROWS_AS(merge_masses(node_with(0, {1, 1}, {1, 1}), huge), ProtocolError);
}

TEST_CASE("leading_order") {
  CHECK(leading_order({2, 11}, {1, 9}) > 0);
  CHECK(leading_order({1, 9}, {1, 7}) > 0);
  CHECK(leading_order({3, 5}, {3, 5}) == 0);
  CHECK(leading_order({1, 100}, {2, -100}) < 0);
}

TEST_CASE("Fraction equality is value equality") {
  CHECK(Fraction{11, 2} == Fraction{22, 4});
  CHECK_FALSE(Fraction{11, 2} == Fraction{11, 4});
  CHECK(Fraction{-3, 1} == Fraction{-6, 2});
}

TEST_CASE("condition 1 adopts a strictly larger received state") {
  const NodeState v1 = node_with(0, {2, 1}, {2, 1});
  const std::vector<StateTriple> received{{4, 1}, {7, 1}};
  const NodeState after = apply_condition_1(v1, received);
  CHECK(after.state == StateTriple{7, 1});
  CHECK(after.s_br);

  const NodeState v4 = node_with(3, {9, 1}, {9, 1});
  const std::vector<StateTriple> smaller{{7, 1}};
  CHECK(apply_condition_1(v4, smaller) == v4);
  CHECK(apply_condition_1(v4, {}) == v4);

  const std::vector<StateTriple> equal{{9, 1}};
  CHECK_FALSE(apply_condition_1(v4, equal).s_br);

  // Max z first, then max y among those.
  const std::vector<StateTriple> mixed{{50, 1}, {3, 2}, {8, 2}, {-1, 2}};
  CHECK(apply_condition_1(v4, mixed).state == StateTriple{8, 2});
}

TEST_CASE("condition 2 promotes a dominating own mass") {
  const NodeState v4 = node_with(3, {11, 2}, {9, 1});
  const NodeState after = apply_condition_2(v4);
  CHECK(after.state == StateTriple{11, 2});
  CHECK(after.s_br);

  const NodeState drained = node_with(1, {0, 0}, {9, 1});
  CHECK(apply_condition_2(drained) == drained);

  const NodeState same = node_with(2, {7, 1}, {7, 1});
  CHECK_FALSE(apply_condition_2(same).s_br);
}

TEST_CASE("condition 3 marks a follower mass") {
  CHECK(apply_condition_3(node_with(0, {2, 1}, {7, 1})).m_tr);
  CHECK(apply_condition_3(node_with(0, {4, 1}, {11, 2})).m_tr);
  CHECK_FALSE(apply_condition_3(node_with(0, {0, 0}, {7, 1})).m_tr);
  CHECK_FALSE(apply_condition_3(node_with(0, {11, 2}, {11, 2})).m_tr);
}

TEST_CASE("emit") {
  const Digraph g = example_digraph();
  const PriorityMap p = example_priorities(g);

  SUBCASE("round-robin cursor persists across emissions") {
    NodeState v1 = node_with(0, {2, 1}, {7, 1});
    v1.m_tr = true;
    auto first = emit(v1, p);
    REQUIRE(first.messages.size() == 1);
    CHECK(first.messages[0] == Message::directed(0, 3, {2, 1}));
    CHECK(first.node.mass == MassPair{0, 0});
    CHECK(first.node.rr_cursor == 1);

    NodeState again = first.node;
    again.mass = {4, 1};
    again.m_tr = true;
    auto second = emit(again, p);
    CHECK(second.messages[0].receiver == NodeId{2});
    CHECK(second.node.rr_cursor == 0);
  }
  SUBCASE("no flags, no messages") {
    const NodeState quiet = node_with(0, {2, 1}, {2, 1});
    const auto out = emit(quiet, p);
    CHECK(out.messages.empty());
    CHECK(out.node.tx_count == quiet.tx_count);
  }
  SUBCASE("both flags: broadcast then directed, two transmissions") {
    NodeState v1 = node_with(0, {2, 1}, {7, 1});
    v1.s_br = true;
    v1.m_tr = true;
    const auto out = emit(v1, p);
    REQUIRE(out.messages.size() == 2);
    CHECK(out.messages[0] == Message::broadcast(0, {7, 1}));
    CHECK(out.messages[1].kind == MessageKind::directed);
    CHECK(out.node.tx_count == v1.tx_count + 2);
    CHECK_FALSE(out.node.s_br);
    CHECK_FALSE(out.node.m_tr);
  }
  SUBCASE("zero-mass unicast is a protocol error") {
    NodeState bad = node_with(0, {0, 0}, {7, 1});
    bad.m_tr = true;
    CHECK_THROWS_AS(emit(bad, p), ProtocolError);
  }
}

TEST_CASE("node_round") {
  const Digraph g = example_digraph();
  const PriorityMap p = example_priorities(g);

  SUBCASE("v4 merges v1's mass and broadcasts the new state") {
    const NodeState v4 = node_with(3, {9, 1}, {9, 1});
    Inbox inbox;
    inbox.states = {{7, 1}};
    inbox.masses = {{2, 1}};
    const RoundResult r = node_round(v4, inbox, p);
    CHECK(r.node.state == StateTriple{11, 2});
    CHECK(r.node.mass == MassPair{11, 2});
    CHECK(r.held_mass == MassPair{11, 2});
    REQUIRE(r.messages.size() == 1);
    CHECK(r.messages[0] == Message::broadcast(3, {11, 2}));
    CHECK(r.node.comp_count == v4.comp_count + 1);
    CHECK(r.evaluated);
  }
  SUBCASE("empty inbox hibernates") {
    const NodeState v2 = node_with(1, {0, 0}, {9, 1});
    const RoundResult r = node_round(v2, Inbox{}, p);
    CHECK(r.node == v2);
    CHECK(r.messages.empty());
    CHECK_FALSE(r.evaluated);
  }
  SUBCASE("held mass is reported before the unicast zeroes it") {
    const NodeState v1 = node_with(0, {0, 0}, {7, 1});
    Inbox inbox;
    inbox.states = {{9, 1}};
    inbox.masses = {{4, 1}};
    const RoundResult r = node_round(v1, inbox, p);
    CHECK(r.held_mass == MassPair{4, 1});
    CHECK(r.node.mass == MassPair{0, 0});
    CHECK(r.node.state == StateTriple{9, 1});
  }
}
