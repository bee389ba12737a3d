#include "doctest.h"

#include <stdexcept>
#include <algorithm>

#include "copesim/mac.hpp"

using namespace copesim;

TEST_CASE("literal shares reproduce the closed forms") {
    TopologyComponent cross5 = build_component(Kind::Cross, 5);
    TopologyComponent x5 = build_component(Kind::X, 5, 2);

    ShareVector plain = flow_fair_shares(cross5, false, MprConfig{2, false}, Traffic::Unicast,
                                         FlowFairFormula::Literal);
    CHECK(plain.s_edge == Rational(1, 7));
    CHECK(plain.s_center == Rational(5, 7));

    ShareVector xnc = flow_fair_shares(x5, true, MprConfig{1, false}, Traffic::Unicast,
                                       FlowFairFormula::Literal);
    CHECK(xnc.s_edge == Rational(1, 7));
    CHECK(xnc.s_center == Rational(3, 7));

    // Broadcast with m=4 on X: the relay owes one extra degree of freedom.
    ShareVector xb4 = flow_fair_shares(x5, true, MprConfig{4, false}, Traffic::Broadcast,
                                       FlowFairFormula::Literal);
    CHECK(xb4.s_edge == Rational(1, 5));
    CHECK(xb4.s_center == Rational(4, 5));
}

TEST_CASE("generalized shares follow the service cycle") {
    TopologyComponent cross5 = build_component(Kind::Cross, 5);
    ShareVector g = flow_fair_shares(cross5, true, MprConfig{1, false}, Traffic::Unicast,
                                     FlowFairFormula::Generalized);
    // 4 edge slots, 1 coded + 1 own at the relay.
    CHECK(g.s_edge == Rational(1, 6));
    CHECK(g.s_center == Rational(1, 3));

    ScheduleCycle cyc = schedule_cycle(cross5, true, MprConfig{1, false}, Traffic::Unicast);
    CHECK(cyc.edge_slots == 4);
    CHECK(cyc.relay_tx == 1);
    CHECK(cyc.length() == 6);
}

TEST_CASE("share normalization holds exactly") {
    for (int n : {3, 5, 9}) {
        for (int m : {1, 2, 4}) {
            for (bool nc : {false, true}) {
                for (Traffic traffic : {Traffic::Unicast, Traffic::Broadcast}) {
                    for (Kind kind : {Kind::Cross, Kind::X}) {
                        TopologyComponent c = build_component(kind, n, (n - 1) / 2);
                        for (auto formula :
                             {FlowFairFormula::Literal, FlowFairFormula::Generalized}) {
                            ShareVector sv =
                                flow_fair_shares(c, nc, MprConfig{m, false}, traffic, formula);
                            CHECK(sv.normalization(c.edge_count()) == Rational(1));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("node-fair transmit sets") {
    TopologyComponent cross5 = build_component(Kind::Cross, 5);

    SUBCASE("m=2 pairs opposite nodes") {
        SlotScheduler s(cross5, MacKind::NodeFair, MprConfig{2, false}, false, Traffic::Unicast);
        CHECK(s.next_transmit_set({1, 2, 3, 4, 5}) == std::vector<Node>{1, 3});
        CHECK(s.next_transmit_set({1, 2, 3, 4, 5}) == std::vector<Node>{2, 4});
        CHECK(s.next_transmit_set({1, 2, 3, 4, 5}) == std::vector<Node>{5});
    }
    SUBCASE("m=4 drains all edges at once") {
        SlotScheduler s(cross5, MacKind::NodeFair, MprConfig{4, false}, false, Traffic::Unicast);
        CHECK(s.next_transmit_set({1, 2, 3, 4}) == std::vector<Node>{1, 2, 3, 4});
    }
    SUBCASE("single backlogged node transmits alone") {
        SlotScheduler s(cross5, MacKind::NodeFair, MprConfig{1, false}, false, Traffic::Unicast);
        CHECK(s.next_transmit_set({5}) == std::vector<Node>{5});
    }
    SUBCASE("coded broadcast with m=4 pairs opposites for overhearing") {
        SlotScheduler s(cross5, MacKind::NodeFair, MprConfig{4, false}, true, Traffic::Broadcast);
        CHECK(s.next_transmit_set({1, 2, 3, 4, 5}) == std::vector<Node>{1, 3});
        CHECK(s.next_transmit_set({1, 2, 3, 4, 5}) == std::vector<Node>{2, 4});
    }
    SUBCASE("cap2 limits the drain to opposite pairs") {
        SlotScheduler s(cross5, MacKind::NodeFair, MprConfig{4, true}, true, Traffic::Unicast);
        CHECK(s.next_transmit_set({1, 2, 3, 4, 5}) == std::vector<Node>{1, 3});
    }
}

TEST_CASE("node-fair m=1 grants stay within one of the even split") {
    TopologyComponent cross5 = build_component(Kind::Cross, 5);
    SlotScheduler s(cross5, MacKind::NodeFair, MprConfig{1, false}, false, Traffic::Unicast);
    const int T = 1013;
    for (int t = 0; t < T; ++t)
        s.next_transmit_set({1, 2, 3, 4, 5});
    for (Node v = 1; v <= 5; ++v)
        CHECK(std::abs(s.grants()[v] - T / 5) <= 1);
}

TEST_CASE("transmit sets respect half-duplex and adjacency rules") {
    for (Kind kind : {Kind::Cross, Kind::X}) {
        TopologyComponent c = build_component(kind, 5, 2);
        for (int m : {1, 2, 4}) {
            for (bool cap2 : {false, true}) {
                for (MacKind mac :
                     {MacKind::NodeFair, MacKind::FlowFairLiteral, MacKind::FlowFairGeneralized}) {
                    SlotScheduler s(c, mac, MprConfig{m, cap2}, true, Traffic::Broadcast);
                    for (int t = 0; t < 200; ++t) {
                        std::vector<Node> backlogged;
                        for (Node v = 1; v <= 5; ++v)
                            if ((t + v) % 3 != 0 || t % 5 == v % 5)
                                backlogged.push_back(v);
                        if (backlogged.empty())
                            continue;
                        std::vector<Node> set = s.next_transmit_set(backlogged);
                        REQUIRE_FALSE(set.empty());
                        CHECK(static_cast<int>(set.size()) <= (cap2 && m >= 3 ? 2 : m));
                        bool has_center = std::count(set.begin(), set.end(), 5) > 0;
                        if (has_center)
                            CHECK(set.size() == 1);
                        if (m <= 2)
                            for (Node a : set)
                                for (Node b : set)
                                    if (a != b)
                                        CHECK_FALSE(c.adjacent(a, b));
                        for (Node v : set)
                            CHECK(std::count(backlogged.begin(), backlogged.end(), v) == 1);
                    }
                }
            }
        }
    }
}

TEST_CASE("flow-fair deficit follows the shares") {
    TopologyComponent cross5 = build_component(Kind::Cross, 5);
    SlotScheduler s(cross5, MacKind::FlowFairGeneralized, MprConfig{1, false}, true,
                    Traffic::Unicast);
    // Shares 1/6 per edge, 1/3 for the relay: over 600 saturated slots the
    // relay should collect ~200 grants and each edge ~100.
    for (int t = 0; t < 600; ++t)
        s.next_transmit_set({1, 2, 3, 4, 5});
    CHECK(std::abs(s.grants()[5] - 200) <= 2);
    for (Node v = 1; v <= 4; ++v)
        CHECK(std::abs(s.grants()[v] - 100) <= 2);
}

TEST_CASE("invalid mpr order is rejected") {
    TopologyComponent cross5 = build_component(Kind::Cross, 5);
    CHECK_THROWS_AS(flow_fair_shares(cross5, true, MprConfig{0, false}, Traffic::Unicast,
                                     FlowFairFormula::Literal),
                    std::invalid_argument);
}
