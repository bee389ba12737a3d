#pragma once

#include <vector>

#include "copesim/rational.hpp"
#include "copesim/topology.hpp"
#include "copesim/traffic.hpp"

namespace copesim {

enum class MacKind { NodeFair, FlowFairLiteral, FlowFairGeneralized };

enum class FlowFairFormula { Literal, Generalized };

// Multi-packet reception order m: how many simultaneous transmissions a
// receiver can capture in one slot. broadcast_cap2 selects the transmit
// strategy that caps simultaneous transmitters at two so the relay can code
// the whole edge set together.
struct MprConfig {
    int m = 1;
    bool broadcast_cap2 = false;
};

// Per-node slot shares under a flow-fair allocation.
struct ShareVector {
    Rational s_edge;   // fraction of slots for each edge node
    Rational s_center; // fraction for the relay
    int m_eff = 1;     // simultaneous edge transmitters the allocation assumes

    // (N-1) * s_edge / m_eff + s_center
    Rational normalization(int edge_count) const {
        return Rational(edge_count) * s_edge / Rational(m_eff) + s_center;
    }
};

// One steady-state service round: the slots needed to move one packet from
// every edge node through the relay, plus one slot of relay-own traffic.
struct ScheduleCycle {
    int edge_slots = 0; // slots for one packet per edge node
    int relay_tx = 0;   // relay transmissions to clear those packets
    int m_eff = 1;      // edge nodes transmitting together

    int center_slots() const { return relay_tx + 1; }
    int length() const { return edge_slots + relay_tx + 1; }
};

// Effective service cycle for a configuration. Edge simultaneity follows the
// transmit strategy (CSMA pairing for m = 2, pairing again under cap-2 or for
// coded broadcast, full groups of m otherwise); relay transmissions follow the
// coding budget reachable in that strategy.
ScheduleCycle schedule_cycle(const TopologyComponent& topo, bool nc, const MprConfig& mpr,
                             Traffic traffic);

// Slot shares that maximize saturated throughput subject to flow fairness.
// Literal evaluates the closed forms (including the broadcast m=4 adjustment
// on the X component); Generalized derives the shares from schedule_cycle().
// Throws std::invalid_argument for unsupported combinations.
ShareVector flow_fair_shares(const TopologyComponent& topo, bool nc, const MprConfig& mpr,
                             Traffic traffic, FlowFairFormula formula);

// Per-slot transmit-set selection. Owns the grant history (node-fair) or the
// frame position and edge credits (flow-fair) of one simulation run.
//
// Node-fair grants the least-served backlogged node. Flow-fair walks a fixed
// service cycle: the edge slots of the cycle first, then the relay block, so
// the relay always sees whole generations to code; per-edge credits keep the
// edge slots fair when backlogs are uneven, and either side takes the other's
// slots when it has nothing to send.
class SlotScheduler {
  public:
    SlotScheduler(const TopologyComponent& topo, MacKind mac, MprConfig mpr, bool nc,
                  Traffic traffic);

    // Picks the transmit set for the next slot and records the grants.
    // The set never mixes the relay with edge nodes, never exceeds the MPR
    // order, and never pairs neighbors when m <= 2.
    std::vector<Node> next_transmit_set(const std::vector<Node>& backlogged);

    const std::vector<long long>& grants() const { return grants_; }
    const ShareVector& shares() const { return shares_; }
    int cycle_edge_slots() const { return cycle_edge_slots_; }
    int cycle_center_slots() const { return cycle_center_slots_; }

  private:
    Node pick_anchor(const std::vector<Node>& backlogged) const;
    Node pick_edge_anchor(const std::vector<Node>& backlogged) const;
    std::vector<Node> augment(Node anchor, const std::vector<Node>& backlogged) const;
    long long receptions(const std::vector<Node>& txset) const;

    TopologyComponent topo_;
    MacKind mac_;
    MprConfig mpr_;
    bool nc_;
    Traffic traffic_;
    bool listen_mode_; // coded broadcast with m >= 3 pairs for overhearing
    ShareVector shares_;
    int cycle_edge_slots_ = 0;
    int cycle_center_slots_ = 0;
    int cycle_pos_ = 0;
    std::vector<long long> grants_;
    std::vector<Rational> credits_;
};

} // namespace copesim
