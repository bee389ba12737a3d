#pragma once

#include <vector>

#include "copesim/topology.hpp"
#include "copesim/traffic.hpp"

namespace copesim {

// Maximum number of packets the relay may XOR together for a configuration.
struct CodingBudget {
    int c = 1;
};

// One on-air frame: a native packet (payload size 1) or an XOR of several.
struct Transmission {
    Node sender = 0;
    std::vector<PacketId> payload; // distinct uids; >1 means XOR
};

// Native packets each node can currently reconstruct: its own originals,
// overheard natives, and natives decoded from XORs. Holdings only grow.
class DecoderState {
  public:
    DecoderState(int n, int packet_count)
        : have_(n + 1, std::vector<char>(packet_count, 0)) {}

    bool holds(Node v, PacketId id) const { return have_[v][id] != 0; }
    void add(Node v, PacketId id) { have_[v][id] = 1; }

    // Payload natives the node cannot reconstruct yet.
    std::vector<PacketId> missing_of(Node v, const std::vector<PacketId>& payload) const {
        std::vector<PacketId> out;
        for (PacketId id : payload)
            if (!have_[v][id])
                out.push_back(id);
        return out;
    }

  private:
    std::vector<std::vector<char>> have_;
};

// How many packets the relay can encode together. The cross component keeps
// every edge node one degree of freedom short, so the whole edge set codes
// together while m <= 2; beyond that half-duplex losses cut it to pairs.
// The X component never exceeds pairs.
CodingBudget max_code_size(Kind kind, int m, int edge_count = 4);

// Picks the relay's next transmission from its queue (FIFO by arrival).
// The queue head is always sent (transmissions are never delayed); further
// queued packets are greedily XOR-ed in while every intended recipient can
// still decode and no two payload packets share a next hop.
// With allow_component_xor (the cap-2 transmit strategy), a single XOR of
// one packet from every edge origin may be returned even past the budget,
// provided all recipients decode it.
Transmission select_code_set(const TopologyComponent& topo, const std::vector<Packet>& packets,
                             const std::vector<PacketId>& relay_queue,
                             const DecoderState& decoders, CodingBudget budget, Traffic traffic,
                             bool allow_component_xor);

// True when every intended recipient of the payload can decode it right now.
bool payload_decodable(const TopologyComponent& topo, const std::vector<Packet>& packets,
                       const DecoderState& decoders, const std::vector<PacketId>& payload,
                       Traffic traffic);

// Applies one reception at `receiver`. Natives are stored directly; an XOR
// yields its single missing native when the receiver holds all others, and
// nothing otherwise (undecodable receptions are discarded, not buffered).
// Returns the newly decoded uids.
std::vector<PacketId> apply_reception(DecoderState& st, Node receiver, const Transmission& tx);

} // namespace copesim
