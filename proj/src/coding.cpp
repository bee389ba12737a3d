#include "copesim/coding.hpp"

#include <algorithm>

namespace copesim {

CodingBudget max_code_size(Kind kind, int m, int edge_count) {
    if (kind == Kind::Cross)
        return CodingBudget{m <= 2 ? edge_count : 2};
    return CodingBudget{2};
}

bool payload_decodable(const TopologyComponent& topo, const std::vector<Packet>& packets,
                       const DecoderState& decoders, const std::vector<PacketId>& payload,
                       Traffic traffic) {
    if (payload.size() <= 1)
        return true;
    if (traffic == Traffic::Unicast) {
        // Each destination must hold every payload native except its own.
        for (PacketId id : payload) {
            Node dest = packets[id].dest;
            for (PacketId other : payload)
                if (other != id && !decoders.holds(dest, other))
                    return false;
        }
        return true;
    }
    // Broadcast: any node still lacking payload natives must lack exactly one.
    for (Node v = 1; v < topo.n; ++v)
        if (decoders.missing_of(v, payload).size() > 1)
            return false;
    return true;
}

static bool shares_next_hop(const std::vector<Packet>& packets, Traffic traffic,
                            const std::vector<PacketId>& payload, PacketId candidate) {
    for (PacketId id : payload) {
        if (traffic == Traffic::Unicast && packets[id].dest == packets[candidate].dest)
            return true;
        // Broadcast frames fan out to everyone; two packets from one origin
        // would leave every other node two degrees of freedom short.
        if (traffic == Traffic::Broadcast && packets[id].origin == packets[candidate].origin)
            return true;
    }
    return false;
}

Transmission select_code_set(const TopologyComponent& topo, const std::vector<Packet>& packets,
                             const std::vector<PacketId>& relay_queue,
                             const DecoderState& decoders, CodingBudget budget, Traffic traffic,
                             bool allow_component_xor) {
    Transmission tx;
    tx.sender = topo.center();
    if (relay_queue.empty())
        return tx;

    if (allow_component_xor) {
        // Earliest queued packet from every edge origin, XOR-ed as one frame.
        std::vector<PacketId> all;
        for (Node origin = 1; origin < topo.n; ++origin) {
            for (PacketId id : relay_queue)
                if (packets[id].origin == origin) {
                    all.push_back(id);
                    break;
                }
        }
        if (static_cast<int>(all.size()) == topo.edge_count() && all.size() > 1 &&
            payload_decodable(topo, packets, decoders, all, traffic)) {
            std::sort(all.begin(), all.end());
            tx.payload = all;
            return tx;
        }
    }

    // Head goes out regardless; grow the XOR greedily in queue order.
    tx.payload.push_back(relay_queue.front());
    for (std::size_t i = 1;
         i < relay_queue.size() && static_cast<int>(tx.payload.size()) < budget.c; ++i) {
        PacketId cand = relay_queue[i];
        if (shares_next_hop(packets, traffic, tx.payload, cand))
            continue;
        tx.payload.push_back(cand);
        if (!payload_decodable(topo, packets, decoders, tx.payload, traffic))
            tx.payload.pop_back();
    }
    std::sort(tx.payload.begin(), tx.payload.end());
    return tx;
}

std::vector<PacketId> apply_reception(DecoderState& st, Node receiver, const Transmission& tx) {
    std::vector<PacketId> fresh;
    if (tx.payload.size() == 1) {
        PacketId id = tx.payload.front();
        if (!st.holds(receiver, id)) {
            st.add(receiver, id);
            fresh.push_back(id);
        }
        return fresh;
    }
    std::vector<PacketId> missing = st.missing_of(receiver, tx.payload);
    if (missing.size() == 1) {
        st.add(receiver, missing.front());
        fresh.push_back(missing.front());
    }
    return fresh;
}

} // namespace copesim
