#pragma once

#include <cstdint>
#include <vector>

#include "copesim/rational.hpp"
#include "copesim/rng.hpp"
#include "copesim/topology.hpp"

namespace copesim {

enum class Traffic { Unicast, Broadcast };

using PacketId = std::int32_t;

// Destination marker for broadcast packets.
constexpr Node kAllNodes = 0;

// Per-node packet counts for one run. k[i] packets at node i mean a load
// contribution of k[i]/g; the total offered load is sum(k)/g.
struct LoadVector {
    double p = 0.0;
    int g = 100;
    std::vector<int> k; // index 1..n, k[0] unused

    int total() const {
        int s = 0;
        for (int v : k)
            s += v;
        return s;
    }
};

struct Packet {
    PacketId uid = 0;
    Node origin = 0;
    Node dest = 0; // kAllNodes for broadcast
};

// Stochastic loads: K = round(p*g) packets split over n nodes by sequential
// binomial draws with p_i = 1/(n-i+1); the last node takes the remainder.
// The joint law is Multinomial(K, uniform). Bit-reproducible per seed.
LoadVector draw_loads(double p, int n, int g, Rng& rng);

// Exact symmetric loads: k_i = p*g/n for all i. Throws std::invalid_argument
// when p*g is not an integer multiple of n (pick g so that it is).
LoadVector symmetric_loads(const Rational& p, int n, int g);

// Materialize k_i packets per node, all present at slot 0. Unicast packets
// are addressed per the component flow map, broadcast packets to kAllNodes.
std::vector<Packet> make_packets(const LoadVector& loads, const TopologyComponent& c,
                                 Traffic traffic);

} // namespace copesim
