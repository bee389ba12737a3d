#include "copesim/traffic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace copesim {

LoadVector draw_loads(double p, int n, int g, Rng& rng) {
    if (p < 0 || n < 1 || g < 1)
        throw std::invalid_argument("draw_loads: need p >= 0, n >= 1, g >= 1");

    LoadVector lv;
    lv.p = p;
    lv.g = g;
    lv.k.assign(n + 1, 0);

    // Half-up rounding keeps the draw deterministic; error is at most 1/(2g).
    int remaining = static_cast<int>(std::floor(p * g + 0.5));
    for (int i = 1; i <= n && remaining > 0; ++i) {
        if (i == n) {
            lv.k[i] = remaining; // last node takes the remainder
            remaining = 0;
        } else {
            int ki = rng.binomial(remaining, 1.0 / (n - i + 1));
            lv.k[i] = ki;
            remaining -= ki;
        }
    }
    return lv;
}

LoadVector symmetric_loads(const Rational& p, int n, int g) {
    if (p < Rational(0) || n < 1 || g < 1)
        throw std::invalid_argument("symmetric_loads: need p >= 0, n >= 1, g >= 1");

    Rational total = p * Rational(g);
    if (!total.is_integer() || total.num() % n != 0)
        throw std::invalid_argument(
            "symmetric_loads: p*g = " + total.to_string() + " is not divisible by n = " +
            std::to_string(n) + "; choose g so that p*g/n is an integer");

    LoadVector lv;
    lv.p = p.to_double();
    lv.g = g;
    lv.k.assign(n + 1, 0);
    int per_node = static_cast<int>(total.num() / n);
    for (int i = 1; i <= n; ++i)
        lv.k[i] = per_node;
    return lv;
}

std::vector<Packet> make_packets(const LoadVector& loads, const TopologyComponent& c,
                                 Traffic traffic) {
    if (static_cast<int>(loads.k.size()) != c.n + 1)
        throw std::invalid_argument("make_packets: load vector size does not match component");

    std::vector<Packet> out;
    out.reserve(loads.total());
    PacketId next = 0;
    for (Node i = 1; i <= c.n; ++i) {
        Node dest = traffic == Traffic::Unicast ? flow_dest(c, i) : kAllNodes;
        for (int j = 0; j < loads.k[i]; ++j)
            out.push_back(Packet{next++, i, dest});
    }
    return out;
}

} // namespace copesim
