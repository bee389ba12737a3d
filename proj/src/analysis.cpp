#include "copesim/analysis.hpp"

#include <stdexcept>

#include "copesim/coding.hpp"

namespace copesim {

ComponentLoad component_load(const LoadVector& loads, Kind kind, bool nc, int m) {
    if (m < 1)
        throw std::invalid_argument("component_load: m must be >= 1");
    const int n = static_cast<int>(loads.k.size()) - 1;
    const int edges = n - 1;

    Rational edge_sum(0);
    for (Node j = 1; j <= edges; ++j)
        edge_sum += Rational(loads.k[j], loads.g);
    Rational center_load(loads.k[n], loads.g);

    ComponentLoad cl;
    const int c = max_code_size(kind, m, edges).c;
    cl.rho_r = nc ? edge_sum / Rational(c) : edge_sum;
    cl.rho_m = edge_sum / Rational(m) + center_load;
    cl.p_t = cl.rho_r + cl.rho_m;
    for (Node j = 2; j <= edges; ++j)
        if (loads.k[j] != loads.k[1])
            cl.rho_m_is_lower_bound = true;
    return cl;
}

ThroughputPoint max_throughput(Kind kind, bool nc, int m, Traffic traffic, bool broadcast_cap2,
                               int n, int x1_size) {
    if (m < 1)
        throw std::invalid_argument("max_throughput: m must be >= 1");
    TopologyComponent topo = build_component(kind, n, kind == Kind::X ? x1_size : 0);
    MprConfig mpr{m, broadcast_cap2};
    ScheduleCycle cyc = schedule_cycle(topo, nc, mpr, traffic);

    // One cycle moves one packet per node (edges + relay own) in length() slots.
    ThroughputPoint tp;
    tp.s_max = Rational(n, cyc.length());
    tp.p_star = tp.s_max;
    tp.s_sat = Rational(1, n); // node-fair: the relay ends up serving own traffic only
    return tp;
}

GainDecomposition gain_decomposition(Kind kind, int m, Traffic traffic, int n, int x1_size) {
    GainDecomposition g;
    g.routing = max_throughput(kind, false, 1, traffic, false, n, x1_size).s_max;
    g.nc_only = max_throughput(kind, true, 1, traffic, false, n, x1_size).s_max;
    g.mpr_only = max_throughput(kind, false, m, traffic, false, n, x1_size).s_max;
    g.nc_plus_mpr = max_throughput(kind, true, m, traffic, false, n, x1_size).s_max;
    g.additive_prediction = g.nc_only + g.mpr_only - g.routing;
    return g;
}

Rational saturation_gap(Kind kind, bool nc, int m, Traffic traffic, bool broadcast_cap2,
                        MacKind mac, int n, int x1_size) {
    ThroughputPoint tp = max_throughput(kind, nc, m, traffic, broadcast_cap2, n, x1_size);
    if (mac != MacKind::NodeFair)
        return Rational(0);
    return tp.s_max - tp.s_sat;
}

} // namespace copesim
