#pragma once

#include "copesim/mac.hpp"
#include "copesim/rational.hpp"
#include "copesim/topology.hpp"
#include "copesim/traffic.hpp"

namespace copesim {

// Component load split: relay load, native-transmission load, and their sum.
// All exact rationals. rho_m equals the symmetric-load value; for asymmetric
// loads it is only a lower bound, which the flag records.
struct ComponentLoad {
    Rational rho_r;
    Rational rho_m;
    Rational p_t;
    bool rho_m_is_lower_bound = false;
};

// Analytic operating point of one configuration.
struct ThroughputPoint {
    Rational p_star; // offered load where the component load reaches 1
    Rational s_max;  // throughput at that point
    Rational s_sat;  // node-fair limit as the offered load grows without bound
};

struct GainDecomposition {
    Rational routing;
    Rational nc_only;
    Rational mpr_only;
    Rational nc_plus_mpr;
    Rational additive_prediction; // nc_only + mpr_only - routing
};

ComponentLoad component_load(const LoadVector& loads, Kind kind, bool nc, int m);

// Solves the symmetric operating point for a configuration. m in {1,2,4} is
// fully supported; other m use the same service-cycle construction on a
// best-effort basis. Throws std::invalid_argument when unsupported.
ThroughputPoint max_throughput(Kind kind, bool nc, int m, Traffic traffic,
                               bool broadcast_cap2 = false, int n = 5, int x1_size = 2);

GainDecomposition gain_decomposition(Kind kind, int m, Traffic traffic, int n = 5,
                                     int x1_size = 2);

// Maximum-minus-saturated throughput. Zero under the flow-fair MAC, which
// saturates at the maximum.
Rational saturation_gap(Kind kind, bool nc, int m, Traffic traffic, bool broadcast_cap2,
                        MacKind mac, int n = 5, int x1_size = 2);

} // namespace copesim
