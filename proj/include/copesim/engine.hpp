#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "copesim/coding.hpp"
#include "copesim/mac.hpp"
#include "copesim/topology.hpp"
#include "copesim/traffic.hpp"

namespace copesim {

// Full experiment configuration. horizon == 0 means "use g" (the throughput
// window matches one load unit, so S equals P below saturation).
struct SimConfig {
    Kind kind = Kind::Cross;
    int n = 5;
    int x1_size = 2;
    Traffic traffic = Traffic::Unicast;
    bool nc = false;
    MprConfig mpr;
    MacKind mac = MacKind::NodeFair;
    int g = 100;
    int horizon = 0;
    int iterations = 1000;
    std::uint64_t seed = 0;
};

struct SimResult {
    double s = 0.0;             // delivered packets per slot
    int delivered = 0;          // completed packets within the horizon
    std::vector<int> per_flow;  // delivered count per source node, index 1..n
    double completion = 1.0;    // delivered / offered

    // Transmission counters for rate checks.
    long long edge_tx = 0;
    long long relay_native_tx = 0;
    long long relay_coded_tx = 0;
    long long relay_own_tx = 0;
    int busy_slots = 0; // slots that carried at least one transmission
};

struct SweepPoint {
    double p = 0.0;
    double mean_s = 0.0;
    double std_s = 0.0;
};

struct SweepCurve {
    std::vector<SweepPoint> points;
};

// Runs one slot-by-slot simulation over a fixed horizon. All packets exist at
// slot 0; a unicast packet completes when its destination can reconstruct it,
// a broadcast packet when every node can. Identical inputs give identical
// results bit for bit. `trace` (optional) receives one CSV row per slot.
SimResult run(const SimConfig& cfg, const TopologyComponent& topo, const LoadVector& loads,
              std::ostream* trace = nullptr);

// Mean and standard deviation of S over cfg.iterations stochastic draws at
// offered load p, each on an independent generator stream from cfg.seed.
std::pair<double, double> monte_carlo(const SimConfig& cfg, double p);

// One monte_carlo point per entry of p_list (strictly increasing).
SweepCurve sweep(const SimConfig& cfg, const std::vector<double>& p_list);

} // namespace copesim
