#include "copesim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace copesim {

namespace {

void validate_transmit_set(const TopologyComponent& topo, const MprConfig& mpr,
                           const std::vector<Node>& set) {
    const int limit = mpr.m == 1 ? 1 : mpr.m == 2 ? 2 : (mpr.broadcast_cap2 ? 2 : mpr.m);
    if (static_cast<int>(set.size()) > limit)
        throw std::logic_error("transmit set exceeds MPR order");
    bool has_center = std::find(set.begin(), set.end(), topo.center()) != set.end();
    if (has_center && set.size() > 1)
        throw std::logic_error("relay cannot transmit alongside an edge node");
    if (mpr.m <= 2)
        for (Node a : set)
            for (Node b : set)
                if (a < b && topo.adjacent(a, b))
                    throw std::logic_error("neighbors transmitting together with m <= 2");
}

void write_ids(std::ostream& os, const std::vector<PacketId>& ids, char sep) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i)
            os << sep;
        os << ids[i];
    }
}

} // namespace

SimResult run(const SimConfig& cfg, const TopologyComponent& topo, const LoadVector& loads,
              std::ostream* trace) {
    const int n = topo.n;
    const Node center = topo.center();
    const int horizon = cfg.horizon > 0 ? cfg.horizon : cfg.g;
    if (horizon < 1)
        throw std::invalid_argument("run: horizon must be >= 1");

    const std::vector<Packet> packets = make_packets(loads, topo, cfg.traffic);
    const int offered = static_cast<int>(packets.size());
    const CodingBudget budget = max_code_size(topo.kind, cfg.mpr.m, topo.edge_count());

    DecoderState dec(n, offered);
    std::vector<int> hold_count(offered, 0);
    std::vector<char> done(offered, 0);

    SimResult res;
    res.per_flow.assign(n + 1, 0);
    std::vector<PacketId> completed_now;

    auto note_add = [&](Node v, PacketId id) {
        ++hold_count[id];
        if (done[id])
            return;
        const Packet& pk = packets[id];
        bool complete = pk.dest == kAllNodes ? hold_count[id] == n : v == pk.dest;
        if (complete) {
            done[id] = 1;
            ++res.delivered;
            ++res.per_flow[pk.origin];
            completed_now.push_back(id);
        }
    };

    std::vector<std::deque<PacketId>> edge_queue(n + 1);
    std::deque<PacketId> own_queue;
    std::vector<PacketId> relay_queue;
    for (const Packet& pk : packets) {
        dec.add(pk.origin, pk.uid);
        note_add(pk.origin, pk.uid);
        if (pk.origin == center)
            own_queue.push_back(pk.uid);
        else
            edge_queue[pk.origin].push_back(pk.uid);
    }

    SlotScheduler sched(topo, cfg.mac, cfg.mpr, cfg.nc, cfg.traffic);
    const bool relay_first = cfg.mac != MacKind::NodeFair;

    for (int slot = 1; slot <= horizon; ++slot) {
        completed_now.clear();
        std::vector<Node> backlogged;
        for (Node v = 1; v < n; ++v)
            if (!edge_queue[v].empty())
                backlogged.push_back(v);
        if (!own_queue.empty() || !relay_queue.empty())
            backlogged.push_back(center);
        if (backlogged.empty())
            break; // nothing left to send; remaining slots stay idle

        std::vector<Node> txset = sched.next_transmit_set(backlogged);
        validate_transmit_set(topo, cfg.mpr, txset);
        std::sort(txset.begin(), txset.end());
        ++res.busy_slots;

        std::vector<Transmission> frames;
        for (Node t : txset) {
            if (t != center) {
                frames.push_back(Transmission{t, {edge_queue[t].front()}});
                edge_queue[t].pop_front();
                ++res.edge_tx;
                continue;
            }
            // Relay: node-fair serves its queue in arrival order (own packets
            // exist at slot 0, so they go first); the flow-fair MAC relays
            // first and fills leftover slots with its own traffic.
            bool send_own = relay_first ? relay_queue.empty() : !own_queue.empty();
            if (send_own && !own_queue.empty()) {
                frames.push_back(Transmission{t, {own_queue.front()}});
                own_queue.pop_front();
                ++res.relay_own_tx;
            } else {
                Transmission tx =
                    cfg.nc ? select_code_set(topo, packets, relay_queue, dec, budget,
                                             cfg.traffic, cfg.mpr.broadcast_cap2)
                           : Transmission{t, {relay_queue.front()}};
                if (!payload_decodable(topo, packets, dec, tx.payload, cfg.traffic))
                    throw std::logic_error("relay selected an undecodable payload");
                for (PacketId id : tx.payload)
                    relay_queue.erase(std::find(relay_queue.begin(), relay_queue.end(), id));
                if (tx.payload.size() > 1)
                    ++res.relay_coded_tx;
                else
                    ++res.relay_native_tx;
                frames.push_back(tx);
            }
        }

        std::vector<std::pair<Node, PacketId>> decoded;
        for (Node v = 1; v <= n; ++v) {
            if (std::find(txset.begin(), txset.end(), v) != txset.end())
                continue; // half-duplex: transmitters hear nothing
            for (const Transmission& tx : frames) {
                if (!topo.adjacent(v, tx.sender))
                    continue;
                for (PacketId id : apply_reception(dec, v, tx)) {
                    note_add(v, id);
                    decoded.emplace_back(v, id);
                }
                if (v == center && topo.is_edge(tx.sender))
                    relay_queue.push_back(tx.payload.front());
            }
        }

        if (trace) {
            std::ostream& os = *trace;
            os << slot << ',';
            for (std::size_t i = 0; i < txset.size(); ++i)
                os << (i ? ";" : "") << txset[i];
            os << ',';
            for (std::size_t i = 0; i < frames.size(); ++i) {
                if (i)
                    os << ';';
                os << frames[i].sender << ':';
                write_ids(os, frames[i].payload, '+');
            }
            os << ',';
            for (std::size_t i = 0; i < decoded.size(); ++i) {
                if (i)
                    os << ';';
                os << decoded[i].first << ':' << decoded[i].second;
            }
            os << ',';
            write_ids(os, completed_now, ';');
            os << '\n';
        }
    }

    res.s = static_cast<double>(res.delivered) / horizon;
    res.completion = offered > 0 ? static_cast<double>(res.delivered) / offered : 1.0;
    return res;
}

std::pair<double, double> monte_carlo(const SimConfig& cfg, double p) {
    if (cfg.iterations < 1)
        throw std::invalid_argument("monte_carlo: iterations must be >= 1");
    const TopologyComponent topo = build_component(cfg.kind, cfg.n, cfg.x1_size);
    const std::uint64_t lane = static_cast<std::uint64_t>(std::llround(p * 1e6));

    double sum = 0.0, sumsq = 0.0;
    for (int it = 0; it < cfg.iterations; ++it) {
        Rng rng(Rng::derive(cfg.seed, lane, static_cast<std::uint64_t>(it)));
        LoadVector lv = draw_loads(p, cfg.n, cfg.g, rng);
        SimResult r = run(cfg, topo, lv);
        sum += r.s;
        sumsq += r.s * r.s;
    }
    double mean = sum / cfg.iterations;
    double var = 0.0;
    if (cfg.iterations > 1)
        var = std::max(0.0, (sumsq - cfg.iterations * mean * mean) / (cfg.iterations - 1));
    return {mean, std::sqrt(var)};
}

SweepCurve sweep(const SimConfig& cfg, const std::vector<double>& p_list) {
    if (p_list.empty())
        throw std::invalid_argument("sweep: empty load grid");
    for (std::size_t i = 1; i < p_list.size(); ++i)
        if (p_list[i] <= p_list[i - 1])
            throw std::invalid_argument("sweep: load grid must be strictly increasing");

    SweepCurve curve;
    curve.points.reserve(p_list.size());
    for (double p : p_list) {
        auto [mean, sd] = monte_carlo(cfg, p);
        curve.points.push_back(SweepPoint{p, mean, sd});
    }
    return curve;
}

} // namespace copesim
