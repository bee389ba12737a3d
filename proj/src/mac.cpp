#include "copesim/mac.hpp"

#include <algorithm>
#include <stdexcept>

namespace copesim {

static int ceil_div(int a, int b) { return (a + b - 1) / b; }

ScheduleCycle schedule_cycle(const TopologyComponent& topo, bool nc, const MprConfig& mpr,
                             Traffic traffic) {
    if (mpr.m < 1)
        throw std::invalid_argument("schedule_cycle: m must be >= 1");

    const int edges = topo.edge_count();
    ScheduleCycle cyc;

    if (mpr.m == 1) {
        cyc.m_eff = 1;
    } else if (mpr.m == 2) {
        cyc.m_eff = std::min(2, edges);
    } else if (mpr.broadcast_cap2 || (nc && traffic == Traffic::Broadcast)) {
        // Pairing keeps every listener able to capture the slot, which the
        // relay needs to code across the whole component.
        cyc.m_eff = std::min(2, edges);
    } else {
        cyc.m_eff = std::min(mpr.m, edges);
    }
    cyc.edge_slots = ceil_div(edges, cyc.m_eff);

    if (!nc) {
        cyc.relay_tx = edges;
    } else if (topo.kind == Kind::Cross) {
        if (mpr.m <= 2 || mpr.broadcast_cap2)
            cyc.relay_tx = 1; // one XOR covers the whole edge set
        else
            cyc.relay_tx = ceil_div(edges, 2); // half-duplex losses leave pairs
    } else {
        int mx = static_cast<int>(std::max(topo.x1.size(), topo.x2.size()));
        cyc.relay_tx = std::max(mx, 1);
    }
    return cyc;
}

ShareVector flow_fair_shares(const TopologyComponent& topo, bool nc, const MprConfig& mpr,
                             Traffic traffic, FlowFairFormula formula) {
    if (mpr.m < 1)
        throw std::invalid_argument("flow_fair_shares: m must be >= 1");

    const int n = topo.n;
    const int edges = topo.edge_count();
    ShareVector sv;

    if (formula == FlowFairFormula::Literal) {
        const int ceil_em = ceil_div(edges, mpr.m);
        sv.m_eff = std::min(mpr.m, edges);
        if (!nc) {
            sv.s_edge = Rational(1, ceil_em + n);
            sv.s_center = Rational(n, ceil_em + n);
        } else if (topo.kind == Kind::Cross) {
            sv.s_edge = Rational(1, ceil_em + mpr.m);
            sv.s_center = Rational(mpr.m, ceil_em + mpr.m);
        } else {
            const int mx = static_cast<int>(std::max(topo.x1.size(), topo.x2.size()));
            if (traffic == Traffic::Broadcast && mpr.m == 4) {
                // Broadcast needs one extra degree of freedom from the relay.
                const int denom = ceil_div(edges, 4) + mx + 2;
                sv.s_edge = Rational(1, denom);
                sv.s_center = Rational(mx + 2, denom);
            } else {
                const int denom = ceil_em + mx + 1;
                sv.s_edge = Rational(1, denom);
                sv.s_center = Rational(mx + 1, denom);
            }
        }
        return sv;
    }

    ScheduleCycle cyc = schedule_cycle(topo, nc, mpr, traffic);
    sv.m_eff = cyc.m_eff;
    sv.s_center = Rational(cyc.center_slots(), cyc.length());
    // Scaled so that edges * s_edge / m_eff + s_center == 1 exactly.
    sv.s_edge = Rational(cyc.edge_slots * cyc.m_eff, cyc.length() * edges);
    return sv;
}

SlotScheduler::SlotScheduler(const TopologyComponent& topo, MacKind mac, MprConfig mpr, bool nc,
                             Traffic traffic)
    : topo_(topo), mac_(mac), mpr_(mpr), nc_(nc), traffic_(traffic),
      listen_mode_(nc && traffic == Traffic::Broadcast && mpr.m >= 3),
      grants_(topo.n + 1, 0), credits_(topo.n + 1) {
    if (mac_ != MacKind::NodeFair) {
        FlowFairFormula f = mac_ == MacKind::FlowFairLiteral ? FlowFairFormula::Literal
                                                             : FlowFairFormula::Generalized;
        shares_ = flow_fair_shares(topo_, nc_, mpr_, traffic_, f);
        if (f == FlowFairFormula::Generalized) {
            ScheduleCycle cyc = schedule_cycle(topo_, nc_, mpr_, traffic_);
            cycle_edge_slots_ = cyc.edge_slots;
            cycle_center_slots_ = cyc.center_slots();
        } else {
            // Recover the frame from the closed-form shares:
            // s_R = C / (E + C) with E edge slots per cycle.
            cycle_edge_slots_ = ceil_div(topo_.edge_count(), std::min(mpr_.m, topo_.edge_count()));
            Rational c = shares_.s_center * Rational(cycle_edge_slots_) /
                         (Rational(1) - shares_.s_center);
            cycle_center_slots_ = static_cast<int>(c.num() / c.den());
        }
    }
}

// Node-fair: least-granted backlogged node, lowest id on ties.
Node SlotScheduler::pick_anchor(const std::vector<Node>& backlogged) const {
    Node best = backlogged.front();
    for (Node v : backlogged)
        if (grants_[v] < grants_[best] || (grants_[v] == grants_[best] && v < best))
            best = v;
    return best;
}

Node SlotScheduler::pick_edge_anchor(const std::vector<Node>& backlogged) const {
    Node best = 0;
    for (Node v : backlogged) {
        if (!topo_.is_edge(v))
            continue;
        if (best == 0 || credits_[v] > credits_[best] ||
            (credits_[v] == credits_[best] && v < best))
            best = v;
    }
    return best;
}

long long SlotScheduler::receptions(const std::vector<Node>& txset) const {
    long long total = 0;
    for (Node v = 1; v <= topo_.n; ++v) {
        if (std::find(txset.begin(), txset.end(), v) != txset.end())
            continue;
        for (Node t : txset)
            if (topo_.adjacent(v, t))
                ++total;
    }
    return total;
}

std::vector<Node> SlotScheduler::augment(Node anchor, const std::vector<Node>& backlogged) const {
    std::vector<Node> set{anchor};
    if (anchor == topo_.center() || mpr_.m == 1)
        return set;

    std::vector<Node> others;
    for (Node v : backlogged)
        if (v != anchor && topo_.is_edge(v))
            others.push_back(v);

    if (mpr_.m == 2) {
        // CSMA: a second transmitter only if it hears no other transmitter.
        Node partner = 0;
        for (Node v : others) {
            if (topo_.adjacent(anchor, v))
                continue;
            if (partner == 0) {
                partner = v;
            } else if (mac_ == MacKind::NodeFair) {
                if (grants_[v] < grants_[partner])
                    partner = v;
            } else if (credits_[v] > credits_[partner]) {
                partner = v;
            }
        }
        if (partner != 0)
            set.push_back(partner);
        return set;
    }

    // m >= 3: exhaustive search over edge subsets containing the anchor.
    const int cap = mpr_.broadcast_cap2 ? 2 : mpr_.m;
    std::vector<Node> best = set;
    long long best_recv = receptions(best);
    const int nother = static_cast<int>(others.size());
    for (unsigned mask = 0; mask < (1u << nother); ++mask) {
        std::vector<Node> cand{anchor};
        for (int i = 0; i < nother; ++i)
            if (mask & (1u << i))
                cand.push_back(others[i]);
        if (static_cast<int>(cand.size()) > cap)
            continue;
        std::sort(cand.begin(), cand.end());
        long long recv = receptions(cand);
        bool better;
        if (listen_mode_) {
            // Overhearing feeds the decoder at every node, so maximize
            // receptions; prefer fewer transmitters, then lowest ids.
            better = recv > best_recv ||
                     (recv == best_recv && (cand.size() < best.size() ||
                                            (cand.size() == best.size() && cand < best)));
        } else {
            // Drain the edge backlog toward the relay as fast as possible.
            better = cand.size() > best.size() ||
                     (cand.size() == best.size() &&
                      (recv > best_recv || (recv == best_recv && cand < best)));
        }
        if (better) {
            best = cand;
            best_recv = recv;
        }
    }
    return best;
}

std::vector<Node> SlotScheduler::next_transmit_set(const std::vector<Node>& backlogged) {
    if (backlogged.empty())
        return {};

    std::vector<Node> set;
    if (mac_ == MacKind::NodeFair) {
        set = augment(pick_anchor(backlogged), backlogged);
    } else {
        for (Node v = 1; v < topo_.n; ++v)
            credits_[v] += shares_.s_edge;
        bool center_has = std::find(backlogged.begin(), backlogged.end(), topo_.center()) !=
                          backlogged.end();
        Node edge_anchor = pick_edge_anchor(backlogged);
        bool edge_slot = cycle_pos_ < cycle_edge_slots_;
        cycle_pos_ = (cycle_pos_ + 1) % (cycle_edge_slots_ + cycle_center_slots_);
        // Either side takes the other's slots when it has nothing queued.
        if ((edge_slot && edge_anchor != 0) || !center_has)
            set = augment(edge_anchor, backlogged);
        else
            set = {topo_.center()};
    }

    for (Node v : set) {
        ++grants_[v];
        if (mac_ != MacKind::NodeFair && topo_.is_edge(v))
            credits_[v] -= Rational(1);
    }
    return set;
}

} // namespace copesim
