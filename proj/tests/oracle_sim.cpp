#include "oracle_sim.hpp"

#include <algorithm>
#include <cstdint>

namespace oracle {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

int popcount(std::uint64_t x) {
    int c = 0;
    while (x) {
        x &= x - 1;
        ++c;
    }
    return c;
}

int bit_index(std::uint64_t x) {
    int i = 0;
    while (!(x >> i & 1))
        ++i;
    return i;
}

struct World {
    Setup s;
    int edges;
    std::vector<std::vector<int>> adjm; // adjacency matrix
    std::vector<int> dest;              // per-node flow destination

    bool adj(int a, int b) const { return adjm[a][b] != 0; }
};

World make_world(const Setup& s) {
    World w;
    w.s = s;
    w.edges = s.n - 1;
    w.adjm.assign(s.n + 1, std::vector<int>(s.n + 1, 0));
    w.dest.assign(s.n + 1, 0);

    auto link = [&](int a, int b) { w.adjm[a][b] = w.adjm[b][a] = 1; };
    for (int i = 1; i < s.n; ++i)
        link(i, s.n);

    if (s.kind == 0) {
        auto opp = [&](int i) { return (i - 1 + w.edges / 2) % w.edges + 1; };
        for (int i = 1; i < s.n; ++i) {
            for (int j = i + 1; j < s.n; ++j)
                if (opp(i) != j)
                    link(i, j);
            w.dest[i] = opp(i);
        }
    } else {
        int q1 = s.x1_size, q2 = w.edges - s.x1_size;
        auto set_of = [&](int i) { return i <= q1 ? 0 : 1; };
        for (int i = 1; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j)
                if (set_of(i) == set_of(j))
                    link(i, j);
        for (int t = 0; t < q1; ++t)
            w.dest[1 + t] = q1 + 1 + t % q2;
        for (int t = 0; t < q2; ++t)
            w.dest[q1 + 1 + t] = 1 + t % q1;
    }
    w.dest[s.n] = 1;
    return w;
}

// Flow-fair frame: edge credits as integers over one denominator, plus the
// cycle split between edge slots and relay slots.
struct Shares {
    long long edge_num = 0, den = 1;
    int edge_slots = 0, center_slots = 0;
};

Shares make_shares(const World& w) {
    const Setup& s = w.s;
    const int e = w.edges;
    Shares sh;
    if (s.mac == 0)
        return sh;

    if (s.mac == 1) { // literal closed forms
        int denom, center;
        if (!s.nc) {
            denom = ceil_div(e, s.m) + s.n;
            center = s.n;
        } else if (s.kind == 0) {
            denom = ceil_div(e, s.m) + s.m;
            center = s.m;
        } else {
            int mx = std::max(s.x1_size, e - s.x1_size);
            if (s.traffic == 1 && s.m == 4) {
                denom = ceil_div(e, 4) + mx + 2;
                center = mx + 2;
            } else {
                denom = ceil_div(e, s.m) + mx + 1;
                center = mx + 1;
            }
        }
        sh.edge_num = 1;
        sh.den = denom;
        sh.edge_slots = ceil_div(e, std::min(s.m, e));
        sh.center_slots = center;
        return sh;
    }

    // generalized: service-cycle construction
    int m_eff;
    if (s.m == 1)
        m_eff = 1;
    else if (s.m == 2)
        m_eff = std::min(2, e);
    else if (s.cap2 || (s.nc && s.traffic == 1))
        m_eff = std::min(2, e);
    else
        m_eff = std::min(s.m, e);
    int E = ceil_div(e, m_eff);
    int R;
    if (!s.nc)
        R = e;
    else if (s.kind == 0)
        R = (s.m <= 2 || s.cap2) ? 1 : ceil_div(e, 2);
    else
        R = std::max(std::max(s.x1_size, e - s.x1_size), 1);
    int L = E + R + 1;
    sh.den = static_cast<long long>(L) * e;
    sh.edge_num = static_cast<long long>(E) * m_eff;
    sh.edge_slots = E;
    sh.center_slots = R + 1;
    return sh;
}

} // namespace

Outcome simulate(const Setup& s) {
    World w = make_world(s);
    const int n = s.n;
    const int center = n;

    // packets: uid-ordered, node 1 first
    std::vector<int> origin, pdest;
    std::vector<int> first_uid(n + 2, 0);
    for (int v = 1; v <= n; ++v) {
        first_uid[v] = static_cast<int>(origin.size());
        for (int j = 0; j < s.k[v]; ++j) {
            origin.push_back(v);
            pdest.push_back(s.traffic == 0 ? w.dest[v] : 0);
        }
    }
    first_uid[n + 1] = static_cast<int>(origin.size());
    const int total = static_cast<int>(origin.size());

    std::vector<std::uint64_t> have(n + 1, 0);
    std::vector<int> sent_upto(n + 1, 0); // next unsent own packet per node
    for (int v = 1; v <= n; ++v) {
        sent_upto[v] = first_uid[v];
        for (int u = first_uid[v]; u < first_uid[v + 1]; ++u)
            have[v] |= 1ull << u;
    }

    std::vector<int> relay; // queued uids in arrival order
    std::vector<long long> grants(n + 1, 0), credit(n + 1, 0);
    Shares sh = make_shares(w);
    int cycle_pos = 0;

    std::vector<char> done(total, 0);
    Outcome out;
    out.per_flow.assign(n + 1, 0);

    auto coverage = [&](int uid) {
        int cnt = 0;
        for (int v = 1; v <= n; ++v)
            if (have[v] >> uid & 1)
                ++cnt;
        return cnt;
    };
    auto settle = [&](int uid) {
        if (done[uid])
            return;
        bool ok = pdest[uid] == 0 ? coverage(uid) == n : (have[pdest[uid]] >> uid & 1) != 0;
        if (ok) {
            done[uid] = 1;
            ++out.delivered;
            ++out.per_flow[origin[uid]];
        }
    };

    const int cbudget = s.kind == 0 ? (s.m <= 2 ? w.edges : 2) : 2;
    const bool listen = s.nc && s.traffic == 1 && s.m >= 3;

    for (int slot = 1; slot <= s.horizon; ++slot) {
        std::vector<int> backlog;
        for (int v = 1; v < n; ++v)
            if (sent_upto[v] < first_uid[v + 1])
                backlog.push_back(v);
        bool center_has = sent_upto[center] < first_uid[center + 1] || !relay.empty();
        bool edge_has = !backlog.empty();
        if (center_has)
            backlog.push_back(center);
        if (backlog.empty())
            break;

        // anchor: node-fair serves the least-granted node; flow-fair walks
        // the frame (edge slots first, relay block after), with per-edge
        // credits deciding which edge leads.
        int anchor;
        if (s.mac == 0) {
            anchor = backlog[0];
            for (int v : backlog)
                if (grants[v] < grants[anchor] || (grants[v] == grants[anchor] && v < anchor))
                    anchor = v;
        } else {
            for (int v = 1; v < n; ++v)
                credit[v] += sh.edge_num;
            int edge_anchor = 0;
            for (int v : backlog) {
                if (v == center)
                    continue;
                if (edge_anchor == 0 || credit[v] > credit[edge_anchor] ||
                    (credit[v] == credit[edge_anchor] && v < edge_anchor))
                    edge_anchor = v;
            }
            bool edge_slot = cycle_pos < sh.edge_slots;
            cycle_pos = (cycle_pos + 1) % (sh.edge_slots + sh.center_slots);
            anchor = ((edge_slot && edge_has) || !center_has) ? edge_anchor : center;
        }

        std::vector<int> txset{anchor};
        if (anchor != center && s.m == 2) {
            int partner = 0;
            for (int v : backlog) {
                if (v == anchor || v == center || w.adj(anchor, v))
                    continue;
                if (partner == 0)
                    partner = v;
                else if (s.mac == 0 ? grants[v] < grants[partner] : credit[v] > credit[partner])
                    partner = v;
            }
            if (partner)
                txset.push_back(partner);
        } else if (anchor != center && s.m >= 3) {
            std::vector<int> others;
            for (int v : backlog)
                if (v != anchor && v != center)
                    others.push_back(v);
            const int cap = s.cap2 ? 2 : s.m;
            auto receptions = [&](const std::vector<int>& set) {
                long long r = 0;
                for (int v = 1; v <= n; ++v) {
                    if (std::find(set.begin(), set.end(), v) != set.end())
                        continue;
                    for (int t : set)
                        if (w.adj(v, t))
                            ++r;
                }
                return r;
            };
            std::vector<int> best = txset;
            long long best_r = receptions(best);
            for (unsigned mask = 0; mask < (1u << others.size()); ++mask) {
                std::vector<int> cand{anchor};
                for (std::size_t i = 0; i < others.size(); ++i)
                    if (mask >> i & 1)
                        cand.push_back(others[i]);
                if (static_cast<int>(cand.size()) > cap)
                    continue;
                std::sort(cand.begin(), cand.end());
                long long r = receptions(cand);
                bool better;
                if (listen)
                    better = r > best_r || (r == best_r && (cand.size() < best.size() ||
                                                            (cand.size() == best.size() &&
                                                             cand < best)));
                else
                    better = cand.size() > best.size() ||
                             (cand.size() == best.size() &&
                              (r > best_r || (r == best_r && cand < best)));
                if (better) {
                    best = cand;
                    best_r = r;
                }
            }
            txset = best;
        }
        std::sort(txset.begin(), txset.end());
        for (int v : txset) {
            ++grants[v];
            if (s.mac != 0 && v != center)
                credit[v] -= sh.den;
        }

        // frames: (sender, payload bitmask)
        std::vector<std::pair<int, std::uint64_t>> frames;
        for (int t : txset) {
            if (t != center) {
                frames.emplace_back(t, 1ull << sent_upto[t]);
                ++sent_upto[t];
                continue;
            }
            bool own_left = sent_upto[center] < first_uid[center + 1];
            bool send_own = s.mac == 0 ? own_left : (relay.empty() && own_left);
            if (send_own) {
                frames.emplace_back(t, 1ull << sent_upto[center]);
                ++sent_upto[center];
                continue;
            }
            std::vector<int> payload;
            if (s.nc) {
                auto decodable = [&](const std::vector<int>& pl) {
                    if (pl.size() <= 1)
                        return true;
                    if (s.traffic == 0) {
                        for (int id : pl)
                            for (int other : pl)
                                if (other != id && !(have[pdest[id]] >> other & 1))
                                    return false;
                        return true;
                    }
                    for (int v = 1; v < n; ++v) {
                        int missing = 0;
                        for (int id : pl)
                            if (!(have[v] >> id & 1))
                                ++missing;
                        if (missing > 1)
                            return false;
                    }
                    return true;
                };
                if (s.cap2) {
                    std::vector<int> full;
                    for (int o = 1; o < n; ++o)
                        for (int id : relay)
                            if (origin[id] == o) {
                                full.push_back(id);
                                break;
                            }
                    if (static_cast<int>(full.size()) == w.edges && full.size() > 1 &&
                        decodable(full))
                        payload = full;
                }
                if (payload.empty()) {
                    payload.push_back(relay.front());
                    for (std::size_t i = 1;
                         i < relay.size() && static_cast<int>(payload.size()) < cbudget; ++i) {
                        int cand = relay[i];
                        bool clash = false;
                        for (int id : payload) {
                            if (s.traffic == 0 ? pdest[id] == pdest[cand]
                                               : origin[id] == origin[cand])
                                clash = true;
                        }
                        if (clash)
                            continue;
                        payload.push_back(cand);
                        if (!decodable(payload))
                            payload.pop_back();
                    }
                }
            } else {
                payload.push_back(relay.front());
            }
            std::uint64_t mask = 0;
            for (int id : payload) {
                mask |= 1ull << id;
                relay.erase(std::find(relay.begin(), relay.end(), id));
            }
            frames.emplace_back(t, mask);
        }

        // receptions
        for (int v = 1; v <= n; ++v) {
            if (std::find(txset.begin(), txset.end(), v) != txset.end())
                continue;
            for (auto& [sender, mask] : frames) {
                if (!w.adj(v, sender))
                    continue;
                std::uint64_t missing = mask & ~have[v];
                if ((popcount(mask) == 1 && missing) || popcount(missing) == 1) {
                    have[v] |= missing;
                    settle(bit_index(missing));
                }
                if (v == center && sender != center)
                    relay.push_back(bit_index(mask));
            }
        }
    }

    return out;
}

} // namespace oracle
