#include "copesim/topology.hpp"

#include <stdexcept>
#include <string>

namespace copesim {

Node opposite_edge(int n, Node i) {
    int edges = n - 1;
    return ((i - 1 + edges / 2) % edges) + 1;
}

static void check_node(const TopologyComponent& c, Node node) {
    if (node < 1 || node > c.n)
        throw std::out_of_range("unknown node " + std::to_string(node));
}

TopologyComponent build_component(Kind kind, int n, int x1_size) {
    if (n < 3)
        throw std::invalid_argument("component needs at least 3 nodes");
    if (kind == Kind::Cross && (n - 1) % 2 != 0)
        throw std::invalid_argument("cross component needs an even number of edge nodes");
    if (kind == Kind::X && (x1_size < 1 || x1_size > n - 2))
        throw std::invalid_argument("x1_size must be in [1, n-2]");

    TopologyComponent c;
    c.kind = kind;
    c.n = n;
    c.adj.assign(n + 1, std::vector<char>(n + 1, 0));
    c.flow_map.assign(n + 1, 0);

    auto connect = [&](Node a, Node b) {
        c.adj[a][b] = 1;
        c.adj[b][a] = 1;
    };

    // Center hears every node in both kinds.
    for (Node i = 1; i < n; ++i)
        connect(i, n);

    if (kind == Kind::Cross) {
        for (Node i = 1; i < n; ++i)
            for (Node j = i + 1; j < n; ++j)
                if (opposite_edge(n, i) != j)
                    connect(i, j);
        for (Node i = 1; i < n; ++i)
            c.flow_map[i] = opposite_edge(n, i);
    } else {
        for (Node i = 1; i <= x1_size; ++i)
            c.x1.push_back(i);
        for (Node i = x1_size + 1; i < n; ++i)
            c.x2.push_back(i);
        for (std::size_t a = 0; a < c.x1.size(); ++a)
            for (std::size_t b = a + 1; b < c.x1.size(); ++b)
                connect(c.x1[a], c.x1[b]);
        for (std::size_t a = 0; a < c.x2.size(); ++a)
            for (std::size_t b = a + 1; b < c.x2.size(); ++b)
                connect(c.x2[a], c.x2[b]);
        // Cyclic cross-set pairing: k-th of one set flows to k-th of the other.
        for (std::size_t k = 0; k < c.x1.size(); ++k)
            c.flow_map[c.x1[k]] = c.x2[k % c.x2.size()];
        for (std::size_t k = 0; k < c.x2.size(); ++k)
            c.flow_map[c.x2[k]] = c.x1[k % c.x1.size()];
    }
    c.flow_map[n] = 1;
    return c;
}

std::vector<Node> neighbors(const TopologyComponent& c, Node node) {
    check_node(c, node);
    std::vector<Node> out;
    for (Node v = 1; v <= c.n; ++v)
        if (c.adj[node][v])
            out.push_back(v);
    return out;
}

Node flow_dest(const TopologyComponent& c, Node node) {
    check_node(c, node);
    return c.flow_map[node];
}

} // namespace copesim
