#pragma once

#include <vector>

namespace copesim {

// Nodes are numbered 1..n; node n is the single relay ("center").
using Node = int;

enum class Kind { Cross, X };

// Single-relay topology component. Immutable after build_component();
// safe to share read-only across concurrent simulation runs.
struct TopologyComponent {
    Kind kind = Kind::Cross;
    int n = 0;
    std::vector<std::vector<char>> adj; // (n+1) x (n+1), symmetric, irreflexive
    std::vector<Node> x1, x2;           // edge-node partition (X kind only)
    std::vector<Node> flow_map;         // [1..n] -> destination node

    Node center() const { return n; }
    int edge_count() const { return n - 1; }
    bool is_edge(Node v) const { return v >= 1 && v < n; }
    bool adjacent(Node a, Node b) const { return adj[a][b] != 0; }
};

// Edge node paired with i on the cross component (the one it cannot hear).
Node opposite_edge(int n, Node i);

// Builds a validated component. Cross needs an even edge count; X splits the
// edges into {1..x1_size} and {x1_size+1..n-1} with cyclic cross-set flows.
// The center's own flow terminates at node 1.
// Throws std::invalid_argument on violated preconditions.
TopologyComponent build_component(Kind kind, int n, int x1_size = 0);

// Nodes adjacent to `node`, ascending. Throws std::out_of_range for unknown nodes.
std::vector<Node> neighbors(const TopologyComponent& c, Node node);

// Destination of the flow originating at `node`.
Node flow_dest(const TopologyComponent& c, Node node);

} // namespace copesim
