#ifndef VANETLAB_GRAPH_HPP
#define VANETLAB_GRAPH_HPP

#include <iosfwd>
#include <vector>

namespace vanetlab {

// Undirected graph over dense node ids 0..n-1. No self-loops, no parallel
// edges; adjacency lists kept sorted for deterministic traversal.
class GraphSnapshot {
public:
    GraphSnapshot() = default;
    explicit GraphSnapshot(int n);

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;

    int node_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return edge_count_; }
    const std::vector<int>& neighbors(int u) const;

    // Parses one "u v" pair per line; '#' starts a comment.
    static GraphSnapshot from_edge_list(std::istream& in);

private:
    void check_node(int u) const;
    std::vector<std::vector<int>> adj_;
    int edge_count_ = 0;
};

// Hop distances from src; -1 for unreachable nodes.
std::vector<int> bfs_distances(const GraphSnapshot& g, int src);

}  // namespace vanetlab

#endif
