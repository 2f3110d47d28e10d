#include "vanetlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vanetlab {

GraphSnapshot::GraphSnapshot(int n) {
    if (n < 0) throw std::domain_error("GraphSnapshot: negative node count");
    adj_.resize(n);
}

void GraphSnapshot::check_node(int u) const {
    if (u < 0 || u >= node_count()) throw std::domain_error("GraphSnapshot: node id out of range");
}

void GraphSnapshot::add_edge(int u, int v) {
    check_node(u);
    check_node(v);
    if (u == v) throw std::domain_error("GraphSnapshot: self-loop");
    if (has_edge(u, v)) return;
    adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
    ++edge_count_;
}

bool GraphSnapshot::has_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

const std::vector<int>& GraphSnapshot::neighbors(int u) const {
    check_node(u);
    return adj_[u];
}

GraphSnapshot GraphSnapshot::from_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int max_id = -1;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u)) continue;
        if (!(ls >> v)) throw std::runtime_error("edge list: dangling node id in line: " + line);
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }
    GraphSnapshot g(max_id + 1);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

std::vector<int> bfs_distances(const GraphSnapshot& g, int src) {
    if (src < 0 || src >= g.node_count()) throw std::domain_error("bfs_distances: bad source");
    std::vector<int> dist(g.node_count(), -1);
    std::deque<int> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

}  // namespace vanetlab
