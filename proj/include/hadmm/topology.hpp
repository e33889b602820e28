#pragma once

#include "hadmm/types.hpp"

#include <vector>

namespace hadmm {

// Directed link table between agents. Entry (i, j) means agent i enforces a
// separation constraint against agent j. Indices are 0-based.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(int n_agents = 0);

    int n_agents() const { return n_; }
    bool operator()(int i, int j) const;
    void set(int i, int j, bool linked);
    int link_count() const;
    bool symmetric() const;

private:
    int n_;
    std::vector<char> entries_;
};

struct NeighborSet {
    int agent_id = 0;
    std::vector<int> neighbor_ids;  // ascending
    int r() const { return static_cast<int>(neighbor_ids.size()); }
};

// Links every pair whose distance lies in [d_safe, d_cmu].
AdjacencyMatrix build_adjacency(const std::vector<Vec>& positions, double d_safe, double d_cmu);

// Agent i is responsible for agents i+1..N-1.
AdjacencyMatrix upper_triangular_topology(int n_agents);

NeighborSet neighbors(const AdjacencyMatrix& adj, int i);

}  // namespace hadmm
