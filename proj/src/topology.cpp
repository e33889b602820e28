#include "hadmm/topology.hpp"

#include <string>

namespace hadmm {

AdjacencyMatrix::AdjacencyMatrix(int n_agents) : n_(n_agents) {
    if (n_agents < 0) throw InputError("n_agents must be nonnegative");
    entries_.assign(static_cast<std::size_t>(n_) * n_, 0);
}

bool AdjacencyMatrix::operator()(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw InputError("adjacency index out of range");
    return entries_[static_cast<std::size_t>(i) * n_ + j] != 0;
}

void AdjacencyMatrix::set(int i, int j, bool linked) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw InputError("adjacency index out of range");
    if (i == j && linked) throw InputError("self links are not allowed");
    entries_[static_cast<std::size_t>(i) * n_ + j] = linked ? 1 : 0;
}

int AdjacencyMatrix::link_count() const {
    int c = 0;
    for (char e : entries_) c += e;
    return c;
}

bool AdjacencyMatrix::symmetric() const {
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

AdjacencyMatrix build_adjacency(const std::vector<Vec>& positions, double d_safe, double d_cmu) {
    if (!(d_safe > 0.0)) throw InputError("d_safe must be positive");
    if (!(d_cmu > d_safe)) throw InputError("d_cmu must exceed d_safe");
    const int n = static_cast<int>(positions.size());
    AdjacencyMatrix adj(n);
    if (n == 0) return adj;
    const auto dim = positions.front().size();
    for (const auto& p : positions)
        if (p.size() != dim) throw InputError("positions have mismatched dimensions");
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = (positions[i] - positions[j]).norm();
            const bool linked = d >= d_safe && d <= d_cmu;
            adj.set(i, j, linked);
            adj.set(j, i, linked);
        }
    }
    return adj;
}

AdjacencyMatrix upper_triangular_topology(int n_agents) {
    if (n_agents < 2) throw InputError("n_agents >= 2 required, got " + std::to_string(n_agents));
    AdjacencyMatrix adj(n_agents);
    for (int i = 0; i < n_agents; ++i)
        for (int j = i + 1; j < n_agents; ++j) adj.set(i, j, true);
    return adj;
}

NeighborSet neighbors(const AdjacencyMatrix& adj, int i) {
    if (i < 0 || i >= adj.n_agents()) throw InputError("agent index out of range");
    NeighborSet ns;
    ns.agent_id = i;
    for (int j = 0; j < adj.n_agents(); ++j)
        if (adj(i, j)) ns.neighbor_ids.push_back(j);
    return ns;
}

}  // namespace hadmm
