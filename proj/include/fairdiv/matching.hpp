#pragma once

#include <vector>

namespace fairdiv {

/// Bipartite graph with sorted adjacency lists (left index -> right indices).
/// Sortedness is part of the contract: it pins down the matching returned by
/// max_matching, which downstream round-based algorithms rely on for
/// reproducible traces.
struct BipartiteGraph {
    int left_count = 0;
    int right_count = 0;
    std::vector<std::vector<int>> adjacency;
};

struct Matching {
    std::vector<int> left_to_right;  // -1 where unmatched
    std::vector<int> right_to_left;
    int size = 0;
};

/// Deterministic maximum matching: augmenting paths are explored from left
/// nodes in ascending order, scanning each adjacency list in ascending order.
Matching max_matching(const BipartiteGraph& graph);

}  // namespace fairdiv
