#include "fairdiv/matching.hpp"

#include <algorithm>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

bool augment(const BipartiteGraph& g, int left, std::vector<int>& left_to_right,
             std::vector<int>& right_to_left, std::vector<char>& visited) {
    for (int right : g.adjacency[left]) {
        if (visited[right]) continue;
        visited[right] = 1;
        if (right_to_left[right] == -1 ||
            augment(g, right_to_left[right], left_to_right, right_to_left, visited)) {
            left_to_right[left] = right;
            right_to_left[right] = left;
            return true;
        }
    }
    return false;
}

}  // namespace

Matching max_matching(const BipartiteGraph& graph) {
    if (static_cast<int>(graph.adjacency.size()) != graph.left_count)
        throw ValidationError("adjacency size does not match left_count");
    for (const auto& row : graph.adjacency) {
        if (!std::is_sorted(row.begin(), row.end()))
            throw ValidationError("adjacency lists must be sorted ascending");
        if (!row.empty() && (row.front() < 0 || row.back() >= graph.right_count))
            throw ValidationError("adjacency endpoint out of range");
        if (std::adjacent_find(row.begin(), row.end()) != row.end())
            throw ValidationError("duplicate edge in adjacency list");
    }

    Matching matching;
    matching.left_to_right.assign(graph.left_count, -1);
    matching.right_to_left.assign(graph.right_count, -1);

    std::vector<char> visited(graph.right_count, 0);
    for (int left = 0; left < graph.left_count; ++left) {
        std::fill(visited.begin(), visited.end(), 0);
        if (augment(graph, left, matching.left_to_right, matching.right_to_left, visited))
            ++matching.size;
    }
    return matching;
}

}  // namespace fairdiv
