#pragma once

#include <cstdint>
#include <vector>

namespace normins {

// Maximum bipartite matching by augmenting paths. Left nodes are tried in
// ascending order and each adjacency list in the order given, so the result
// is a deterministic function of the input.
struct BipartiteMatching {
  std::vector<int> left_to_right, right_to_left;
  std::size_t size = 0;
};

inline BipartiteMatching max_matching(const std::vector<std::vector<int>>& adj, std::size_t right_count) {
  const std::size_t L = adj.size();
  BipartiteMatching m;
  m.left_to_right.assign(L, -1);
  m.right_to_left.assign(right_count, -1);
  std::vector<std::uint32_t> stamp(right_count, 0);
  std::uint32_t round = 0;

  // iterative DFS: frames of (left node, next adjacency index)
  std::vector<std::pair<int, std::size_t>> stack;
  for (std::size_t s = 0; s < L; ++s) {
    ++round;
    stack.assign(1, {static_cast<int>(s), 0});
    bool found = false;
    while (!stack.empty() && !found) {
      auto& [u, i] = stack.back();
      if (i == adj[u].size()) {
        stack.pop_back();
        continue;
      }
      int r = adj[u][i++];
      if (stamp[r] == round) continue;
      stamp[r] = round;
      if (m.right_to_left[r] < 0) {
        // flip the path
        int want = r;
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          int lu = it->first;
          int prev = m.left_to_right[lu];
          m.left_to_right[lu] = want;
          m.right_to_left[want] = lu;
          want = prev;
        }
        found = true;
      } else {
        stack.emplace_back(m.right_to_left[r], 0);
      }
    }
    if (found) ++m.size;
  }
  return m;
}

}  // namespace normins
