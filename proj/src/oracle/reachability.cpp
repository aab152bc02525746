#include <algorithm>
#include <deque>

#include "ru/oracle/naive.hpp"

namespace ru::oracle {

std::vector<std::uint32_t> reachable(const LabeledEdges& g, std::uint32_t source, std::uint32_t label) {
  std::vector<std::vector<std::uint32_t>> adj(g.nodes);
  for (const auto& e : g.edges) {
    if (e[1] == label) adj[e[0]].push_back(e[2]);
  }
  std::vector<char> seen(g.nodes, 0);
  std::deque<std::uint32_t> queue{source};
  std::vector<std::uint32_t> out;
  while (!queue.empty()) {
    const std::uint32_t n = queue.front();
    queue.pop_front();
    for (std::uint32_t m : adj[n]) {
      if (seen[m]) continue;
      seen[m] = 1;
      out.push_back(m);
      queue.push_back(m);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ru::oracle
