#include "troplin/zoo.hpp"

#include <stdexcept>
#include <utility>

namespace troplin {

namespace {

GraphPtr from_pairs(int nv, const std::vector<std::pair<int, int>>& pairs,
                    const std::vector<Q>& lens) {
  std::vector<Edge> es;
  for (size_t i = 0; i < pairs.size(); ++i)
    es.push_back({pairs[i].first, pairs[i].second, lens.empty() ? Q(1) : lens[i % lens.size()]});
  return make_graph(nv, std::move(es));
}

}  // namespace

GraphPtr segment_graph(const Q& len) { return from_pairs(2, {{0, 1}}, {len}); }

GraphPtr circle_graph(const std::vector<Q>& lens) {
  int n = static_cast<int>(lens.size());
  if (n < 1) throw std::invalid_argument("circle needs an arc");
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < n; ++i) p.push_back({i, (i + 1) % n});
  return from_pairs(n, p, lens);
}

GraphPtr theta_graph(const std::vector<Q>& lens) {
  return from_pairs(2, {{0, 1}, {0, 1}, {0, 1}}, lens);
}

GraphPtr k4_graph(const std::vector<Q>& lens) {
  return from_pairs(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, lens);
}

GraphPtr cube_graph(const std::vector<Q>& lens) {
  std::vector<std::pair<int, int>> p;
  for (int v = 0; v < 8; ++v)
    for (int b = 0; b < 3; ++b) {
      int u = v ^ (1 << b);
      if (v < u) p.push_back({v, u});
    }
  return from_pairs(8, p, lens);
}

GraphPtr petersen_graph(const std::vector<Q>& lens) {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < 5; ++i) p.push_back({i, (i + 1) % 5});
  for (int i = 0; i < 5; ++i) p.push_back({i, i + 5});
  for (int i = 0; i < 5; ++i) p.push_back({5 + i, 5 + (i + 2) % 5});
  return from_pairs(10, p, lens);
}

GraphPtr named_graph(const std::string& name, const std::vector<Q>& lens) {
  if (name == "k4") return k4_graph(lens);
  if (name == "theta") return theta_graph(lens);
  if (name == "cube") return cube_graph(lens);
  if (name == "petersen") return petersen_graph(lens);
  throw std::invalid_argument("unknown graph: " + name);
}

}  // namespace troplin
