#pragma once

#include <limits>
#include <queue>
#include <vector>

namespace pantograph {

// Dinic max-flow with double capacities; sized for the bipartite feasibility
// graphs used by the Levy-Prokhorov checks.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}

  void add_edge(int u, int v, double cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = int(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0.0});
    head_[v] = int(edges_.size()) - 1;
  }

  double run(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      it_ = head_;
      double f;
      while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > eps_) flow += f;
    }
    return flow;
  }

 private:
  struct Edge {
    int to, next;
    double cap;
  };
  std::vector<int> head_, level_, it_;
  std::vector<Edge> edges_;
  static constexpr double eps_ = 1e-14;

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e = head_[u]; e != -1; e = edges_[e].next) {
        if (edges_[e].cap > eps_ && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          q.push(edges_[e].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(int u, int t, double pushed) {
    if (u == t) return pushed;
    for (int& e = it_[u]; e != -1; e = edges_[e].next) {
      Edge& ed = edges_[e];
      if (ed.cap > eps_ && level_[ed.to] == level_[u] + 1) {
        double f = dfs(ed.to, t, std::min(pushed, ed.cap));
        if (f > eps_) {
          ed.cap -= f;
          edges_[e ^ 1].cap += f;
          return f;
        }
      }
    }
    return 0.0;
  }
};

}  // namespace pantograph
