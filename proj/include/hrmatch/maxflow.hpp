#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace hrmatch {

// Dinic's algorithm, integer capacities. Used for the lower-quota feasibility
// check and for maximum-matching sizes.
class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}

    void add_edge(int u, int v, int32_t cap) {
        edges_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({u, head_[v], 0});
        head_[v] = static_cast<int>(edges_.size()) - 1;
    }

    int64_t run(int s, int t) {
        int64_t flow = 0;
        while (bfs(s, t)) {
            it_ = head_;
            int64_t f;
            while ((f = dfs(s, t, INT64_MAX)) > 0) flow += f;
        }
        return flow;
    }

private:
    struct Edge {
        int to, next;
        int32_t cap;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        level_[s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[u]; e >= 0; e = edges_[e].next) {
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    int64_t dfs(int u, int t, int64_t f) {
        if (u == t) return f;
        for (int& e = it_[u]; e >= 0; e = edges_[e].next) {
            Edge& ed = edges_[e];
            if (ed.cap > 0 && level_[ed.to] == level_[u] + 1) {
                int64_t d = dfs(ed.to, t, f < ed.cap ? f : ed.cap);
                if (d > 0) {
                    ed.cap -= static_cast<int32_t>(d);
                    edges_[e ^ 1].cap += static_cast<int32_t>(d);
                    return d;
                }
            }
        }
        return 0;
    }

    std::vector<Edge> edges_;
    std::vector<int> head_, level_, it_;
};

}  // namespace hrmatch
