#include "vfcsim/solver.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace vfcsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
    int to;
    int cap;
    double cost;
    int rev;  // index of the reverse edge in graph[to]
};

class MinCostFlow {
public:
    explicit MinCostFlow(int n) : graph_(static_cast<std::size_t>(n)) {}

    void add_edge(int from, int to, int cap, double cost) {
        graph_[static_cast<std::size_t>(from)].push_back(
            {to, cap, cost, static_cast<int>(graph_[static_cast<std::size_t>(to)].size())});
        graph_[static_cast<std::size_t>(to)].push_back(
            {from, 0, -cost, static_cast<int>(graph_[static_cast<std::size_t>(from)].size()) - 1});
    }

    // Successive shortest augmenting paths with Johnson potentials. Reduced
    // costs are clamped at zero so float round-off on reverse edges cannot
    // fake a negative cycle, and the Dijkstra predecessor tree is acyclic by
    // construction.
    int run(int source, int sink) {
        const int n = static_cast<int>(graph_.size());
        std::vector<double> potential(static_cast<std::size_t>(n), 0.0);
        int pushed = 0;
        while (true) {
            std::vector<double> dist(static_cast<std::size_t>(n), kInf);
            std::vector<char> done(static_cast<std::size_t>(n), 0);
            std::vector<int> prev_node(static_cast<std::size_t>(n), -1);
            std::vector<int> prev_edge(static_cast<std::size_t>(n), -1);
            dist[static_cast<std::size_t>(source)] = 0.0;
            while (true) {
                int u = -1;
                double best = kInf;
                for (int v = 0; v < n; ++v) {
                    if (!done[static_cast<std::size_t>(v)] && dist[static_cast<std::size_t>(v)] < best) {
                        best = dist[static_cast<std::size_t>(v)];
                        u = v;
                    }
                }
                if (u < 0) break;
                done[static_cast<std::size_t>(u)] = 1;
                const auto& edges = graph_[static_cast<std::size_t>(u)];
                for (std::size_t e = 0; e < edges.size(); ++e) {
                    const Edge& edge = edges[e];
                    if (edge.cap <= 0) continue;
                    double reduced = edge.cost + potential[static_cast<std::size_t>(u)] -
                                     potential[static_cast<std::size_t>(edge.to)];
                    if (reduced < 0.0) reduced = 0.0;
                    const double nd = dist[static_cast<std::size_t>(u)] + reduced;
                    if (nd < dist[static_cast<std::size_t>(edge.to)]) {
                        dist[static_cast<std::size_t>(edge.to)] = nd;
                        prev_node[static_cast<std::size_t>(edge.to)] = u;
                        prev_edge[static_cast<std::size_t>(edge.to)] = static_cast<int>(e);
                    }
                }
            }
            if (dist[static_cast<std::size_t>(sink)] == kInf) return pushed;
            for (int v = 0; v < n; ++v) {
                if (dist[static_cast<std::size_t>(v)] < kInf) {
                    potential[static_cast<std::size_t>(v)] += dist[static_cast<std::size_t>(v)];
                }
            }
            for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
                Edge& e = graph_[static_cast<std::size_t>(prev_node[static_cast<std::size_t>(v)])]
                                [static_cast<std::size_t>(prev_edge[static_cast<std::size_t>(v)])];
                e.cap -= 1;
                graph_[static_cast<std::size_t>(v)][static_cast<std::size_t>(e.rev)].cap += 1;
            }
            ++pushed;
        }
    }

    const std::vector<Edge>& edges_from(int node) const {
        return graph_[static_cast<std::size_t>(node)];
    }

private:
    std::vector<std::vector<Edge>> graph_;
};

// Requesters of each distinct requested content.
std::vector<std::pair<int, std::vector<int>>> group_requests(const RequestMatrix& requests) {
    std::map<int, std::vector<int>> by_content;
    for (const auto& [i, f] : requests.requests) by_content[f].push_back(i);
    return {by_content.begin(), by_content.end()};
}

void fill_remaining(CachingDecision& decision, const CapacityPlan& plan,
                    const ContentCatalog& catalog, const std::unordered_set<int>& reserved) {
    // Pad every node to exact capacity with the lowest unused catalog ids;
    // reserved ids (requested contents already assigned, including those the
    // solver sent to the cloud) are skipped.
    std::unordered_set<int> used = reserved;
    for (const auto& ids : decision.platoon) used.insert(ids.begin(), ids.end());
    for (const auto& ids : decision.vfc) used.insert(ids.begin(), ids.end());

    auto it = catalog.items().begin();
    auto next_filler = [&]() {
        while (it != catalog.items().end() && used.count(it->content_id)) ++it;
        if (it == catalog.items().end()) throw std::logic_error("catalog exhausted while filling slots");
        used.insert(it->content_id);
        return (it++)->content_id;
    };

    for (std::size_t j = 0; j < decision.platoon.size(); ++j) {
        while (static_cast<int>(decision.platoon[j].size()) < plan.platoon_slots[j]) {
            decision.platoon[j].push_back(next_filler());
        }
        std::sort(decision.platoon[j].begin(), decision.platoon[j].end());
    }
    for (std::size_t k = 0; k < decision.vfc.size(); ++k) {
        while (static_cast<int>(decision.vfc[k].size()) < plan.vfc_slots[k]) {
            decision.vfc[k].push_back(next_filler());
        }
        std::sort(decision.vfc[k].begin(), decision.vfc[k].end());
    }

    std::unordered_set<int> cached;
    for (const auto& ids : decision.platoon) cached.insert(ids.begin(), ids.end());
    for (const auto& ids : decision.vfc) cached.insert(ids.begin(), ids.end());
    decision.cloud.clear();
    for (const ContentItem& item : catalog.items()) {
        if (!cached.count(item.content_id)) decision.cloud.push_back(item.content_id);
    }
}

}  // namespace

CachingDecision clairvoyant_place(const RequestMatrix& requests, const CapacityPlan& plan,
                                  const DelayTables& tables, const ContentCatalog& catalog) {
    const int total_slots = plan.total();
    if (static_cast<int>(catalog.size()) < total_slots) {
        throw std::invalid_argument("catalog of " + std::to_string(catalog.size()) +
                                    " contents cannot fill " + std::to_string(total_slots) +
                                    " cache slots");
    }

    const auto grouped = group_requests(requests);
    const int q = static_cast<int>(grouped.size());
    const int n_platoon = static_cast<int>(plan.platoon_slots.size());
    const int n_vfc = static_cast<int>(plan.vfc_slots.size());

    // Slots not taken by requested contents must be backfilled by unrequested
    // ones, so at least p_min requested contents have to be cached.
    const int p_min = std::max(0, total_slots + q - static_cast<int>(catalog.size()));

    // Nodes: 0 source | 1..q contents | platoon | vfc | cloud | sink.
    const int source = 0;
    const int first_platoon = 1 + q;
    const int first_vfc = first_platoon + n_platoon;
    const int cloud = first_vfc + n_vfc;
    const int sink = cloud + 1;
    MinCostFlow flow(sink + 1);

    for (int c = 0; c < q; ++c) {
        flow.add_edge(source, 1 + c, 1, 0.0);
        const auto& requesters = grouped[static_cast<std::size_t>(c)].second;
        // platoon edges first so equal-cost ties resolve toward the platoon
        for (int j = 1; j <= n_platoon; ++j) {
            double cost = 0.0;
            for (int i : requesters) cost += platoon_delay(tables, i, j);
            flow.add_edge(1 + c, first_platoon + (j - 1), 1, cost);
        }
        for (int k = 1; k <= n_vfc; ++k) {
            double cost = 0.0;
            for (int i : requesters) cost += vfc_delay(tables, i, k);
            flow.add_edge(1 + c, first_vfc + (k - 1), 1, cost);
        }
        double cloud_cost = 0.0;
        for (int i : requesters) cloud_cost += rsu_delay(tables, i);
        flow.add_edge(1 + c, cloud, 1, cloud_cost);
    }
    for (int j = 0; j < n_platoon; ++j) {
        flow.add_edge(first_platoon + j, sink, plan.platoon_slots[static_cast<std::size_t>(j)], 0.0);
    }
    for (int k = 0; k < n_vfc; ++k) {
        flow.add_edge(first_vfc + k, sink, plan.vfc_slots[static_cast<std::size_t>(k)], 0.0);
    }
    flow.add_edge(cloud, sink, q - p_min, 0.0);

    const int pushed = flow.run(source, sink);
    if (pushed != q) {
        throw std::logic_error("placement flow is infeasible: pushed " + std::to_string(pushed) +
                               " of " + std::to_string(q));
    }

    CachingDecision decision;
    decision.platoon.resize(static_cast<std::size_t>(n_platoon));
    decision.vfc.resize(static_cast<std::size_t>(n_vfc));
    std::unordered_set<int> reserved;
    for (int c = 0; c < q; ++c) {
        const int f = grouped[static_cast<std::size_t>(c)].first;
        reserved.insert(f);
        for (const Edge& e : flow.edges_from(1 + c)) {
            if (e.cost < 0.0 || e.cap != 0 || e.to == source) continue;  // only saturated forward edges
            if (e.to >= first_platoon && e.to < first_vfc) {
                decision.platoon[static_cast<std::size_t>(e.to - first_platoon)].push_back(f);
            } else if (e.to >= first_vfc && e.to < cloud) {
                decision.vfc[static_cast<std::size_t>(e.to - first_vfc)].push_back(f);
            }
            // cloud assignments stay reserved and land in the cloud tier
            break;
        }
    }

    fill_remaining(decision, plan, catalog, reserved);
    return decision;
}

CachingDecision brute_force_place(const RequestMatrix& requests, const CapacityPlan& plan,
                                  const DelayTables& tables, const ContentCatalog& catalog) {
    const int total_slots = plan.total();
    if (static_cast<int>(catalog.size()) > 8 || total_slots > 6) {
        throw std::invalid_argument("brute force guard: needs catalog <= 8 and slots <= 6");
    }
    if (static_cast<int>(catalog.size()) < total_slots) {
        throw std::invalid_argument("catalog cannot fill the cache slots");
    }

    const int n_platoon = static_cast<int>(plan.platoon_slots.size());
    const int n_nodes = n_platoon + static_cast<int>(plan.vfc_slots.size());
    std::vector<int> caps;
    for (int c : plan.platoon_slots) caps.push_back(c);
    for (int c : plan.vfc_slots) caps.push_back(c);

    std::vector<int> contents;
    for (const ContentItem& item : catalog.items()) contents.push_back(item.content_id);
    const int n_contents = static_cast<int>(contents.size());

    // Per-content cost of each label (node 0..n_nodes-1, cloud = n_nodes).
    std::map<int, std::vector<int>> requesters;
    for (const auto& [i, f] : requests.requests) requesters[f].push_back(i);
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(n_contents),
                                          std::vector<double>(static_cast<std::size_t>(n_nodes) + 1, 0.0));
    for (int c = 0; c < n_contents; ++c) {
        auto it = requesters.find(contents[static_cast<std::size_t>(c)]);
        if (it == requesters.end()) continue;
        for (int node = 0; node < n_nodes; ++node) {
            double d = 0.0;
            for (int i : it->second) {
                d += node < n_platoon ? platoon_delay(tables, i, node + 1)
                                      : vfc_delay(tables, i, node - n_platoon + 1);
            }
            cost[static_cast<std::size_t>(c)][static_cast<std::size_t>(node)] = d;
        }
        double d = 0.0;
        for (int i : it->second) d += rsu_delay(tables, i);
        cost[static_cast<std::size_t>(c)][static_cast<std::size_t>(n_nodes)] = d;
    }

    std::vector<int> label(static_cast<std::size_t>(n_contents), -1);
    std::vector<int> remaining = caps;
    double best_objective = kInf;
    bool have_best = false;
    CachingDecision best;
    RankedList best_list;

    auto build_decision = [&]() {
        CachingDecision d;
        d.platoon.resize(plan.platoon_slots.size());
        d.vfc.resize(plan.vfc_slots.size());
        for (int c = 0; c < n_contents; ++c) {
            const int l = label[static_cast<std::size_t>(c)];
            const int f = contents[static_cast<std::size_t>(c)];
            if (l == n_nodes) {
                d.cloud.push_back(f);
            } else if (l < n_platoon) {
                d.platoon[static_cast<std::size_t>(l)].push_back(f);
            } else {
                d.vfc[static_cast<std::size_t>(l - n_platoon)].push_back(f);
            }
        }
        return d;
    };

    // Slack absorbs float summation-order noise so pruning never cuts an
    // optimum that canonical evaluation would accept.
    const double eps = 1e-12;

    auto recurse = [&](auto&& self, int c, int slots_left, double partial) -> void {
        if (partial > best_objective * static_cast<double>(tables.n_vehicles) + eps && have_best) {
            return;
        }
        if (c == n_contents) {
            if (slots_left != 0) return;
            CachingDecision d = build_decision();
            const double objective = round_delay(requests, d, tables).objective_s;
            RankedList list = decision_to_list(d);
            if (!have_best || objective < best_objective ||
                (objective == best_objective && list.ids < best_list.ids)) {
                have_best = true;
                best_objective = objective;
                best = std::move(d);
                best_list = std::move(list);
            }
            return;
        }
        if (n_contents - c < slots_left) return;  // cannot fill remaining slots
        for (int node = 0; node < n_nodes; ++node) {
            if (remaining[static_cast<std::size_t>(node)] == 0) continue;
            remaining[static_cast<std::size_t>(node)] -= 1;
            label[static_cast<std::size_t>(c)] = node;
            self(self, c + 1, slots_left - 1,
                 partial + cost[static_cast<std::size_t>(c)][static_cast<std::size_t>(node)]);
            remaining[static_cast<std::size_t>(node)] += 1;
        }
        label[static_cast<std::size_t>(c)] = n_nodes;
        self(self, c + 1, slots_left,
             partial + cost[static_cast<std::size_t>(c)][static_cast<std::size_t>(n_nodes)]);
        label[static_cast<std::size_t>(c)] = -1;
    };
    recurse(recurse, 0, total_slots, 0.0);

    if (!have_best) throw std::logic_error("brute force found no feasible decision");
    return best;
}

}  // namespace vfcsim
