#include "netflow/graph.hpp"

#include <algorithm>
#include <sstream>

#include "netflow/errors.hpp"

namespace netflow {

namespace {

std::string vname(std::size_t v) { return "v" + std::to_string(v + 1); }
std::string ename(std::size_t j) { return "e" + std::to_string(j + 1); }

std::string join_messages(const std::vector<Violation>& violations) {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].message;
    }
    return os.str();
}

} // namespace

DirectedGraph::DirectedGraph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)), out_degree_(vertex_count, 0) {
    for (std::size_t j = 0; j < edges_.size(); ++j) {
        const Edge& e = edges_[j];
        lookup_.try_emplace({e.tail, e.head}, j);
        if (e.tail < vertex_count_) {
            max_out_degree_ = std::max(max_out_degree_, ++out_degree_[e.tail]);
        }
    }
}

std::optional<std::size_t> DirectedGraph::find_edge(std::size_t tail, std::size_t head) const {
    auto it = lookup_.find({tail, head});
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t DirectedGraph::out_degree(std::size_t v) const { return out_degree_.at(v); }

GraphValidation validate_graph(const DirectedGraph& g) {
    GraphValidation result;
    result.max_out_degree = g.max_out_degree();
    const auto& edges = g.edges();
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const Edge& e = edges[j];
        for (std::size_t v : {e.tail, e.head}) {
            if (v >= g.vertex_count()) {
                result.violations.push_back({ViolationKind::VertexOutOfRange,
                                             ename(j) + " references " + vname(v) + " but the graph has " +
                                                 std::to_string(g.vertex_count()) + " vertices",
                                             {j, v}});
            }
        }
        if (e.tail == e.head) {
            result.violations.push_back({ViolationKind::Loop, "loop at " + vname(e.tail) + " (" + ename(j) + ")",
                                         {e.tail, j}});
        }
        auto first = g.find_edge(e.tail, e.head);
        if (first && *first != j) {
            result.violations.push_back({ViolationKind::ParallelEdge,
                                         "parallel edge " + ename(j) + " duplicates " + ename(*first) + " (" +
                                             vname(e.tail) + "," + vname(e.head) + ")",
                                         {*first, j}});
        }
    }
    return result;
}

HomomorphismCheck check_homomorphism(const DirectedGraph& source, const DirectedGraph& target,
                                     std::span<const std::size_t> vertex_map) {
    if (vertex_map.size() != source.vertex_count()) {
        throw MalformedInputError("graph-core", "vertex map has " + std::to_string(vertex_map.size()) +
                                                    " entries, source has " +
                                                    std::to_string(source.vertex_count()) + " vertices");
    }
    HomomorphismCheck check;
    for (std::size_t v = 0; v < vertex_map.size(); ++v) {
        if (vertex_map[v] >= target.vertex_count()) {
            check.violations.push_back({ViolationKind::MapOutOfRange,
                                        vname(v) + " maps to " + vname(vertex_map[v]) + " outside the target",
                                        {v}});
        }
    }
    if (!check.violations.empty()) return check;

    std::vector<std::size_t> sorted(vertex_map.begin(), vertex_map.end());
    std::sort(sorted.begin(), sorted.end());
    check.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();

    std::vector<std::size_t> edge_map;
    edge_map.reserve(source.edge_count());
    for (std::size_t j = 0; j < source.edge_count(); ++j) {
        const Edge& e = source.edge(j);
        const std::size_t t = vertex_map[e.tail];
        const std::size_t h = vertex_map[e.head];
        auto image = target.find_edge(t, h);
        if (!image) {
            check.violations.push_back({ViolationKind::MissingEdgeImage,
                                        "image of " + ename(j) + "=(" + vname(e.tail) + "," + vname(e.head) +
                                            ") is (" + vname(t) + "," + vname(h) + "), not an edge",
                                        {j}});
            continue;
        }
        edge_map.push_back(*image);
    }
    if (check.violations.empty()) check.edge_map = std::move(edge_map);
    return check;
}

GraphHomomorphism GraphHomomorphism::make(GraphPtr source, GraphPtr target, std::vector<std::size_t> vertex_map) {
    auto check = check_homomorphism(*source, *target, vertex_map);
    if (!check.ok()) {
        throw UnsupportedInputError("graph-core", "not a homomorphism: " + join_messages(check.violations));
    }
    GraphHomomorphism h;
    h.source_ = std::move(source);
    h.target_ = std::move(target);
    h.vertex_map_ = std::move(vertex_map);
    h.edge_map_ = std::move(check.edge_map);
    h.injective_ = check.injective;
    return h;
}

GraphHomomorphism GraphHomomorphism::identity(GraphPtr g) {
    std::vector<std::size_t> map(g->vertex_count());
    for (std::size_t v = 0; v < map.size(); ++v) map[v] = v;
    return make(g, g, std::move(map));
}

GraphHomomorphism compose(const GraphHomomorphism& second, const GraphHomomorphism& first) {
    if (!(first.target() == second.source())) {
        throw MalformedInputError("graph-core", "composition of non-adjacent homomorphisms");
    }
    std::vector<std::size_t> map(first.vertex_map().size());
    for (std::size_t v = 0; v < map.size(); ++v) map[v] = second.vertex_map()[first.vertex_map()[v]];
    return GraphHomomorphism::make(first.source_ptr(), second.target_ptr(), std::move(map));
}

GraphSequence::GraphSequence(std::vector<GraphPtr> graphs, std::vector<GraphHomomorphism> links)
    : graphs_(std::move(graphs)), links_(std::move(links)) {
    if (graphs_.empty()) throw MalformedInputError("graph-core", "empty graph sequence");
    if (links_.size() + 1 != graphs_.size()) {
        throw MalformedInputError("graph-core", "a sequence of " + std::to_string(graphs_.size()) +
                                                    " graphs needs " + std::to_string(graphs_.size() - 1) +
                                                    " links");
    }
    for (std::size_t n = 0; n < graphs_.size(); ++n) {
        auto v = validate_graph(*graphs_[n]);
        if (!v.ok()) {
            throw UnsupportedInputError("graph-core",
                                        "G_" + std::to_string(n + 1) + " is not simple: " + join_messages(v.violations));
        }
    }
    for (std::size_t n = 0; n < links_.size(); ++n) {
        const auto& phi = links_[n];
        if (!(phi.source() == *graphs_[n]) || !(phi.target() == *graphs_[n + 1])) {
            throw MalformedInputError("graph-core", "link " + std::to_string(n + 1) + " does not connect G_" +
                                                        std::to_string(n + 1) + " to G_" + std::to_string(n + 2));
        }
        if (!phi.injective()) {
            throw UnsupportedInputError("graph-core", "link " + std::to_string(n + 1) + " is not injective");
        }
    }
}

GraphHomomorphism GraphSequence::inclusion(std::size_t from, std::size_t to) const {
    if (from > to || to >= graphs_.size()) throw MalformedInputError("graph-core", "bad inclusion indices");
    GraphHomomorphism h = GraphHomomorphism::identity(graphs_[from]);
    for (std::size_t n = from; n < to; ++n) h = compose(links_[n], h);
    return h;
}

std::size_t GraphSequence::max_out_degree() const {
    std::size_t d = 0;
    for (const auto& g : graphs_) d = std::max(d, g->max_out_degree());
    return d;
}

DirectLimit direct_limit(const GraphSequence& seq) {
    for (std::size_t n = 0; n < seq.links().size(); ++n) {
        if (!seq.link(n).injective()) {
            throw UnsupportedInputError("graph-core", "direct limit needs injective links; link " +
                                                          std::to_string(n + 1) + " is not");
        }
    }

    // limit_of[n][v]: limit index of vertex v of G_n.
    std::vector<std::vector<std::size_t>> limit_of(seq.size());
    std::size_t next_vertex = 0;
    std::vector<Edge> limit_edges;

    const auto& g0 = seq.graph(0);
    limit_of[0].resize(g0.vertex_count());
    for (std::size_t v = 0; v < g0.vertex_count(); ++v) limit_of[0][v] = next_vertex++;
    for (const Edge& e : g0.edges()) limit_edges.push_back({limit_of[0][e.tail], limit_of[0][e.head]});

    for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
        const auto& phi = seq.link(n);
        const auto& next = seq.graph(n + 1);
        constexpr std::size_t unset = static_cast<std::size_t>(-1);
        std::vector<std::size_t> ids(next.vertex_count(), unset);
        for (std::size_t v = 0; v < phi.vertex_map().size(); ++v) ids[phi.vertex_map()[v]] = limit_of[n][v];
        for (auto& id : ids) {
            if (id == unset) id = next_vertex++;
        }
        std::vector<bool> inherited(next.edge_count(), false);
        for (std::size_t j : phi.edge_map()) inherited[j] = true;
        for (std::size_t j = 0; j < next.edge_count(); ++j) {
            if (inherited[j]) continue;
            const Edge& e = next.edge(j);
            limit_edges.push_back({ids[e.tail], ids[e.head]});
        }
        limit_of[n + 1] = std::move(ids);
    }

    DirectLimit result;
    result.limit = std::make_shared<const DirectedGraph>(next_vertex, std::move(limit_edges));
    auto check = validate_graph(*result.limit);
    if (!check.ok()) throw ConsistencyError("graph-core", "limit graph is not simple: " + join_messages(check.violations));
    for (std::size_t n = 0; n < seq.size(); ++n) {
        result.injections.push_back(GraphHomomorphism::make(seq.graph_ptr(n), result.limit, limit_of[n]));
    }
    return result;
}

std::optional<std::vector<std::size_t>> mediating_map(const DirectLimit& limit,
                                                      std::span<const GraphHomomorphism> cocone) {
    if (cocone.size() != limit.injections.size() || cocone.empty()) return std::nullopt;
    const DirectedGraph& target = cocone.front().target();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> alpha(limit.limit->vertex_count(), unset);
    for (std::size_t n = 0; n < cocone.size(); ++n) {
        if (!(cocone[n].target() == target)) return std::nullopt;
        const auto& psi = limit.injections[n].vertex_map();
        const auto& theta = cocone[n].vertex_map();
        if (theta.size() != psi.size()) return std::nullopt;
        for (std::size_t v = 0; v < psi.size(); ++v) {
            std::size_t& slot = alpha[psi[v]];
            if (slot == unset) {
                slot = theta[v];
            } else if (slot != theta[v]) {
                return std::nullopt;
            }
        }
    }
    if (std::find(alpha.begin(), alpha.end(), unset) != alpha.end()) return std::nullopt;
    if (!check_homomorphism(*limit.limit, target, alpha).ok()) return std::nullopt;
    return alpha;
}

GraphSequence ladder_sequence(std::size_t n_max) {
    if (n_max == 0) throw ParameterError("graph-core", "ladder_sequence needs n_max >= 1");
    std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}};
    std::size_t vertices = 4;
    std::size_t top = 1;     // v2
    std::size_t bottom = 2;  // v3

    std::vector<GraphPtr> graphs;
    graphs.push_back(std::make_shared<const DirectedGraph>(vertices, edges));
    std::vector<GraphHomomorphism> links;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const std::size_t a = vertices;
        const std::size_t b = vertices + 1;
        vertices += 2;
        edges.push_back({top, a});
        edges.push_back({a, b});
        edges.push_back({b, bottom});
        edges.push_back({a, bottom});
        top = a;
        bottom = b;
        auto next = std::make_shared<const DirectedGraph>(vertices, edges);
        std::vector<std::size_t> map(graphs.back()->vertex_count());
        for (std::size_t v = 0; v < map.size(); ++v) map[v] = v;
        links.push_back(GraphHomomorphism::make(graphs.back(), next, std::move(map)));
        graphs.push_back(std::move(next));
    }
    return GraphSequence(std::move(graphs), std::move(links));
}

DirectedGraph example_g1() { return ladder_sequence(1).graph(0); }
DirectedGraph example_g2() { return ladder_sequence(2).graph(1); }
DirectedGraph two_cycle() { return DirectedGraph(2, {{0, 1}, {1, 0}}); }

} // namespace netflow
