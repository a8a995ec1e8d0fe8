#ifndef NETFLOW_GRAPH_HPP
#define NETFLOW_GRAPH_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <map>
#include <utility>
#include <vector>

namespace netflow {

/// Directed edge between 0-based vertex indices.
struct Edge {
    std::size_t tail = 0;
    std::size_t head = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Finite directed graph with stable vertex and edge indices.
 *
 * The position of an edge in `edges()` is its identity. Construction does
 * not enforce simplicity; `validate_graph` reports loops, parallel edges
 * and out-of-range endpoints as data.
 */
class DirectedGraph {
public:
    DirectedGraph() = default;
    DirectedGraph(std::size_t vertex_count, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t j) const { return edges_.at(j); }

    /// First edge with the given endpoints, if any.
    std::optional<std::size_t> find_edge(std::size_t tail, std::size_t head) const;

    std::size_t out_degree(std::size_t v) const;
    std::size_t max_out_degree() const noexcept { return max_out_degree_; }

    friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
        return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_degree_;
    std::size_t max_out_degree_ = 0;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup_;
};

using GraphPtr = std::shared_ptr<const DirectedGraph>;

enum class ViolationKind { Loop, ParallelEdge, VertexOutOfRange, MissingEdgeImage, MapOutOfRange };

struct Violation {
    ViolationKind kind;
    std::string message;
    std::vector<std::size_t> indices;  // offending vertex or edge indices, 0-based
};

struct GraphValidation {
    std::vector<Violation> violations;
    std::size_t max_out_degree = 0;

    bool ok() const noexcept { return violations.empty(); }
};

GraphValidation validate_graph(const DirectedGraph& g);

struct HomomorphismCheck {
    std::vector<Violation> violations;
    bool injective = false;
    std::vector<std::size_t> edge_map;  // filled only when ok()

    bool ok() const noexcept { return violations.empty(); }
};

/// Edge-preservation check of a vertex map. Throws MalformedInputError when
/// the map length differs from the source vertex count.
HomomorphismCheck check_homomorphism(const DirectedGraph& source, const DirectedGraph& target,
                                     std::span<const std::size_t> vertex_map);

/// A validated homomorphism. The edge map is derived from the vertex map;
/// it is unique because the target is simple.
class GraphHomomorphism {
public:
    /// Throws UnsupportedInputError listing the violations if the map is not a homomorphism.
    static GraphHomomorphism make(GraphPtr source, GraphPtr target, std::vector<std::size_t> vertex_map);
    static GraphHomomorphism identity(GraphPtr g);

    const DirectedGraph& source() const { return *source_; }
    const DirectedGraph& target() const { return *target_; }
    const GraphPtr& source_ptr() const noexcept { return source_; }
    const GraphPtr& target_ptr() const noexcept { return target_; }
    const std::vector<std::size_t>& vertex_map() const noexcept { return vertex_map_; }
    const std::vector<std::size_t>& edge_map() const noexcept { return edge_map_; }
    bool injective() const noexcept { return injective_; }

private:
    GraphHomomorphism() = default;

    GraphPtr source_;
    GraphPtr target_;
    std::vector<std::size_t> vertex_map_;
    std::vector<std::size_t> edge_map_;
    bool injective_ = false;
};

/// second ∘ first.
GraphHomomorphism compose(const GraphHomomorphism& second, const GraphHomomorphism& first);

/**
 * Growing sequence G_1 -> G_2 -> ... of simple graphs linked by injective
 * homomorphisms. Indices are 0-based here; `graph(0)` is G_1.
 */
class GraphSequence {
public:
    /// Validates every graph and link; throws on the first failure.
    GraphSequence(std::vector<GraphPtr> graphs, std::vector<GraphHomomorphism> links);

    std::size_t size() const noexcept { return graphs_.size(); }
    const DirectedGraph& graph(std::size_t n) const { return *graphs_.at(n); }
    const GraphPtr& graph_ptr(std::size_t n) const { return graphs_.at(n); }
    const GraphHomomorphism& link(std::size_t n) const { return links_.at(n); }
    const std::vector<GraphHomomorphism>& links() const noexcept { return links_; }

    /// Composite inclusion G_from -> G_to (from <= to).
    GraphHomomorphism inclusion(std::size_t from, std::size_t to) const;

    /// Largest out-degree over all members; grows without bound for
    /// sequences that are not uniformly locally finite.
    std::size_t max_out_degree() const;

private:
    std::vector<GraphPtr> graphs_;
    std::vector<GraphHomomorphism> links_;
};

struct DirectLimit {
    GraphPtr limit;
    std::vector<GraphHomomorphism> injections;  // psi_n : G_n -> limit
};

/**
 * Increasing union of the sequence. Vertices of G_{n+1} that are images of
 * G_n vertices inherit their limit index; fresh vertices and edges are
 * numbered in discovery order. Throws UnsupportedInputError on a
 * non-injective link.
 */
DirectLimit direct_limit(const GraphSequence& seq);

/**
 * Mediating vertex map alpha : limit -> B with alpha ∘ psi_n = cocone[n].
 * Returns nullopt when the cocone does not commute with the links or alpha
 * would not be a homomorphism.
 */
std::optional<std::vector<std::size_t>> mediating_map(const DirectLimit& limit,
                                                      std::span<const GraphHomomorphism> cocone);

/// Ladder family: G_1 and G_2 are the example graphs below; every further
/// member appends one cell of two vertices and four edges.
GraphSequence ladder_sequence(std::size_t n_max);

/// The example graph G_1: edges (v1,v2),(v2,v3),(v3,v4),(v4,v1),(v2,v4).
DirectedGraph example_g1();
/// The example graph G_2 (G_1 plus one ladder cell).
DirectedGraph example_g2();
/// Two vertices joined in both directions.
DirectedGraph two_cycle();

} // namespace netflow

#endif
