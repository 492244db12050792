#ifndef RBCSP_MIS_HPP
#define RBCSP_MIS_HPP

#include <rbcsp/csp.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rbcsp
{
    using Vertex = std::uint32_t;
    using Edge = std::pair<Vertex, Vertex>;

    /// Simple undirected graph. Edges are normalized (u < v), sorted and unique.
    struct MisGraph
    {
        std::size_t num_vertices = 0;
        std::vector<Edge> edges;
        /// Vertices per CSP variable when the graph came from a CSP.
        std::optional<std::size_t> block_size;

        /// Sorts, normalizes and deduplicates; returns the number of duplicates dropped.
        /// Throws InputError on self-loops or out-of-range vertices.
        auto normalize() -> std::size_t;
    };

    /// Vertex v * d + a stands for (variable v, value a). Edges: a clique per
    /// variable plus one edge per disallowed pair, merged across duplicate constraints.
    [[nodiscard]] auto csp_to_mis(const Instance & instance) -> MisGraph;

    /// Inverse of csp_to_mis for sequentially numbered blocks of size d.
    /// Cross-block edges are grouped per block pair into one constraint each,
    /// in order of (lower block, higher block); duplicate constraints of the
    /// original cannot be recovered. Throws InputError naming the first block
    /// that is not a complete clique.
    [[nodiscard]] auto mis_to_csp(const MisGraph & graph, std::size_t block_size) -> Instance;

    /// The n-vertex selection {v * d + x[v]} for a complete assignment.
    [[nodiscard]] auto selection_vertices(const Assignment & assignment, std::size_t domain_size)
        -> std::vector<Vertex>;

    /// Number of graph edges with both endpoints in `vertices`.
    [[nodiscard]] auto internal_edge_count(const MisGraph & graph, std::vector<Vertex> vertices) -> std::size_t;

    struct DimacsReport
    {
        std::size_t duplicate_edges = 0;
    };

    /// DIMACS ascii graph: `c` comments, `p edge <V> <E>`, `e <u> <v>` 1-indexed.
    /// Duplicate edges are dropped and counted; self-loops, bad headers and
    /// out-of-range vertices throw InputError.
    [[nodiscard]] auto parse_dimacs(std::istream & in, DimacsReport * report = nullptr) -> MisGraph;

    /// 1-indexed, sorted edges.
    [[nodiscard]] auto emit_dimacs(const MisGraph & graph, const std::vector<std::string> & comments = {})
        -> std::string;
}

#endif
