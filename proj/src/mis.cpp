#include <rbcsp/mis.hpp>

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

namespace rbcsp
{
    auto MisGraph::normalize() -> std::size_t
    {
        for (auto & [u, v] : edges) {
            if (u == v)
                throw InputError("self-loop on vertex " + std::to_string(u + 1));
            if (u >= num_vertices || v >= num_vertices)
                throw InputError("edge endpoint out of range");
            if (u > v)
                std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        auto before = edges.size();
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return before - edges.size();
    }

    auto csp_to_mis(const Instance & instance) -> MisGraph
    {
        auto d = instance.domain_size();
        MisGraph graph;
        graph.num_vertices = instance.num_vars() * d;
        graph.block_size = d;
        for (std::size_t v = 0; v < instance.num_vars(); ++v)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = a + 1; b < d; ++b)
                    graph.edges.emplace_back(static_cast<Vertex>(v * d + a), static_cast<Vertex>(v * d + b));
        for (const auto & k : instance.constraints())
            for (auto [a, b] : k.disallowed)
                graph.edges.emplace_back(static_cast<Vertex>(k.var_a * d + a), static_cast<Vertex>(k.var_b * d + b));
        graph.normalize();
        return graph;
    }

    auto mis_to_csp(const MisGraph & graph, std::size_t block_size) -> Instance
    {
        auto d = block_size;
        if (d == 0 || graph.num_vertices % d != 0)
            throw InputError("vertex count " + std::to_string(graph.num_vertices) + " is not a multiple of block size "
                + std::to_string(d));
        auto n = graph.num_vertices / d;

        std::vector<std::size_t> clique_edges(n, 0);
        std::map<std::pair<Var, Var>, std::vector<ValuePair>> groups;
        for (auto [u, v] : graph.edges) {
            if (u == v || u >= graph.num_vertices || v >= graph.num_vertices)
                throw InputError("graph has an invalid edge");
            auto [lo, hi] = std::minmax(u, v);
            auto block_lo = static_cast<Var>(lo / d);
            auto block_hi = static_cast<Var>(hi / d);
            if (block_lo == block_hi)
                ++clique_edges[block_lo];
            else
                groups[{block_lo, block_hi}].emplace_back(static_cast<Value>(lo % d), static_cast<Value>(hi % d));
        }

        // Edges are unique, so a full count means a complete clique.
        auto needed = d * (d - 1) / 2;
        for (std::size_t b = 0; b < n; ++b)
            if (clique_edges[b] != needed)
                throw InputError("not a BHOSLIB-shaped graph: block " + std::to_string(b) + " (vertices "
                    + std::to_string(b * d + 1) + ".." + std::to_string(b * d + d) + ") has "
                    + std::to_string(clique_edges[b]) + " of " + std::to_string(needed) + " clique edges");

        std::vector<Constraint> constraints;
        constraints.reserve(groups.size());
        for (auto & [pair, disallowed] : groups) {
            std::sort(disallowed.begin(), disallowed.end());
            disallowed.erase(std::unique(disallowed.begin(), disallowed.end()), disallowed.end());
            constraints.push_back(Constraint{pair.first, pair.second, std::move(disallowed)});
        }
        return Instance(n, d, std::move(constraints));
    }

    auto selection_vertices(const Assignment & assignment, std::size_t domain_size) -> std::vector<Vertex>
    {
        std::vector<Vertex> result;
        result.reserve(assignment.size());
        for (Var v = 0; v < assignment.size(); ++v) {
            if (! assignment.is_set(v) || assignment[v] >= domain_size)
                throw InputError("assignment is not complete and in range");
            result.push_back(static_cast<Vertex>(v * domain_size + assignment[v]));
        }
        return result;
    }

    auto internal_edge_count(const MisGraph & graph, std::vector<Vertex> vertices) -> std::size_t
    {
        std::sort(vertices.begin(), vertices.end());
        std::size_t count = 0;
        for (auto [u, v] : graph.edges)
            if (std::binary_search(vertices.begin(), vertices.end(), u)
                    && std::binary_search(vertices.begin(), vertices.end(), v))
                ++count;
        return count;
    }

    auto parse_dimacs(std::istream & in, DimacsReport * report) -> MisGraph
    {
        MisGraph graph;
        bool have_header = false;
        std::size_t declared_edges = 0;
        std::size_t line_no = 0;
        std::string line;
        auto error = [&](const std::string & what) {
            throw InputError("line " + std::to_string(line_no) + ": " + what);
        };

        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream fields(line);
            std::string tag;
            if (! (fields >> tag) || tag == "c")
                continue;
            if (tag == "p") {
                std::string format;
                long long vertices, edges;
                if (have_header)
                    error("duplicate 'p' line");
                if (! (fields >> format >> vertices >> edges) || (format != "edge" && format != "col") || vertices < 0
                        || edges < 0)
                    error("malformed header, expected 'p edge <vertices> <edges>'");
                graph.num_vertices = static_cast<std::size_t>(vertices);
                declared_edges = static_cast<std::size_t>(edges);
                graph.edges.reserve(declared_edges);
                have_header = true;
            }
            else if (tag == "e") {
                if (! have_header)
                    error("edge before 'p' header");
                long long u, v;
                if (! (fields >> u >> v))
                    error("malformed edge line");
                if (u < 1 || v < 1 || static_cast<std::size_t>(u) > graph.num_vertices
                        || static_cast<std::size_t>(v) > graph.num_vertices)
                    error("vertex index out of range");
                if (u == v)
                    error("self-loop on vertex " + std::to_string(u));
                graph.edges.emplace_back(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
            }
            else
                error("unknown line type '" + tag + "'");
        }
        if (! have_header)
            throw InputError("missing 'p edge' header");

        auto duplicates = graph.normalize();
        if (report)
            report->duplicate_edges = duplicates;
        return graph;
    }

    auto emit_dimacs(const MisGraph & graph, const std::vector<std::string> & comments) -> std::string
    {
        auto edges = graph.edges;
        for (auto & [u, v] : edges)
            if (u > v)
                std::swap(u, v);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        std::ostringstream out;
        for (const auto & c : comments)
            out << "c " << c << '\n';
        out << "p edge " << graph.num_vertices << ' ' << edges.size() << '\n';
        for (auto [u, v] : edges)
            out << "e " << u + 1 << ' ' << v + 1 << '\n';
        return out.str();
    }
}
