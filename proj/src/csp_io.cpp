#include <rbcsp/csp_io.hpp>

#include <istream>
#include <ostream>
#include <sstream>

namespace rbcsp
{
    namespace
    {
        class LineReader
        {
            public:
                explicit LineReader(std::istream & in) : _in(in) {}

                // Next non-comment, non-blank line; false at end of input.
                auto next(std::istringstream & fields) -> bool
                {
                    std::string line;
                    while (std::getline(_in, line)) {
                        ++_line_no;
                        auto first = line.find_first_not_of(" \t\r");
                        if (first == std::string::npos || line[first] == 'c')
                            continue;
                        fields.clear();
                        fields.str(line.substr(first));
                        return true;
                    }
                    return false;
                }

                [[noreturn]] auto error(const std::string & what) const -> void
                {
                    throw InputError("line " + std::to_string(_line_no) + ": " + what);
                }

            private:
                std::istream & _in;
                std::size_t _line_no = 0;
        };

        auto expect_end(std::istringstream & fields, const LineReader & reader) -> void
        {
            std::string extra;
            if (fields >> extra)
                reader.error("unexpected trailing token '" + extra + "'");
        }

        template <typename T>
        auto read_number(std::istringstream & fields, const LineReader & reader, const char * what) -> T
        {
            long long raw;
            if (! (fields >> raw) || raw < 0)
                reader.error(std::string("expected nonnegative ") + what);
            return static_cast<T>(raw);
        }
    }

    auto read_csp(std::istream & in) -> CspFile
    {
        LineReader reader(in);
        std::istringstream fields;
        std::string tag;

        if (! reader.next(fields))
            reader.error("missing 'p bcsp' header");
        std::string format;
        if (! (fields >> tag >> format) || tag != "p" || format != "bcsp")
            reader.error("expected 'p bcsp <n> <d> <m>' header");
        auto n = read_number<std::size_t>(fields, reader, "variable count");
        auto d = read_number<std::size_t>(fields, reader, "domain size");
        auto m = read_number<std::size_t>(fields, reader, "constraint count");
        expect_end(fields, reader);

        std::vector<Constraint> constraints;
        constraints.reserve(m);
        std::optional<Assignment> hidden;

        while (reader.next(fields)) {
            fields >> tag;
            if (tag == "k") {
                if (constraints.size() == m)
                    reader.error("more constraints than declared in header");
                Constraint k;
                k.var_a = read_number<Var>(fields, reader, "variable index");
                k.var_b = read_number<Var>(fields, reader, "variable index");
                auto npairs = read_number<std::size_t>(fields, reader, "pair count");
                expect_end(fields, reader);
                if (k.var_a >= n || k.var_b >= n)
                    reader.error("variable index out of range");
                k.disallowed.reserve(npairs);
                for (std::size_t i = 0; i < npairs; ++i) {
                    if (! reader.next(fields) || ! (fields >> tag) || tag != "f")
                        reader.error("expected 'f <value_a> <value_b>'");
                    auto a = read_number<Value>(fields, reader, "value");
                    auto b = read_number<Value>(fields, reader, "value");
                    expect_end(fields, reader);
                    if (a >= d || b >= d)
                        reader.error("value out of domain range");
                    k.disallowed.emplace_back(a, b);
                }
                constraints.push_back(std::move(k));
            }
            else if (tag == "s") {
                if (hidden)
                    reader.error("duplicate 's' line");
                std::vector<Value> values;
                values.reserve(n);
                for (std::size_t v = 0; v < n; ++v) {
                    auto u = read_number<Value>(fields, reader, "solution value");
                    if (u >= d)
                        reader.error("solution value out of domain range");
                    values.push_back(u);
                }
                expect_end(fields, reader);
                hidden.emplace(std::move(values));
            }
            else
                reader.error("unknown line type '" + tag + "'");
        }

        if (constraints.size() != m)
            throw InputError("header declares " + std::to_string(m) + " constraints, found "
                + std::to_string(constraints.size()));

        return CspFile{Instance(n, d, std::move(constraints)), std::move(hidden)};
    }

    auto write_csp(std::ostream & out, const Instance & instance, const Assignment * hidden_solution,
        const std::vector<std::string> & comments) -> void
    {
        for (const auto & line : comments)
            out << "c " << line << '\n';
        out << "p bcsp " << instance.num_vars() << ' ' << instance.domain_size() << ' ' << instance.num_constraints()
            << '\n';
        for (const auto & k : instance.constraints()) {
            out << "k " << k.var_a << ' ' << k.var_b << ' ' << k.disallowed.size() << '\n';
            for (auto [a, b] : k.disallowed)
                out << "f " << a << ' ' << b << '\n';
        }
        if (hidden_solution) {
            out << 's';
            for (auto u : hidden_solution->values())
                out << ' ' << u;
            out << '\n';
        }
    }
}
