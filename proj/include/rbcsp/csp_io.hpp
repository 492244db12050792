#ifndef RBCSP_CSP_IO_HPP
#define RBCSP_CSP_IO_HPP

#include <rbcsp/csp.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rbcsp
{
    struct CspFile
    {
        Instance instance;
        std::optional<Assignment> hidden_solution;
    };

    // Native text format, all indices 0-based:
    //
    //   c <comment>                   anywhere
    //   p bcsp <n> <d> <m>
    //   k <var_a> <var_b> <npairs>    once per constraint, followed by
    //   f <value_a> <value_b>         npairs times
    //   s <v_1> ... <v_n>             optional hidden solution

    /// Throws InputError with the offending line number on malformed input.
    [[nodiscard]] auto read_csp(std::istream & in) -> CspFile;

    auto write_csp(std::ostream & out, const Instance & instance, const Assignment * hidden_solution = nullptr,
        const std::vector<std::string> & comments = {}) -> void;
}

#endif
