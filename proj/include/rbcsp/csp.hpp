#ifndef RBCSP_CSP_HPP
#define RBCSP_CSP_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rbcsp
{
    using Var = std::uint32_t;
    using Value = std::uint32_t;
    using ConstraintId = std::uint32_t;
    using ValuePair = std::pair<Value, Value>;

    /// Malformed instance data, out-of-range values, unreadable files.
    class InputError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /// A caller broke a documented precondition.
    class ContractViolation : public std::logic_error
    {
        public:
            using std::logic_error::logic_error;
    };

    /// Binary constraint over (var_a, var_b). Disallowed pairs are oriented
    /// as (value of var_a, value of var_b).
    struct Constraint
    {
        Var var_a = 0;
        Var var_b = 0;
        std::vector<ValuePair> disallowed;
    };

    /// One endpoint's view of an incident constraint.
    struct Incidence
    {
        ConstraintId constraint;
        Var other;
        /// 0 if this variable is var_a, 1 if var_b.
        std::uint32_t side;
    };

    /// Immutable binary CSP with a uniform domain {0, ..., d-1}.
    ///
    /// Duplicate constraints over the same variable pair are kept and count
    /// separately. Construction validates every invariant and throws
    /// InputError on violation.
    class Instance
    {
        public:
            Instance(std::size_t num_vars, std::size_t domain_size, std::vector<Constraint> constraints);

            [[nodiscard]] auto num_vars() const noexcept -> std::size_t { return _num_vars; }
            [[nodiscard]] auto domain_size() const noexcept -> std::size_t { return _domain; }
            [[nodiscard]] auto num_constraints() const noexcept -> std::size_t { return _constraints.size(); }
            [[nodiscard]] auto constraints() const noexcept -> std::span<const Constraint> { return _constraints; }
            [[nodiscard]] auto constraint(ConstraintId c) const -> const Constraint & { return _constraints[c]; }

            /// Constraints incident to v, in constraint order.
            [[nodiscard]] auto incident(Var v) const noexcept -> std::span<const Incidence>
            {
                return {_incident.data() + _incident_begin[v], _incident.data() + _incident_begin[v + 1]};
            }

            /// forbids() with the pair oriented from `side`'s point of view.
            [[nodiscard]] auto forbids_from(const Incidence & at, Value mine, Value other) const noexcept -> bool
            {
                return at.side == 0 ? forbids(at.constraint, mine, other) : forbids(at.constraint, other, mine);
            }

            [[nodiscard]] auto forbids(ConstraintId c, Value value_a, Value value_b) const noexcept -> bool
            {
                auto bit = static_cast<std::size_t>(c) * _pair_bits + value_a * _domain + value_b;
                return (_bits[bit >> 6] >> (bit & 63)) & 1;
            }

            /// Values of `side` forbidden by constraint c when the other endpoint holds `other`.
            /// side 0 is var_a, side 1 is var_b.
            [[nodiscard]] auto forbidden_given_other(ConstraintId c, int side, Value other) const noexcept
                -> std::span<const Value>
            {
                const auto & rows = _rows[side];
                auto base = static_cast<std::size_t>(c) * (_domain + 1) + other;
                auto first = rows.offsets[base];
                auto last = rows.offsets[base + 1];
                return {rows.values.data() + first, rows.values.data() + last};
            }

            /// The other endpoint of c seen from v; v must be an endpoint.
            [[nodiscard]] auto other_endpoint(ConstraintId c, Var v) const noexcept -> Var
            {
                const auto & k = _constraints[c];
                return k.var_a == v ? k.var_b : k.var_a;
            }

        private:
            // Per side: for every constraint, a CSR table keyed by the other endpoint's value.
            struct Rows
            {
                std::vector<std::uint32_t> offsets;
                std::vector<Value> values;
            };

            std::size_t _num_vars;
            std::size_t _domain;
            std::size_t _pair_bits;
            std::vector<Constraint> _constraints;
            std::vector<std::uint64_t> _bits;
            Rows _rows[2];
            std::vector<std::uint32_t> _incident_begin;
            std::vector<Incidence> _incident;
    };

    /// Values of all variables; entries may be unset only while a search state is being built.
    class Assignment
    {
        public:
            static constexpr Value unset = std::numeric_limits<Value>::max();

            Assignment() = default;
            explicit Assignment(std::size_t num_vars) : _values(num_vars, unset) {}
            explicit Assignment(std::vector<Value> values) : _values(std::move(values)) {}

            [[nodiscard]] auto size() const noexcept -> std::size_t { return _values.size(); }
            [[nodiscard]] auto is_set(Var v) const noexcept -> bool { return _values[v] != unset; }
            [[nodiscard]] auto complete() const noexcept -> bool;
            [[nodiscard]] auto operator[](Var v) const noexcept -> Value { return _values[v]; }
            [[nodiscard]] auto values() const noexcept -> std::span<const Value> { return _values; }

            auto set(Var v, Value u) noexcept -> void { _values[v] = u; }

            auto operator==(const Assignment &) const -> bool = default;

        private:
            std::vector<Value> _values;
    };

    /// Full recount over every constraint. Constraints with an unset endpoint never conflict.
    /// Throws InputError on a size mismatch or a set value outside the domain.
    [[nodiscard]] auto conflict_count(const Instance & instance, const Assignment & assignment) -> std::size_t;

    /// Ids of all conflicting constraints, in constraint order.
    [[nodiscard]] auto conflicting_constraints(const Instance & instance, const Assignment & assignment)
        -> std::vector<ConstraintId>;

    /// Set of constraint ids with O(1) insert, erase, membership and indexed access.
    class ViolatedSet
    {
        public:
            ViolatedSet() = default;
            explicit ViolatedSet(std::size_t num_constraints) : _position(num_constraints, absent) {}

            [[nodiscard]] auto size() const noexcept -> std::size_t { return _items.size(); }
            [[nodiscard]] auto empty() const noexcept -> bool { return _items.empty(); }
            [[nodiscard]] auto contains(ConstraintId c) const noexcept -> bool { return _position[c] != absent; }
            [[nodiscard]] auto operator[](std::size_t i) const noexcept -> ConstraintId { return _items[i]; }
            [[nodiscard]] auto items() const noexcept -> std::span<const ConstraintId> { return _items; }

            auto insert(ConstraintId c) -> void
            {
                _position[c] = static_cast<std::uint32_t>(_items.size());
                _items.push_back(c);
            }

            auto erase(ConstraintId c) -> void
            {
                auto at = _position[c];
                auto last = _items.back();
                _items[at] = last;
                _position[last] = at;
                _items.pop_back();
                _position[c] = absent;
            }

        private:
            static constexpr std::uint32_t absent = std::numeric_limits<std::uint32_t>::max();
            std::vector<ConstraintId> _items;
            std::vector<std::uint32_t> _position;
    };

    /// Local search state: assignment, per-variable timestamps, the iteration
    /// counter and the incrementally maintained set of violated constraints.
    ///
    /// The instance must outlive the state.
    class SearchState
    {
        public:
            /// Every variable unset, all timestamps and the iteration counter zero.
            explicit SearchState(const Instance & instance);

            /// Fully initialized from `assignment`; throws InputError if it is not complete and in range.
            SearchState(const Instance & instance, Assignment assignment);

            [[nodiscard]] auto instance() const noexcept -> const Instance & { return *_instance; }
            [[nodiscard]] auto assignment() const noexcept -> const Assignment & { return _assignment; }
            [[nodiscard]] auto value(Var v) const noexcept -> Value { return _assignment[v]; }
            [[nodiscard]] auto timestamp(Var v) const noexcept -> std::uint64_t { return _timestamps[v]; }
            [[nodiscard]] auto iteration() const noexcept -> std::uint64_t { return _iteration; }
            [[nodiscard]] auto violated() const noexcept -> const ViolatedSet & { return _violated; }
            [[nodiscard]] auto conflicts() const noexcept -> std::size_t { return _violated.size(); }

            /// Most recently changed variable, or -1 before the first change.
            [[nodiscard]] auto last_changed() const noexcept -> std::int64_t { return _last_changed; }

            /// Sets a currently unset variable without advancing the clock.
            auto initialize(Var v, Value u) -> void;

            /// Conflict count after setting v to u minus the current count.
            [[nodiscard]] auto delta_conflicts(Var v, Value u) const -> int;

            /// out[u] = delta_conflicts(v, u) for every u, in one sweep over the
            /// disallowed rows matching each neighbour's current value. If v is
            /// unset, out[u] is the number of conflicts v = u would create
            /// against set variables.
            auto evaluate_all_values(Var v, std::span<int> out) const -> void;

            /// Sets v to u != current value, advances the iteration counter and stamps v.
            auto apply_change(Var v, Value u) -> void;

        private:
            auto check_var(Var v) const -> void;
            auto check_value(Value u) const -> void;

            const Instance * _instance;
            Assignment _assignment;
            std::vector<std::uint64_t> _timestamps;
            std::uint64_t _iteration = 0;
            std::int64_t _last_changed = -1;
            ViolatedSet _violated;
    };
}

#endif
