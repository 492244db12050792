#include <rbcsp/csp.hpp>

#include <algorithm>
#include <string>

namespace rbcsp
{
    namespace
    {
        auto fail(const std::string & what) -> void
        {
            throw InputError(what);
        }
    }

    Instance::Instance(std::size_t num_vars, std::size_t domain_size, std::vector<Constraint> constraints) :
        _num_vars(num_vars),
        _domain(domain_size),
        _pair_bits(domain_size * domain_size),
        _constraints(std::move(constraints))
    {
        if (_domain == 0 && _num_vars > 0)
            fail("domain size must be positive");
        if (_num_vars >= std::numeric_limits<Var>::max() || _domain >= (1u << 16))
            fail("instance dimensions out of supported range");

        _bits.assign((_constraints.size() * _pair_bits + 63) / 64, 0);
        std::vector<std::uint32_t> degree(_num_vars + 1, 0);

        for (std::size_t c = 0; c < _constraints.size(); ++c) {
            const auto & k = _constraints[c];
            auto where = " in constraint " + std::to_string(c);
            if (k.var_a >= _num_vars || k.var_b >= _num_vars)
                fail("variable index out of range" + where);
            if (k.var_a == k.var_b)
                fail("constraint endpoints must differ" + where);
            if (k.disallowed.empty())
                fail("empty disallowed set" + where);
            for (auto [a, b] : k.disallowed) {
                if (a >= _domain || b >= _domain)
                    fail("disallowed value out of domain" + where);
                auto bit = c * _pair_bits + a * _domain + b;
                if ((_bits[bit >> 6] >> (bit & 63)) & 1)
                    fail("duplicate disallowed pair" + where);
                _bits[bit >> 6] |= std::uint64_t{1} << (bit & 63);
            }
            ++degree[k.var_a];
            ++degree[k.var_b];
        }

        _incident_begin.assign(_num_vars + 1, 0);
        for (std::size_t v = 0; v < _num_vars; ++v)
            _incident_begin[v + 1] = _incident_begin[v] + degree[v];
        _incident.resize(_incident_begin[_num_vars]);
        std::vector<std::uint32_t> fill(_incident_begin.begin(), _incident_begin.end() - 1);
        for (std::size_t c = 0; c < _constraints.size(); ++c) {
            auto id = static_cast<ConstraintId>(c);
            _incident[fill[_constraints[c].var_a]++] = Incidence{id, _constraints[c].var_b, 0};
            _incident[fill[_constraints[c].var_b]++] = Incidence{id, _constraints[c].var_a, 1};
        }

        // Row tables: for side s and other-endpoint value w, the values of side s forbidden with w.
        for (int side = 0; side < 2; ++side) {
            auto & rows = _rows[side];
            rows.offsets.assign(_constraints.size() * (_domain + 1) + 1, 0);
            rows.values.clear();
            for (std::size_t c = 0; c < _constraints.size(); ++c) {
                auto base = c * (_domain + 1);
                for (Value other = 0; other < _domain; ++other) {
                    rows.offsets[base + other] = static_cast<std::uint32_t>(rows.values.size());
                    for (Value mine = 0; mine < _domain; ++mine) {
                        bool hit = side == 0 ? forbids(static_cast<ConstraintId>(c), mine, other)
                                             : forbids(static_cast<ConstraintId>(c), other, mine);
                        if (hit)
                            rows.values.push_back(mine);
                    }
                }
                rows.offsets[base + _domain] = static_cast<std::uint32_t>(rows.values.size());
            }
        }
    }

    auto Assignment::complete() const noexcept -> bool
    {
        return std::none_of(_values.begin(), _values.end(), [](Value u) { return u == unset; });
    }

    namespace
    {
        auto check_assignment(const Instance & instance, const Assignment & assignment) -> void
        {
            if (assignment.size() != instance.num_vars())
                throw InputError("assignment has " + std::to_string(assignment.size()) + " entries, instance has "
                    + std::to_string(instance.num_vars()) + " variables");
            for (Var v = 0; v < assignment.size(); ++v)
                if (assignment.is_set(v) && assignment[v] >= instance.domain_size())
                    throw InputError("value " + std::to_string(assignment[v]) + " of variable " + std::to_string(v)
                        + " outside domain");
        }

        auto in_conflict(const Constraint & k, const Assignment & x) -> bool
        {
            if (! x.is_set(k.var_a) || ! x.is_set(k.var_b))
                return false;
            return std::find(k.disallowed.begin(), k.disallowed.end(), ValuePair{x[k.var_a], x[k.var_b]})
                != k.disallowed.end();
        }
    }

    auto conflict_count(const Instance & instance, const Assignment & assignment) -> std::size_t
    {
        check_assignment(instance, assignment);
        std::size_t count = 0;
        for (const auto & k : instance.constraints())
            count += in_conflict(k, assignment);
        return count;
    }

    auto conflicting_constraints(const Instance & instance, const Assignment & assignment) -> std::vector<ConstraintId>
    {
        check_assignment(instance, assignment);
        std::vector<ConstraintId> result;
        auto ks = instance.constraints();
        for (std::size_t c = 0; c < ks.size(); ++c)
            if (in_conflict(ks[c], assignment))
                result.push_back(static_cast<ConstraintId>(c));
        return result;
    }

    SearchState::SearchState(const Instance & instance) :
        _instance(&instance),
        _assignment(instance.num_vars()),
        _timestamps(instance.num_vars(), 0),
        _violated(instance.num_constraints())
    {
    }

    SearchState::SearchState(const Instance & instance, Assignment assignment) :
        SearchState(instance)
    {
        check_assignment(instance, assignment);
        if (! assignment.complete())
            throw InputError("assignment is not complete");
        _assignment = std::move(assignment);
        for (auto c : conflicting_constraints(instance, _assignment))
            _violated.insert(c);
    }

    auto SearchState::check_var(Var v) const -> void
    {
        if (v >= _instance->num_vars())
            throw ContractViolation("variable " + std::to_string(v) + " out of range");
    }

    auto SearchState::check_value(Value u) const -> void
    {
        if (u >= _instance->domain_size())
            throw ContractViolation("value " + std::to_string(u) + " outside domain");
    }

    auto SearchState::initialize(Var v, Value u) -> void
    {
        check_var(v);
        check_value(u);
        if (_assignment.is_set(v))
            throw ContractViolation("variable " + std::to_string(v) + " already initialized");
        _assignment.set(v, u);
        for (const auto & at : _instance->incident(v))
            if (_assignment.is_set(at.other) && _instance->forbids_from(at, u, _assignment[at.other]))
                _violated.insert(at.constraint);
    }

    auto SearchState::delta_conflicts(Var v, Value u) const -> int
    {
        check_var(v);
        check_value(u);
        if (! _assignment.is_set(v))
            throw ContractViolation("variable " + std::to_string(v) + " not initialized");
        auto current = _assignment[v];
        int delta = 0;
        for (const auto & at : _instance->incident(v)) {
            if (! _assignment.is_set(at.other))
                continue;
            auto w = _assignment[at.other];
            delta += int{_instance->forbids_from(at, u, w)} - int{_instance->forbids_from(at, current, w)};
        }
        return delta;
    }

    auto SearchState::evaluate_all_values(Var v, std::span<int> out) const -> void
    {
        check_var(v);
        if (out.size() < _instance->domain_size())
            throw ContractViolation("output buffer shorter than the domain");
        std::fill_n(out.begin(), _instance->domain_size(), 0);
        for (const auto & at : _instance->incident(v)) {
            auto w = _assignment[at.other];
            if (w == Assignment::unset)
                continue;
            for (auto u : _instance->forbidden_given_other(at.constraint, static_cast<int>(at.side), w))
                ++out[u];
        }
        if (_assignment.is_set(v)) {
            int here = out[_assignment[v]];
            for (std::size_t u = 0; u < _instance->domain_size(); ++u)
                out[u] -= here;
        }
    }

    auto SearchState::apply_change(Var v, Value u) -> void
    {
        check_var(v);
        check_value(u);
        if (! _assignment.is_set(v))
            throw ContractViolation("variable " + std::to_string(v) + " not initialized");
        auto previous = _assignment[v];
        if (previous == u)
            throw ContractViolation("a change must set variable " + std::to_string(v) + " to a different value");

        _assignment.set(v, u);
        for (const auto & at : _instance->incident(v)) {
            auto w = _assignment[at.other];
            if (w == Assignment::unset)
                continue;
            bool before = _instance->forbids_from(at, previous, w);
            bool after = _instance->forbids_from(at, u, w);
            if (before && ! after)
                _violated.erase(at.constraint);
            else if (after && ! before)
                _violated.insert(at.constraint);
        }

        ++_iteration;
        _timestamps[v] = _iteration;
        _last_changed = v;
    }
}
