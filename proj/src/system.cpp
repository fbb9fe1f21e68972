#include "consys/system.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace consys
{

ConsumptionSystem::ConsumptionSystem(std::vector<std::string> state_names, std::vector<Transition> transitions,
                                     std::vector<StateId> reload, std::vector<StateId> accepting)
    : names_{std::move(state_names)}, transitions_{std::move(transitions)}
{
    const auto n = names_.size();
    if (n == 0)
        throw std::invalid_argument("a consumption system needs at least one state");
    for (const auto& t : transitions_)
        if (t.src >= n || t.dst >= n)
            throw std::out_of_range("transition endpoint out of range");
    for (StateId s : reload)
        if (s >= n)
            throw std::out_of_range("reload state out of range");
    for (StateId s : accepting)
        if (s >= n)
            throw std::out_of_range("accepting state out of range");

    std::stable_sort(transitions_.begin(), transitions_.end(),
                     [](const Transition& a, const Transition& b) {
                         return a.src != b.src ? a.src < b.src : a.dst < b.dst;
                     });

    out_begin_.assign(n + 1, 0);
    in_begin_.assign(n + 1, 0);
    out_index_.resize(transitions_.size());
    in_index_.resize(transitions_.size());
    for (const auto& t : transitions_) {
        ++out_begin_[t.src + 1];
        ++in_begin_[t.dst + 1];
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out_begin_[i] += out_begin_[i - 1];
        in_begin_[i] += in_begin_[i - 1];
    }
    {
        std::vector<std::uint32_t> pos(out_begin_.begin(), out_begin_.end() - 1);
        for (std::uint32_t e = 0; e < transitions_.size(); ++e)
            out_index_[pos[transitions_[e].src]++] = e;
    }
    {
        // in() sorted by src for deterministic predecessor scans
        std::vector<std::uint32_t> pos(in_begin_.begin(), in_begin_.end() - 1);
        for (std::uint32_t e = 0; e < transitions_.size(); ++e)
            in_index_[pos[transitions_[e].dst]++] = e;
        for (std::size_t s = 0; s < n; ++s)
            std::sort(in_index_.begin() + in_begin_[s], in_index_.begin() + in_begin_[s + 1],
                      [&](std::uint32_t a, std::uint32_t b) { return transitions_[a].src < transitions_[b].src; });
    }

    reload_.assign(n, false);
    accepting_.assign(n, false);
    for (StateId s : reload)
        reload_[s] = true;
    for (StateId s : accepting)
        accepting_[s] = true;
    for (StateId s = 0; s < n; ++s) {
        if (reload_[s])
            reload_list_.push_back(s);
        if (accepting_[s])
            accepting_list_.push_back(s);
    }

    max_cost_ = 0;
    for (const auto& t : transitions_)
        if (t.cost > max_cost_)
            max_cost_ = t.cost;
}

std::optional<StateId> ConsumptionSystem::find_state(const std::string& name) const
{
    for (StateId s = 0; s < names_.size(); ++s)
        if (names_[s] == name)
            return s;
    return std::nullopt;
}

std::span<const std::uint32_t> ConsumptionSystem::out(StateId s) const
{
    return {out_index_.data() + out_begin_.at(s), out_index_.data() + out_begin_.at(s + 1)};
}

std::span<const std::uint32_t> ConsumptionSystem::in(StateId s) const
{
    return {in_index_.data() + in_begin_.at(s), in_index_.data() + in_begin_.at(s + 1)};
}

std::optional<std::uint32_t> ConsumptionSystem::find_transition(StateId src, StateId dst) const
{
    for (std::uint32_t e : out(src))
        if (transitions_[e].dst == dst)
            return e;
    return std::nullopt;
}

std::string ValidationError::describe(const ConsumptionSystem& sys) const
{
    std::ostringstream os;
    switch (kind) {
    case ValidationErrorKind::non_total_state:
        os << "state '" << sys.name(state) << "' has no outgoing transition";
        break;
    case ValidationErrorKind::empty_accepting:
        os << "the set of accepting states is empty";
        break;
    case ValidationErrorKind::negative_cost:
        os << "transition " << sys.name(state) << " -> " << sys.name(other) << " has negative cost";
        break;
    case ValidationErrorKind::duplicate_transition:
        os << "duplicate transition " << sys.name(state) << " -> " << sys.name(other);
        break;
    }
    return os.str();
}

std::vector<ValidationError> validate(const ConsumptionSystem& sys)
{
    std::vector<ValidationError> errs;
    for (StateId s = 0; s < sys.size(); ++s)
        if (sys.out(s).empty())
            errs.push_back({ValidationErrorKind::non_total_state, s, 0});
    if (sys.accepting_states().empty())
        errs.push_back({ValidationErrorKind::empty_accepting, 0, 0});
    const auto& trans = sys.transitions();
    for (std::size_t i = 0; i < trans.size(); ++i) {
        if (trans[i].cost < 0)
            errs.push_back({ValidationErrorKind::negative_cost, trans[i].src, trans[i].dst});
        if (i > 0 && trans[i].src == trans[i - 1].src && trans[i].dst == trans[i - 1].dst)
            errs.push_back({ValidationErrorKind::duplicate_transition, trans[i].src, trans[i].dst});
    }
    return errs;
}

validation_failed::validation_failed(std::vector<ValidationError> errs, const ConsumptionSystem& sys)
    : std::runtime_error([&] {
          std::string msg = "invalid consumption system:";
          for (const auto& e : errs)
              msg += " " + e.describe(sys) + ";";
          return msg;
      }()),
      errors{std::move(errs)}
{
}

void require_valid(const ConsumptionSystem& sys)
{
    auto errs = validate(sys);
    if (!errs.empty())
        throw validation_failed(std::move(errs), sys);
}

bool is_path(const ConsumptionSystem& sys, const FinitePath& path)
{
    if (path.empty())
        return false;
    for (StateId v : path)
        if (v >= sys.size())
            return false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (!sys.has_transition(path[i], path[i + 1]))
            return false;
    return true;
}

bool is_cycle(const ConsumptionSystem& sys, const FinitePath& path)
{
    return is_path(sys, path) && path.size() >= 2 && path.front() == path.back();
}

Int total_cost(const ConsumptionSystem& sys, const FinitePath& path)
{
    Int sum = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto e = sys.find_transition(path[i], path[i + 1]);
        if (!e)
            throw std::invalid_argument("not a path of the system");
        sum += sys.transition(*e).cost;
    }
    return sum;
}

Rational mean_cost(const ConsumptionSystem& sys, const FinitePath& path)
{
    if (path_length(path) == 0)
        throw zero_length_path{};
    return Rational(total_cost(sys, path), Int(path_length(path)));
}

Int end_cost(const ConsumptionSystem& sys, const FinitePath& path)
{
    // Longest suffix s_i ... s_n with s_{i+1}, ..., s_n all non-reload;
    // if the path ends in a reload state only the empty suffix qualifies.
    Int sum = 0;
    for (std::size_t i = path.size(); i-- > 1;) {
        if (sys.is_reload(path[i]))
            return sum;
        auto e = sys.find_transition(path[i - 1], path[i]);
        if (!e)
            throw std::invalid_argument("not a path of the system");
        sum += sys.transition(*e).cost;
    }
    return sum;
}

bool is_cap_bounded(const ConsumptionSystem& sys, const FinitePath& path, const Int& cap)
{
    Int consumed = 0; // since the most recent reload visit (or the start)
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto e = sys.find_transition(path[i], path[i + 1]);
        if (!e)
            throw std::invalid_argument("not a path of the system");
        consumed += sys.transition(*e).cost;
        if (consumed > cap)
            return false;
        if (sys.is_reload(path[i + 1]))
            consumed = 0;
    }
    return true;
}

FinitePath concat(const FinitePath& path1, const FinitePath& path2)
{
    if (path1.empty())
        return path2;
    if (path2.empty())
        return path1;
    if (path1.back() != path2.front())
        throw std::invalid_argument("concat endpoints do not match");
    FinitePath out = path1;
    out.insert(out.end(), path2.begin() + 1, path2.end());
    return out;
}

} // namespace consys
