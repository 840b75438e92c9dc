#include "vanplan/tourpool.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "vanplan/errors.h"
#include "vanplan/parallel.h"

namespace vanplan {

void SAParams::check() const {
  if (runs < 1 || iterations_per_run < 1) {
    throw ConfigError("SA runs and iterations must be at least 1");
  }
  if (!(cooling_factor > 0 && cooling_factor < 1)) {
    throw ConfigError("SA cooling factor must lie in (0, 1)");
  }
  if (!(initial_temperature >= 0)) {
    throw ConfigError("SA initial temperature must be non-negative");
  }
}

namespace {

constexpr double relocate_prob = 0.4;
constexpr double swap_prob = 0.3;
constexpr double fresh_route_prob = 0.05;

using Route = std::vector<Index>;

void throw_if_unreachable(const Instance& instance) {
  auto bad = unreachable_townships(instance);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "townships unreachable within one working day:";
    for (const auto i : bad) {
      msg << ' ' << i;
    }
    throw InfeasibleInstance(std::move(bad), msg.str());
  }
}

double mean_entry(const Matrix& dist) {
  const auto size = dist.size();
  double sum = 0;
  for (std::size_t i = 0; i < size; ++i) {
    for (const auto d : dist.row(i)) {
      sum += static_cast<double>(d);
    }
  }
  const auto mean = sum / static_cast<double>(size * size);
  return mean > 0 ? mean : 1.0;
}

class Annealer {
public:
  Annealer(const Instance& instance, const SAParams& sa, Seed seed)
    : _instance(instance),
      _sa(sa),
      _rng(seed),
      _penalty(10 * instance.params.max_day),
      _scale(mean_entry(instance.dist)) {
  }

  MtspSolution run(const AcceptObserver& on_accept) {
    initial_solution();
    auto best = _routes;
    auto best_cost = _cost;
    double temperature = _sa.initial_temperature;

    for (Count it = 0; it < _sa.iterations_per_run; ++it) {
      if (try_move(temperature)) {
        if (on_accept) {
          on_accept(_cost);
        }
        if (_infeasible == 0 && _cost < best_cost) {
          best = _routes;
          best_cost = _cost;
        }
      }
      temperature *= _sa.cooling_factor;
    }

    MtspSolution out;
    out.tours.reserve(best.size());
    for (auto& route : best) {
      out.tours.push_back(BasicTour{std::move(route)});
    }
    return out;
  }

private:
  struct Edit {
    std::size_t route;
    Route stops;
  };

  Minutes route_cost(const Route& route) const {
    if (route.empty()) {
      return 0;
    }
    const auto travel = travel_time(route, _instance);
    const auto slots = static_cast<Minutes>(route.size());
    const bool ok = travel + _instance.params.exam_duration * slots <=
                    _instance.params.max_day;
    return ok ? travel : travel + _penalty;
  }

  bool penalized(const Route& route) const {
    return !route.empty() && !is_feasible_basic_tour(route, _instance);
  }

  void initial_solution() {
    auto order = served_townships(_instance);
    std::shuffle(order.begin(), order.end(), _rng);
    Route current;
    for (const auto township : order) {
      current.push_back(township);
      if (!is_feasible_basic_tour(current, _instance)) {
        current.pop_back();
        _routes.push_back(std::move(current));
        current = {township};
      }
    }
    if (!current.empty()) {
      _routes.push_back(std::move(current));
    }
    _route_costs.clear();
    _cost = 0;
    _infeasible = 0;
    for (const auto& route : _routes) {
      _route_costs.push_back(route_cost(route));
      _cost += _route_costs.back();
    }
  }

  std::size_t total_stops() const {
    std::size_t total = 0;
    for (const auto& route : _routes) {
      total += route.size();
    }
    return total;
  }

  // Uniformly random township position as (route, offset).
  std::pair<std::size_t, std::size_t> pick_position() {
    auto k = std::uniform_int_distribution<std::size_t>(0, total_stops() - 1)(_rng);
    for (std::size_t r = 0; r < _routes.size(); ++r) {
      if (k < _routes[r].size()) {
        return {r, k};
      }
      k -= _routes[r].size();
    }
    return {_routes.size() - 1, _routes.back().size() - 1};
  }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(_rng);
  }

  std::vector<Edit> propose_relocate() {
    const auto [from, pos] = pick_position();
    const auto township = _routes[from][pos];
    Route source = _routes[from];
    source.erase(source.begin() + static_cast<std::ptrdiff_t>(pos));

    const bool fresh =
      std::uniform_real_distribution<double>(0, 1)(_rng) < fresh_route_prob;
    if (fresh) {
      if (source.empty()) {
        return {};
      }
      return {{from, std::move(source)}, {_routes.size(), Route{township}}};
    }

    const auto to = uniform(0, _routes.size() - 1);
    if (to == from) {
      source.insert(source.begin() +
                      static_cast<std::ptrdiff_t>(uniform(0, source.size())),
                    township);
      return {{from, std::move(source)}};
    }
    Route target = _routes[to];
    target.insert(target.begin() +
                    static_cast<std::ptrdiff_t>(uniform(0, target.size())),
                  township);
    return {{from, std::move(source)}, {to, std::move(target)}};
  }

  std::vector<Edit> propose_swap() {
    const auto [a, i] = pick_position();
    const auto [b, j] = pick_position();
    if (a == b) {
      return {};
    }
    Route first = _routes[a];
    Route second = _routes[b];
    std::swap(first[i], second[j]);
    return {{a, std::move(first)}, {b, std::move(second)}};
  }

  std::vector<Edit> propose_reverse() {
    const auto [r, unused] = pick_position();
    const auto len = _routes[r].size();
    if (len < 2) {
      return {};
    }
    auto i = uniform(0, len - 1);
    auto j = uniform(0, len - 1);
    if (i == j) {
      return {};
    }
    if (i > j) {
      std::swap(i, j);
    }
    Route route = _routes[r];
    std::reverse(route.begin() + static_cast<std::ptrdiff_t>(i),
                 route.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    return {{r, std::move(route)}};
  }

  bool accept(Minutes delta, double temperature) {
    if (delta <= 0) {
      return true;
    }
    if (temperature <= 0) {
      return false;
    }
    const auto p = std::exp(-static_cast<double>(delta) / (temperature * _scale));
    return std::uniform_real_distribution<double>(0, 1)(_rng) < p;
  }

  bool try_move(double temperature) {
    const auto kind = std::uniform_real_distribution<double>(0, 1)(_rng);
    std::vector<Edit> edits;
    if (kind < relocate_prob) {
      edits = propose_relocate();
    } else if (kind < relocate_prob + swap_prob && _routes.size() > 1) {
      edits = propose_swap();
    } else {
      edits = propose_reverse();
    }
    if (edits.empty()) {
      return false;
    }

    Minutes delta = 0;
    std::vector<Minutes> new_costs;
    for (const auto& edit : edits) {
      new_costs.push_back(route_cost(edit.stops));
      delta += new_costs.back();
      if (edit.route < _routes.size()) {
        delta -= _route_costs[edit.route];
      }
    }
    if (!accept(delta, temperature)) {
      return false;
    }

    for (std::size_t e = 0; e < edits.size(); ++e) {
      auto& edit = edits[e];
      if (edit.route < _routes.size()) {
        _infeasible -= penalized(_routes[edit.route]) ? 1 : 0;
        _routes[edit.route] = std::move(edit.stops);
        _route_costs[edit.route] = new_costs[e];
        _infeasible += penalized(_routes[edit.route]) ? 1 : 0;
      } else {
        _routes.push_back(std::move(edit.stops));
        _route_costs.push_back(new_costs[e]);
        _infeasible += penalized(_routes.back()) ? 1 : 0;
      }
    }
    _cost += delta;

    for (std::size_t r = _routes.size(); r-- > 0;) {
      if (_routes[r].empty()) {
        _routes.erase(_routes.begin() + static_cast<std::ptrdiff_t>(r));
        _route_costs.erase(_route_costs.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
    return true;
  }

  const Instance& _instance;
  const SAParams& _sa;
  Rng _rng;
  Minutes _penalty;
  double _scale;

  std::vector<Route> _routes;
  std::vector<Minutes> _route_costs;
  Minutes _cost = 0;
  std::size_t _infeasible = 0;
};

bool canonical_less(const BasicTour& a, const BasicTour& b) {
  if (a.stops.size() != b.stops.size()) {
    return a.stops.size() < b.stops.size();
  }
  return a.stops < b.stops;
}

} // namespace

MtspSolution sa_solve_mtsp(const Instance& instance,
                           const SAParams& sa,
                           Seed run_seed,
                           const AcceptObserver& on_accept) {
  sa.check();
  throw_if_unreachable(instance);
  if (served_townships(instance).empty()) {
    return {};
  }
  return Annealer(instance, sa, run_seed).run(on_accept);
}

std::vector<BasicTour> build_pool(const Instance& instance,
                                  const SAParams& sa) {
  sa.check();
  throw_if_unreachable(instance);

  std::vector<MtspSolution> runs(static_cast<std::size_t>(sa.runs));
  parallel_for(runs.size(), sa.threads, [&](std::size_t r) {
    runs[r] = sa_solve_mtsp(instance, sa, derive_seed(sa.seed, r));
  });

  std::set<BasicTour, decltype(&canonical_less)> unique(&canonical_less);
  for (auto& run : runs) {
    for (auto& tour : run.tours) {
      unique.insert(std::move(tour));
    }
  }
  for (const auto township : served_townships(instance)) {
    unique.insert(BasicTour{{township}});
  }
  return {unique.begin(), unique.end()};
}

} // namespace vanplan
