#include "vanplan/heuristic.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "vanplan/errors.h"
#include "vanplan/parallel.h"
#include "vanplan/validate.h"

namespace vanplan {

void HeuristicParams::check() const {
  if (!(keep_percent > 0 && keep_percent <= 1)) {
    throw ConfigError("keep_percent must lie in (0, 1]");
  }
  if (!(difference_factor > 0)) {
    throw ConfigError("difference_factor must be positive");
  }
  if (min_exams_per_stop < 0) {
    throw ConfigError("min_exams_per_stop must be non-negative");
  }
  if (weights.tours < 0 || weights.distance < 0 || weights.distinct < 0) {
    throw ConfigError("schedule weights must be non-negative");
  }
  if (restarts && *restarts < 1) {
    throw ConfigError("restart count must be at least 1");
  }
}

std::vector<Index> check_feasibility(const Instance& instance) {
  return unreachable_townships(instance);
}

void require_feasible(const Instance& instance) {
  auto bad = check_feasibility(instance);
  if (bad.empty()) {
    return;
  }
  std::ostringstream msg;
  msg << "infeasible instance, no single-day tour can serve:";
  for (const auto i : bad) {
    msg << ' ' << i << " (" << instance.names[i] << ')';
  }
  throw InfeasibleInstance(std::move(bad), msg.str());
}

namespace {

std::vector<std::size_t> visit_order(const BasicTour& tour,
                                     std::span<const Count> remaining,
                                     const Instance& instance,
                                     const HeuristicParams& hp,
                                     Rng* rng) {
  std::vector<std::size_t> order(tour.stops.size());
  std::iota(order.begin(), order.end(), 0);
  auto from_depot = [&](std::size_t k) {
    return instance.dist(depot, tour.stops[k]);
  };

  switch (hp.strategy) {
  case Strategy::FurthestFirst:
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return from_depot(a) > from_depot(b);
    });
    break;
  case Strategy::ClosestFirst:
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return from_depot(a) < from_depot(b);
    });
    break;
  case Strategy::MostRelevantFirst:
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      const auto ra = remaining[tour.stops[a]];
      const auto rb = remaining[tour.stops[b]];
      if (ra != rb) {
        return ra > rb;
      }
      return from_depot(a) > from_depot(b);
    });
    break;
  case Strategy::Random:
    if (rng == nullptr) {
      throw ContractViolation("the Random strategy needs a random stream");
    }
    std::shuffle(order.begin(), order.end(), *rng);
    break;
  }
  return order;
}

Minutes tour_travel(const BasicTour& tour, const Instance& instance) {
  return travel_time(tour, instance);
}

std::vector<Count> fill_stops(const BasicTour& tour,
                              Minutes travel,
                              std::span<const Count> remaining,
                              const Instance& instance,
                              const HeuristicParams& hp,
                              Rng* rng) {
  std::vector<Count> exams(tour.stops.size(), 0);
  const auto exam = instance.params.exam_duration;
  auto budget = instance.params.max_day - travel;
  if (budget < 0) {
    return exams;
  }
  for (const auto k : visit_order(tour, remaining, instance, hp, rng)) {
    const auto want = remaining[tour.stops[k]];
    if (want <= 0) {
      continue;
    }
    const auto fits = std::min(want, budget / exam);
    // Never demand more than the stop's own singleton day could hold.
    const auto t = tour.stops[k];
    const auto alone = (instance.params.max_day - instance.dist(depot, t) - instance.dist(t, depot)) / exam;
    if (fits > 0 && fits >= std::min({hp.min_exams_per_stop, want, alone})) {
      exams[k] = fits;
      budget -= fits * exam;
    }
  }
  return exams;
}

std::size_t kept_count(double keep_percent, std::size_t pool_size) {
  const auto raw = std::ceil(keep_percent * static_cast<double>(pool_size) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(raw), 1, pool_size);
}

} // namespace

std::vector<Count> compute_examinations(const BasicTour& tour,
                                        std::span<const Count> remaining,
                                        const Instance& instance,
                                        const HeuristicParams& hp,
                                        Rng* rng) {
  return fill_stops(tour, tour_travel(tour, instance), remaining, instance, hp, rng);
}

double score_examinations(Count exams, Minutes travel, const HeuristicParams& hp) {
  if (exams <= 0) {
    return 0.0;
  }
  const auto e = static_cast<double>(exams);
  const auto d = static_cast<double>(travel);
  if (hp.score_mode == ScoreMode::Ratio) {
    // A route of zero driving minutes counts as one minute.
    return e / std::max(d, 1.0);
  }
  return std::max(0.0, hp.difference_factor * e - d);
}

double tour_score(const BasicTour& tour,
                  std::span<const Count> remaining,
                  const Instance& instance,
                  const HeuristicParams& hp,
                  Rng* rng) {
  const auto travel = tour_travel(tour, instance);
  const auto exams = fill_stops(tour, travel, remaining, instance, hp, rng);
  return score_examinations(std::accumulate(exams.begin(), exams.end(), Count{0}),
                            travel,
                            hp);
}

TourChoice choose_tour(std::span<const BasicTour> pool,
                       std::span<const Count> remaining,
                       const Instance& instance,
                       const HeuristicParams& hp,
                       Rng& rng) {
  std::vector<TourChoice> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto travel = tour_travel(pool[i], instance);
    auto exams = fill_stops(pool[i], travel, remaining, instance, hp, &rng);
    const auto total = std::accumulate(exams.begin(), exams.end(), Count{0});
    scored.push_back({i, std::move(exams), score_examinations(total, travel, hp)});
  }
  // Difference scores vanish once factor * exams no longer covers the drive;
  // rank such leftovers by Ratio so planning still terminates.
  const bool all_zero =
    std::none_of(scored.begin(), scored.end(), [](const auto& c) { return c.score > 0; });
  if (all_zero && hp.score_mode == ScoreMode::Difference) {
    auto ratio = hp;
    ratio.score_mode = ScoreMode::Ratio;
    for (auto& c : scored) {
      const auto total = std::accumulate(c.exams.begin(), c.exams.end(), Count{0});
      c.score = score_examinations(total, tour_travel(pool[c.pool_index], instance), ratio);
    }
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.score > b.score;
  });

  if (!scored.empty()) {
    scored.resize(kept_count(hp.keep_percent, scored.size()));
  }
  std::erase_if(scored, [](const auto& c) { return !(c.score > 0); });
  if (scored.empty()) {
    throw NoProductiveTour("no route in the pool can schedule a remaining examination");
  }

  double total = 0;
  for (const auto& c : scored) {
    total += c.score;
  }
  auto pick = std::uniform_real_distribution<double>(0, total)(rng);
  for (auto& c : scored) {
    if (pick < c.score) {
      return std::move(c);
    }
    pick -= c.score;
  }
  return std::move(scored.back());
}

Schedule generate_planning(std::span<const BasicTour> pool,
                           const Instance& instance,
                           const HeuristicParams& hp,
                           Rng& rng) {
  std::vector<Count> remaining = instance.demand;
  auto left = std::accumulate(remaining.begin(), remaining.end(), Count{0});
  std::vector<PlannedTour> tours;

  while (left > 0) {
    auto choice = choose_tour(pool, remaining, instance, hp, rng);
    const auto& stops = pool[choice.pool_index].stops;
    for (std::size_t j = 0; j < stops.size(); ++j) {
      remaining[stops[j]] -= choice.exams[j];
      left -= choice.exams[j];
    }
    tours.push_back(PlannedTour{stops, std::move(choice.exams)});
  }
  return make_schedule(std::move(tours), instance.params);
}

double schedule_score(const Schedule& schedule,
                      const Instance& instance,
                      const HeuristicParams& hp) {
  std::set<std::vector<Index>> distinct;
  for (const auto& tour : schedule.tours) {
    distinct.insert(tour.stops);
  }
  return hp.weights.tours * static_cast<double>(schedule.tours.size()) +
         hp.weights.distance * static_cast<double>(total_travel(schedule, instance)) +
         hp.weights.distinct * static_cast<double>(distinct.size());
}

namespace {

// Dropping one tour must always outweigh any change of the other terms:
// travel is below max_day per tour and tours never exceed total demand.
void check_tour_dominance(const Instance& instance, const HeuristicParams& hp) {
  const auto max_tours = static_cast<double>(instance.total_demand());
  const auto other_terms =
    hp.weights.distance * static_cast<double>(instance.params.max_day) * max_tours +
    hp.weights.distinct * max_tours;
  if (max_tours > 0 && !(hp.weights.tours > other_terms)) {
    std::ostringstream msg;
    msg << "tour weight " << hp.weights.tours << " must exceed " << other_terms
        << " for this instance so that fewer tours always score better";
    throw ConfigError(msg.str());
  }
}

struct Candidate {
  std::size_t restart;
  double score;
  Schedule schedule;
};

bool better(const Candidate& a, const Candidate& b, const Instance& instance) {
  if (a.score != b.score) {
    return a.score < b.score;
  }
  const auto order = compare_schedules(a.schedule, b.schedule, instance);
  if (order != 0) {
    return order < 0;
  }
  return a.restart < b.restart;
}

} // namespace

HeuristicReport solve_heuristic(const Instance& instance,
                                const HeuristicParams& hp,
                                const SAParams& sa) {
  instance.check();
  hp.check();
  require_feasible(instance);
  check_tour_dominance(instance, hp);

  HeuristicReport report;
  report.pool = build_pool(instance, sa);

  using Clock = std::chrono::steady_clock;
  const auto deadline =
    Clock::now() + std::chrono::duration_cast<Clock::duration>(
                     std::chrono::duration<double>(hp.time_limit));

  std::mutex mutex;
  std::optional<Candidate> best;
  std::vector<std::pair<std::size_t, double>> scores;

  auto one_restart = [&](std::size_t restart) {
    Rng rng(derive_seed(hp.seed, restart));
    Candidate c{restart, 0, generate_planning(report.pool, instance, hp, rng)};
    c.score = schedule_score(c.schedule, instance, hp);
    std::scoped_lock lock(mutex);
    scores.emplace_back(restart, c.score);
    if (!best || better(c, *best, instance)) {
      best = std::move(c);
    }
  };

  if (hp.restarts) {
    parallel_for(static_cast<std::size_t>(*hp.restarts), hp.threads, one_restart);
  } else {
    std::atomic<std::size_t> next{0};
    const auto workers = resolve_threads(hp.threads);
    parallel_for(workers, workers, [&](std::size_t) {
      for (;;) {
        const auto restart = next++;
        if (restart > 0 && Clock::now() >= deadline) {
          return;
        }
        one_restart(restart);
      }
    });
  }

  std::sort(scores.begin(), scores.end());
  for (const auto& [restart, score] : scores) {
    report.scores.push_back(score);
  }
  report.best = std::move(best->schedule);
  report.best_score = best->score;
  return report;
}

} // namespace vanplan
