#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vanplan/model.h"
#include "vanplan/tourpool.h"

namespace vanplan {

// Order in which the stops of a route receive examinations.
enum class Strategy { FurthestFirst, ClosestFirst, MostRelevantFirst, Random };

enum class ScoreMode { Ratio, Difference };

struct ScheduleWeights {
  double tours = 1e6;
  double distance = 1.0;
  double distinct = 100.0;
};

struct HeuristicParams {
  Strategy strategy = Strategy::FurthestFirst;
  ScoreMode score_mode = ScoreMode::Ratio;
  // Minutes of travel one examination is worth in Difference mode.
  double difference_factor = 60.0;
  // Fraction of the best-scoring routes eligible at each choice.
  double keep_percent = 0.20;
  Count min_exams_per_stop = 2;
  ScheduleWeights weights;
  Seed seed = 1;
  double time_limit = 20.0;
  // Test mode: a fixed number of plannings instead of the wall clock.
  std::optional<Count> restarts;
  unsigned threads = 0;

  void check() const;
};

// Served townships whose singleton round trip cannot fit one examination.
// Empty means the instance is feasible.
std::vector<Index> check_feasibility(const Instance& instance);

// Throws InfeasibleInstance listing the offending townships.
void require_feasible(const Instance& instance);

// Examinations per stop, aligned with tour.stops. Stops are visited in
// strategy order and each is filled as far as the remaining day allows; a
// stop that cannot take min(min_exams_per_stop, remaining, what its own
// singleton route could hold) examinations gets none. The Random strategy draws its order from `rng`.
std::vector<Count> compute_examinations(const BasicTour& tour,
                                        std::span<const Count> remaining,
                                        const Instance& instance,
                                        const HeuristicParams& hp,
                                        Rng* rng = nullptr);

// Score of a route with `exams` examinations and `travel` driving minutes.
double score_examinations(Count exams, Minutes travel, const HeuristicParams& hp);

double tour_score(const BasicTour& tour,
                  std::span<const Count> remaining,
                  const Instance& instance,
                  const HeuristicParams& hp,
                  Rng* rng = nullptr);

struct TourChoice {
  std::size_t pool_index;
  std::vector<Count> exams;
  double score;
};

// Scores every route, keeps the top ceil(keep_percent * |pool|) (at least
// one), drops zero scores, then samples proportionally to score. When every
// Difference score is zero the routes are ranked by Ratio instead. Throws
// NoProductiveTour when no route can take a remaining examination.
TourChoice choose_tour(std::span<const BasicTour> pool,
                       std::span<const Count> remaining,
                       const Instance& instance,
                       const HeuristicParams& hp,
                       Rng& rng);

// Repeatedly chooses a route and deducts its examinations until all
// demand is covered.
Schedule generate_planning(std::span<const BasicTour> pool,
                           const Instance& instance,
                           const HeuristicParams& hp,
                           Rng& rng);

// Weighted sum of tour count, total travel and distinct routes used.
// Lower is better.
double schedule_score(const Schedule& schedule,
                      const Instance& instance,
                      const HeuristicParams& hp);

struct HeuristicReport {
  Schedule best;
  double best_score = 0;
  // Score of every completed planning, in restart order.
  std::vector<double> scores;
  std::vector<BasicTour> pool;
};

HeuristicReport solve_heuristic(const Instance& instance,
                                const HeuristicParams& hp,
                                const SAParams& sa);

inline Schedule run_heuristic(const Instance& instance,
                              const HeuristicParams& hp,
                              const SAParams& sa) {
  return solve_heuristic(instance, hp, sa).best;
}

} // namespace vanplan
