#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "support.h"
#include "vanplan/errors.h"
#include "vanplan/heuristic.h"
#include "vanplan/validate.h"

namespace vanplan {
namespace {

SAParams quick_sa(Seed seed = 3) {
  SAParams sa;
  sa.runs = 3;
  sa.iterations_per_run = 10000;
  sa.seed = seed;
  sa.threads = 1;
  return sa;
}

HeuristicParams test_mode(Count restarts = 4, Seed seed = 5) {
  HeuristicParams hp;
  hp.restarts = restarts;
  hp.seed = seed;
  hp.threads = 1;
  return hp;
}

// Townships at leg lengths 1, 2, ... with demand 6 each: singleton route k
// takes all 6 examinations over 2k minutes, Ratio score 3/k.
Instance star_instance(std::size_t townships) {
  const auto size = townships + 1;
  std::vector<std::vector<Minutes>> rows(size, std::vector<Minutes>(size, 0));
  for (std::size_t i = 1; i < size; ++i) {
    rows[0][i] = rows[i][0] = static_cast<Minutes>(i);
    for (std::size_t j = 1; j < size; ++j) {
      rows[i][j] = i == j ? 0 : static_cast<Minutes>(i + j);
    }
  }
  std::vector<Count> demand(size, 6);
  demand[0] = 0;
  return test::make_instance(rows, demand);
}

std::vector<BasicTour> singletons(std::size_t townships) {
  std::vector<BasicTour> pool;
  for (Index i = 1; i <= townships; ++i) {
    pool.push_back({{i}});
  }
  return pool;
}

TEST(CheckFeasibility, Boundaries) {
  EXPECT_TRUE(check_feasibility(test::single_township(285, 1)).empty());
  const auto over = test::make_instance({{0, 285}, {286, 0}}, {0, 1});
  EXPECT_EQ(check_feasibility(over), std::vector<Index>{1});
  EXPECT_THROW(require_feasible(over), InfeasibleInstance);
  // Unserved townships never make an instance infeasible.
  EXPECT_TRUE(check_feasibility(test::make_instance({{0, 285}, {286, 0}}, {0, 0})).empty());
}

TEST(ComputeExaminations, FurthestFirstHandTrace) {
  const auto instance = test::two_township_fixture(5, 20);
  const HeuristicParams hp;
  const std::vector<Count> remaining{0, 5, 20};
  EXPECT_EQ(compute_examinations({{1, 2}}, remaining, instance, hp), (std::vector<Count>{5, 8}));
}

TEST(ComputeExaminations, AllZeroRemaining) {
  const auto instance = test::two_township_fixture(5, 20);
  const std::vector<Count> remaining{0, 0, 0};
  EXPECT_EQ(compute_examinations({{1, 2}}, remaining, instance, HeuristicParams{}),
            (std::vector<Count>{0, 0}));
}

TEST(ComputeExaminations, LastExaminationIsNotStranded) {
  const auto instance = test::two_township_fixture(1, 20);
  HeuristicParams hp;
  hp.min_exams_per_stop = 2;
  const std::vector<Count> remaining{0, 1, 20};
  EXPECT_EQ(compute_examinations({{1, 2}}, remaining, instance, hp), (std::vector<Count>{1, 12}));
}

TEST(ComputeExaminations, LimiterSkipsStopsThatCannotReachTheMinimum) {
  // 190 travel leaves 13 slots; the first stop takes 12, leaving one slot
  // for a stop that needs at least two.
  const auto instance = test::two_township_fixture(12, 20);
  HeuristicParams hp;
  hp.min_exams_per_stop = 2;
  const std::vector<Count> remaining{0, 12, 20};
  EXPECT_EQ(compute_examinations({{1, 2}}, remaining, instance, hp), (std::vector<Count>{12, 0}));
  hp.min_exams_per_stop = 1;
  EXPECT_EQ(compute_examinations({{1, 2}}, remaining, instance, hp), (std::vector<Count>{12, 1}));
}

TEST(ComputeExaminations, RemoteStopWithRoomForOneIsNotStarved) {
  // Round trip 560 leaves one slot even on a singleton route.
  const auto instance = test::single_township(280, 5);
  HeuristicParams hp;
  hp.min_exams_per_stop = 2;
  EXPECT_EQ(compute_examinations({{1}}, instance.demand, instance, hp), std::vector<Count>{1});
  Rng rng(1);
  const auto schedule = generate_planning(singletons(1), instance, hp, rng);
  EXPECT_EQ(schedule.tours.size(), 5u);
  EXPECT_TRUE(validate_schedule(schedule, instance).empty());
}

TEST(ComputeExaminations, ClosestFirstFillsTheNearStopFirst) {
  const auto instance = test::two_township_fixture(20, 20);
  HeuristicParams hp;
  hp.strategy = Strategy::ClosestFirst;
  const std::vector<Count> remaining{0, 20, 20};
  EXPECT_EQ(compute_examinations({{1, 2}}, remaining, instance, hp), (std::vector<Count>{0, 13}));
}

TEST(ComputeExaminations, RandomStrategyNeedsAGenerator) {
  const auto instance = test::two_township_fixture(5, 20);
  HeuristicParams hp;
  hp.strategy = Strategy::Random;
  const std::vector<Count> remaining{0, 5, 20};
  EXPECT_THROW(compute_examinations({{1, 2}}, remaining, instance, hp), ContractViolation);
  Rng rng(1);
  const auto exams = compute_examinations({{1, 2}}, remaining, instance, hp, &rng);
  EXPECT_EQ(exams[0] + exams[1], 13);
}

TEST(ComputeExaminations, BudgetAndDemandRespected) {
  Rng rng(21);
  for (Seed seed = 1; seed <= 40; ++seed) {
    const auto instance = test::random_metric_instance(8, seed, 30);
    const auto pool = build_pool(instance, quick_sa(seed));
    for (const auto strategy : {Strategy::FurthestFirst, Strategy::ClosestFirst,
                                Strategy::MostRelevantFirst, Strategy::Random}) {
      HeuristicParams hp;
      hp.strategy = strategy;
      for (const auto& tour : pool) {
        const auto exams = compute_examinations(tour, instance.demand, instance, hp, &rng);
        ASSERT_EQ(exams.size(), tour.stops.size());
        Count total = 0;
        for (std::size_t j = 0; j < exams.size(); ++j) {
          EXPECT_GE(exams[j], 0);
          EXPECT_LE(exams[j], instance.demand[tour.stops[j]]);
          total += exams[j];
        }
        EXPECT_LE(test::oracle_travel(tour.stops, instance) +
                    total * instance.params.exam_duration,
                  instance.params.max_day);
      }
    }
  }
}

TEST(ScoreExaminations, Examples) {
  HeuristicParams hp;
  EXPECT_NEAR(score_examinations(13, 190, hp), 0.0684210526, 1e-9);
  EXPECT_EQ(score_examinations(0, 190, hp), 0.0);
  hp.score_mode = ScoreMode::Difference;
  EXPECT_EQ(score_examinations(13, 190, hp), 590.0);
  EXPECT_EQ(score_examinations(0, 190, hp), 0.0);
  EXPECT_EQ(score_examinations(1, 190, hp), 0.0);
}

TEST(TourScore, MatchesHandTrace) {
  const auto instance = test::two_township_fixture(5, 20);
  const std::vector<Count> remaining{0, 5, 20};
  EXPECT_NEAR(tour_score({{1, 2}}, remaining, instance, HeuristicParams{}), 13.0 / 190.0, 1e-12);
}

TEST(TourScore, RatioRankingIsScaleInvariant) {
  for (Seed seed = 1; seed <= 10; ++seed) {
    const auto base = test::random_metric_instance(10, seed);
    const auto pool = build_pool(base, quick_sa(seed));
    for (const Minutes c : {2, 3, 7}) {
      auto scaled = base;
      for (std::size_t i = 0; i < scaled.dist.size(); ++i) {
        for (std::size_t j = 0; j < scaled.dist.size(); ++j) {
          scaled.dist(i, j) *= c;
        }
      }
      scaled.params.max_day *= c;
      scaled.params.exam_duration *= c;
      const HeuristicParams hp;
      for (std::size_t a = 0; a < pool.size(); ++a) {
        const auto sa = tour_score(pool[a], base.demand, base, hp);
        EXPECT_NEAR(tour_score(pool[a], scaled.demand, scaled, hp) * static_cast<double>(c), sa,
                    1e-12);
        for (std::size_t b = a + 1; b < pool.size(); ++b) {
          const auto sb = tour_score(pool[b], base.demand, base, hp);
          const auto ta = tour_score(pool[a], scaled.demand, scaled, hp);
          const auto tb = tour_score(pool[b], scaled.demand, scaled, hp);
          EXPECT_EQ(sa < sb, ta < tb);
          EXPECT_EQ(sb < sa, tb < ta);
        }
      }
    }
  }
}

TEST(ChooseTour, SingleProductiveTour) {
  const auto instance = star_instance(1);
  const auto pool = singletons(1);
  Rng rng(1);
  for (int draw = 0; draw < 100; ++draw) {
    const auto choice = choose_tour(pool, instance.demand, instance, HeuristicParams{}, rng);
    EXPECT_EQ(choice.pool_index, 0u);
    EXPECT_EQ(choice.exams, std::vector<Count>{6});
  }
}

TEST(ChooseTour, FrequenciesFollowScores) {
  const auto instance = star_instance(2);
  const auto pool = singletons(2);
  HeuristicParams hp;
  hp.keep_percent = 1.0;
  EXPECT_DOUBLE_EQ(tour_score(pool[0], instance.demand, instance, hp), 3.0);
  EXPECT_DOUBLE_EQ(tour_score(pool[1], instance.demand, instance, hp), 1.5);

  // Leg 3 instead of 2 gives the second route score 1.
  auto tuned = instance;
  tuned.dist(0, 2) = tuned.dist(2, 0) = 3;
  EXPECT_DOUBLE_EQ(tour_score(pool[1], tuned.demand, tuned, hp), 1.0);

  Rng rng(2024);
  constexpr int draws = 100000;
  int first = 0;
  for (int k = 0; k < draws; ++k) {
    first += choose_tour(pool, tuned.demand, tuned, hp, rng).pool_index == 0;
  }
  EXPECT_NEAR(static_cast<double>(first) / draws, 0.75, 0.01);
}

TEST(ChooseTour, TruncationKeepsOnlyTheTop) {
  const auto instance = star_instance(4);
  auto pool = singletons(4);
  std::reverse(pool.begin(), pool.end());
  HeuristicParams hp;
  hp.keep_percent = 0.5;
  Rng rng(8);
  std::set<std::size_t> picked;
  for (int k = 0; k < 5000; ++k) {
    picked.insert(choose_tour(pool, instance.demand, instance, hp, rng).pool_index);
  }
  // Reversed pool: townships 1 and 2 sit at indices 3 and 2.
  EXPECT_EQ(picked, (std::set<std::size_t>{2, 3}));
}

TEST(ChooseTour, DifferenceModeFallsBackToRatioWhenNothingPays) {
  // One examination is worth 60 minutes; the round trip costs 120.
  const auto instance = test::single_township(60, 1);
  HeuristicParams hp;
  hp.score_mode = ScoreMode::Difference;
  EXPECT_EQ(tour_score({{1}}, instance.demand, instance, hp), 0.0);
  Rng rng(1);
  const auto choice = choose_tour(singletons(1), instance.demand, instance, hp, rng);
  EXPECT_EQ(choice.exams, std::vector<Count>{1});
  EXPECT_DOUBLE_EQ(choice.score, 1.0 / 120.0);
  const auto schedule = generate_planning(singletons(1), instance, hp, rng);
  EXPECT_TRUE(validate_schedule(schedule, instance).empty());
}

TEST(ChooseTour, NothingProductive) {
  const auto instance = star_instance(2);
  const std::vector<Count> remaining{0, 0, 0};
  Rng rng(1);
  EXPECT_THROW(choose_tour(singletons(2), remaining, instance, HeuristicParams{}, rng),
               NoProductiveTour);
}

TEST(ChooseTour, TruncationInvariantOnPools) {
  Rng rng(4);
  for (Seed seed = 1; seed <= 10; ++seed) {
    const auto instance = test::random_metric_instance(12, seed);
    const auto pool = build_pool(instance, quick_sa(seed));
    HeuristicParams hp;
    std::vector<double> scores;
    for (const auto& tour : pool) {
      scores.push_back(tour_score(tour, instance.demand, instance, hp));
    }
    auto sorted = scores;
    std::sort(sorted.rbegin(), sorted.rend());
    const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(hp.keep_percent * static_cast<double>(pool.size()) - 1e-9)));
    const auto threshold = sorted[keep - 1];
    for (int k = 0; k < 200; ++k) {
      const auto choice = choose_tour(pool, instance.demand, instance, hp, rng);
      EXPECT_GE(scores[choice.pool_index], threshold);
      EXPECT_GT(choice.score, 0.0);
    }
  }
}

TEST(GeneratePlanning, SingleTownshipExamples) {
  Rng rng(1);
  const HeuristicParams hp;
  const std::vector<BasicTour> pool{{{1}}};

  const auto small = test::single_township(60, 2);
  const auto one = generate_planning(pool, small, hp, rng);
  ASSERT_EQ(one.tours.size(), 1u);
  EXPECT_EQ(one.tours[0], (PlannedTour{{1}, {2}}));

  // Capacity (600 - 120) / 30 = 16 per tour.
  const auto big = test::single_township(60, 20);
  const auto two = generate_planning(pool, big, hp, rng);
  ASSERT_EQ(two.tours.size(), 2u);
  EXPECT_TRUE(validate_schedule(two, big).empty());
}

TEST(GeneratePlanning, EveryStrategyYieldsValidSchedules) {
  for (Seed seed = 1; seed <= 15; ++seed) {
    const auto instance = test::random_metric_instance(15, seed);
    const auto pool = build_pool(instance, quick_sa(seed));
    for (const auto strategy : {Strategy::FurthestFirst, Strategy::ClosestFirst,
                                Strategy::MostRelevantFirst, Strategy::Random}) {
      for (const auto mode : {ScoreMode::Ratio, ScoreMode::Difference}) {
        HeuristicParams hp;
        hp.strategy = strategy;
        hp.score_mode = mode;
        Rng rng(seed);
        const auto schedule = generate_planning(pool, instance, hp, rng);
        EXPECT_TRUE(validate_schedule(schedule, instance).empty()) << "seed " << seed;

        std::map<Index, Count> served;
        for (const auto& tour : schedule.tours) {
          EXPECT_LE(duration(tour, instance), instance.params.max_day);
          for (std::size_t j = 0; j < tour.stops.size(); ++j) {
            served[tour.stops[j]] += tour.exams[j];
          }
        }
        for (Index i = 1; i <= instance.n(); ++i) {
          EXPECT_EQ(served[i], instance.demand[i]);
        }
      }
    }
  }
}

TEST(ScheduleScore, Examples) {
  const HeuristicParams hp;
  // Round trips of 100 and 200 minutes.
  const auto pair = test::make_instance({{0, 50, 100}, {50, 0, 100}, {100, 100, 0}}, {0, 1, 1});
  const auto distinct = make_schedule({{{1}, {1}}, {{2}, {1}}}, pair.params);
  EXPECT_DOUBLE_EQ(schedule_score(distinct, pair, hp), 2000500.0);

  // The same 150-minute route twice: one distinct sequence.
  const auto twin = test::single_township(75, 2);
  const auto same = make_schedule({{{1}, {1}}, {{1}, {1}}}, twin.params);
  EXPECT_DOUBLE_EQ(schedule_score(same, twin, hp), 2000400.0);

  EXPECT_DOUBLE_EQ(schedule_score(Schedule{}, pair, hp), 0.0);
}

TEST(SolveHeuristic, DeterministicAcrossThreadCounts) {
  const auto instance = test::random_metric_instance(20, 9);
  auto hp = test_mode(6, 17);
  const auto single = solve_heuristic(instance, hp, quick_sa());
  hp.threads = 4;
  const auto multi = solve_heuristic(instance, hp, quick_sa());
  EXPECT_EQ(single.best, multi.best);
  EXPECT_EQ(single.scores, multi.scores);
  EXPECT_EQ(solve_heuristic(instance, hp, quick_sa()).best, single.best);
}

TEST(SolveHeuristic, ReturnsTheBestPlanning) {
  const auto instance = test::random_metric_instance(20, 12);
  const auto report = solve_heuristic(instance, test_mode(8), quick_sa());
  ASSERT_EQ(report.scores.size(), 8u);
  EXPECT_EQ(report.best_score, *std::min_element(report.scores.begin(), report.scores.end()));
  EXPECT_DOUBLE_EQ(schedule_score(report.best, instance, test_mode()), report.best_score);
  EXPECT_TRUE(validate_schedule(report.best, instance).empty());
}

TEST(SolveHeuristic, TinyBudgetStillCompletesOnePlanning) {
  const auto instance = test::random_metric_instance(15, 2);
  HeuristicParams hp;
  hp.time_limit = 1e-6;
  hp.threads = 1;
  const auto report = solve_heuristic(instance, hp, quick_sa());
  EXPECT_GE(report.scores.size(), 1u);
  EXPECT_TRUE(validate_schedule(report.best, instance).empty());
}

TEST(SolveHeuristic, Errors) {
  const auto over = test::make_instance({{0, 285}, {286, 0}}, {0, 1});
  try {
    run_heuristic(over, test_mode(), quick_sa());
    FAIL() << "expected InfeasibleInstance";
  } catch (const InfeasibleInstance& e) {
    EXPECT_EQ(e.townships(), std::vector<Index>{1});
  }

  auto hp = test_mode();
  hp.weights.tours = 1.0;
  EXPECT_THROW(run_heuristic(test::single_township(60, 20), hp, quick_sa()), ConfigError);

  hp = test_mode();
  hp.keep_percent = 0.0;
  EXPECT_THROW(hp.check(), ConfigError);
}

TEST(SolveHeuristic, ZeroDemandGivesEmptySchedule) {
  const auto instance = test::single_township(60, 0);
  const auto schedule = run_heuristic(instance, test_mode(), quick_sa());
  EXPECT_TRUE(schedule.tours.empty());
}

} // namespace
} // namespace vanplan
