#include "vanplan/genetic.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vanplan/errors.h"
#include "vanplan/heuristic.h"
#include "vanplan/parallel.h"

namespace vanplan {

void GAParams::check() const {
  if (mu < 1 || lambda < 1) {
    throw ConfigError("mu and lambda must be at least 1");
  }
  for (const auto p : {cx_prob, mut_prob, upmx_prob}) {
    if (!(p >= 0 && p <= 1)) {
      throw ConfigError("GA probabilities must lie in [0, 1]");
    }
  }
  for (const auto& weights : {mutation_weights, crossover_weights}) {
    double sum = 0;
    for (const auto w : weights) {
      if (!(w >= 0)) {
        throw ConfigError("operator weights must be non-negative");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("operator weights must sum to 1");
    }
  }
  if (tournament_size < 1) {
    throw ConfigError("tournament size must be at least 1");
  }
  if (tour_factor && !(*tour_factor > 0)) {
    throw ConfigError("tour factor must be positive");
  }
  if (generations && *generations < 0) {
    throw ConfigError("generation count must be non-negative");
  }
}

ExamIndex build_exam_index(const Instance& instance) {
  ExamIndex idx;
  idx.exam_to_township.reserve(static_cast<std::size_t>(instance.total_demand()));
  for (Index i = 1; i <= instance.n(); ++i) {
    idx.exam_to_township.insert(idx.exam_to_township.end(),
                                static_cast<std::size_t>(instance.demand[i]),
                                i);
  }
  return idx;
}

bool is_permutation(std::span<const ExamId> perm, std::size_t size) {
  if (perm.size() != size) {
    return false;
  }
  std::vector<bool> seen(size, false);
  for (const auto id : perm) {
    if (id >= size || seen[id]) {
      return false;
    }
    seen[id] = true;
  }
  return true;
}

std::vector<PlannedTour> greedy_split(const Chromosome& c,
                                      const ExamIndex& idx,
                                      const Instance& instance) {
  const auto& dist = instance.dist;
  const auto exam = instance.params.exam_duration;
  const auto max_day = instance.params.max_day;

  std::vector<PlannedTour> tours;
  PlannedTour current;
  Minutes minutes = 0;

  auto open = [&](Index u) {
    minutes = dist(depot, u) + exam + dist(u, depot);
    if (minutes > max_day) {
      std::ostringstream msg;
      msg << "a single examination in township " << u << " takes " << minutes
          << " minutes, limit " << max_day;
      throw InfeasibleInstance({u}, msg.str());
    }
    current.stops = {u};
    current.exams = {1};
  };

  for (const auto id : c.perm) {
    const auto u = idx.township(id);
    if (current.stops.empty()) {
      open(u);
      continue;
    }
    const auto last = current.stops.back();
    if (u == last) {
      if (minutes + exam <= max_day) {
        minutes += exam;
        ++current.exams.back();
        continue;
      }
    } else {
      const auto extended =
        minutes - dist(last, depot) + dist(last, u) + exam + dist(u, depot);
      if (extended <= max_day) {
        minutes = extended;
        current.stops.push_back(u);
        current.exams.push_back(1);
        continue;
      }
    }
    tours.push_back(std::move(current));
    current = {};
    open(u);
  }
  if (!current.stops.empty()) {
    tours.push_back(std::move(current));
  }
  return tours;
}

void swap_positions(std::vector<ExamId>& perm, std::size_t i, std::size_t j) {
  std::swap(perm.at(i), perm.at(j));
}

void reverse_segment(std::vector<ExamId>& perm, std::size_t first, std::size_t last) {
  std::reverse(perm.begin() + static_cast<std::ptrdiff_t>(first),
               perm.begin() + static_cast<std::ptrdiff_t>(last) + 1);
}

void shuffle_segment(std::vector<ExamId>& perm,
                     std::size_t first,
                     std::size_t last,
                     Rng& rng) {
  std::shuffle(perm.begin() + static_cast<std::ptrdiff_t>(first),
               perm.begin() + static_cast<std::ptrdiff_t>(last) + 1,
               rng);
}

namespace {

template <std::size_t K>
std::size_t sample_kind(const std::array<double, K>& weights, Rng& rng) {
  auto pick = std::uniform_real_distribution<double>(0, 1)(rng);
  for (std::size_t k = 0; k < K; ++k) {
    if (pick < weights[k]) {
      return k;
    }
    pick -= weights[k];
  }
  // Rounding left a sliver above the last positive weight.
  for (std::size_t k = K; k-- > 0;) {
    if (weights[k] > 0) {
      return k;
    }
  }
  return 0;
}

// Two distinct positions in [0, size), ascending.
std::pair<std::size_t, std::size_t> distinct_pair(std::size_t size, Rng& rng) {
  const auto i = std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
  auto j = std::uniform_int_distribution<std::size_t>(0, size - 2)(rng);
  if (j >= i) {
    ++j;
  }
  return {std::min(i, j), std::max(i, j)};
}

std::vector<std::size_t> positions(std::span<const ExamId> perm) {
  std::vector<std::size_t> pos(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pos[perm[i]] = i;
  }
  return pos;
}

Chromosome ox_child(const Chromosome& keep,
                    const Chromosome& other,
                    std::size_t first,
                    std::size_t last) {
  const auto size = keep.perm.size();
  Chromosome child{std::vector<ExamId>(size)};
  std::vector<bool> taken(size, false);
  for (auto i = first; i < last; ++i) {
    child.perm[i] = keep.perm[i];
    taken[keep.perm[i]] = true;
  }
  auto write = last % size;
  for (std::size_t k = 0; k < size; ++k) {
    const auto value = other.perm[(last + k) % size];
    if (taken[value]) {
      continue;
    }
    child.perm[write] = value;
    write = (write + 1) % size;
  }
  return child;
}

Chromosome pmx_child(const Chromosome& base,
                     const Chromosome& donor,
                     std::size_t first,
                     std::size_t last) {
  const auto size = base.perm.size();
  // Position of each value inside the donor segment, or size if absent.
  std::vector<std::size_t> in_segment(size, size);
  for (auto i = first; i < last; ++i) {
    in_segment[donor.perm[i]] = i;
  }
  Chromosome child = base;
  for (std::size_t i = 0; i < size; ++i) {
    if (i >= first && i < last) {
      child.perm[i] = donor.perm[i];
      continue;
    }
    auto value = base.perm[i];
    while (in_segment[value] != size) {
      value = base.perm[in_segment[value]];
    }
    child.perm[i] = value;
  }
  return child;
}

} // namespace

Chromosome mutate(const Chromosome& c, MutationKind kind, Rng& rng) {
  Chromosome out = c;
  if (out.perm.size() < 2) {
    return out;
  }
  const auto [i, j] = distinct_pair(out.perm.size(), rng);
  switch (kind) {
  case MutationKind::Swap:
    swap_positions(out.perm, i, j);
    break;
  case MutationKind::ReverseSegment:
    reverse_segment(out.perm, i, j);
    break;
  case MutationKind::ShuffleSegment:
    shuffle_segment(out.perm, i, j, rng);
    break;
  }
  return out;
}

Chromosome mutate(const Chromosome& c, const GAParams& ga, Rng& rng) {
  const auto kind = static_cast<MutationKind>(sample_kind(ga.mutation_weights, rng));
  return mutate(c, kind, rng);
}

Offspring ordered_crossover(const Chromosome& a,
                            const Chromosome& b,
                            std::size_t first,
                            std::size_t last) {
  if (a.perm.empty()) {
    return {a, b};
  }
  return {ox_child(a, b, first, last), ox_child(b, a, first, last)};
}

Offspring partially_matched_crossover(const Chromosome& a,
                                      const Chromosome& b,
                                      std::size_t first,
                                      std::size_t last) {
  return {pmx_child(a, b, first, last), pmx_child(b, a, first, last)};
}

Offspring uniform_partially_matched_crossover(const Chromosome& a,
                                              const Chromosome& b,
                                              double prob,
                                              Rng& rng) {
  Offspring out{a, b};
  auto& first = out.first.perm;
  auto& second = out.second.perm;
  auto pos1 = positions(first);
  auto pos2 = positions(second);
  std::uniform_real_distribution<double> coin(0, 1);
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (!(coin(rng) < prob)) {
      continue;
    }
    const auto x = first[i];
    const auto y = second[i];
    // Each child swaps x and y into place, keeping the bijection.
    std::swap(first[i], first[pos1[y]]);
    std::swap(pos1[x], pos1[y]);
    std::swap(second[i], second[pos2[x]]);
    std::swap(pos2[x], pos2[y]);
  }
  return out;
}

Offspring crossover(const Chromosome& a,
                    const Chromosome& b,
                    CrossoverKind kind,
                    const GAParams& ga,
                    Rng& rng) {
  const auto size = a.perm.size();
  if (size < 2) {
    return {a, b};
  }
  if (kind == CrossoverKind::UPMX) {
    return uniform_partially_matched_crossover(a, b, ga.upmx_prob, rng);
  }
  auto [first, last] = distinct_pair(size + 1, rng);
  if (kind == CrossoverKind::OX) {
    return ordered_crossover(a, b, first, last);
  }
  return partially_matched_crossover(a, b, first, last);
}

Offspring crossover(const Chromosome& a, const Chromosome& b, const GAParams& ga, Rng& rng) {
  const auto kind = static_cast<CrossoverKind>(sample_kind(ga.crossover_weights, rng));
  return crossover(a, b, kind, ga, rng);
}

double default_tour_factor(const Instance& instance) {
  return static_cast<double>(instance.params.max_day) *
           static_cast<double>(instance.total_demand()) +
         1.0;
}

namespace {

double fitness_of(const std::vector<PlannedTour>& tours,
                  const Instance& instance,
                  double tour_factor) {
  Minutes travel = 0;
  for (const auto& tour : tours) {
    travel += travel_time(tour.stops, instance);
  }
  return tour_factor * static_cast<double>(tours.size()) + static_cast<double>(travel);
}

struct Individual {
  Chromosome chromosome;
  double fitness = 0;
};

Chromosome random_chromosome(std::size_t size, Rng& rng) {
  Chromosome c{std::vector<ExamId>(size)};
  std::iota(c.perm.begin(), c.perm.end(), ExamId{0});
  std::shuffle(c.perm.begin(), c.perm.end(), rng);
  return c;
}

const Individual& tournament(const std::vector<Individual>& population,
                             Count size,
                             Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
  auto best = pick(rng);
  for (Count k = 1; k < size; ++k) {
    const auto other = pick(rng);
    if (population[other].fitness < population[best].fitness ||
        (population[other].fitness == population[best].fitness && other < best)) {
      best = other;
    }
  }
  return population[best];
}

} // namespace

double fitness(const Chromosome& c,
               const ExamIndex& idx,
               const Instance& instance,
               const GAParams& ga) {
  const auto factor = ga.tour_factor.value_or(default_tour_factor(instance));
  return fitness_of(greedy_split(c, idx, instance), instance, factor);
}

GaReport solve_ga(const Instance& instance, const GAParams& ga) {
  instance.check();
  ga.check();
  require_feasible(instance);

  using Clock = std::chrono::steady_clock;
  const auto deadline =
    Clock::now() + std::chrono::duration_cast<Clock::duration>(
                     std::chrono::duration<double>(ga.time_limit));

  const auto idx = build_exam_index(instance);
  const auto mu = static_cast<std::size_t>(ga.mu);
  const auto lambda = static_cast<std::size_t>(ga.lambda);
  auto by_fitness = [](const Individual& a, const Individual& b) {
    return a.fitness < b.fitness;
  };

  std::vector<Individual> population(mu);
  parallel_for(mu, ga.threads, [&](std::size_t i) {
    Rng rng(derive_seed(ga.seed, 0, i));
    population[i].chromosome = random_chromosome(idx.size(), rng);
    population[i].fitness = fitness(population[i].chromosome, idx, instance, ga);
  });
  std::stable_sort(population.begin(), population.end(), by_fitness);

  GaReport report;
  report.history.push_back(population.front().fitness);

  std::vector<Individual> offspring(lambda);
  for (Count generation = 1;; ++generation) {
    if (ga.generations ? generation > *ga.generations : Clock::now() >= deadline) {
      break;
    }
    parallel_for(lambda, ga.threads, [&](std::size_t k) {
      Rng rng(derive_seed(ga.seed, static_cast<std::uint64_t>(generation), k));
      std::uniform_real_distribution<double> coin(0, 1);
      Chromosome child;
      if (coin(rng) < ga.cx_prob) {
        const auto& a = tournament(population, ga.tournament_size, rng);
        const auto& b = tournament(population, ga.tournament_size, rng);
        child = crossover(a.chromosome, b.chromosome, ga, rng).first;
      } else {
        child = tournament(population, ga.tournament_size, rng).chromosome;
      }
      if (coin(rng) < ga.mut_prob) {
        child = mutate(child, ga, rng);
      }
      offspring[k].fitness = fitness(child, idx, instance, ga);
      offspring[k].chromosome = std::move(child);
    });

    population.insert(population.end(),
                      std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
    std::stable_sort(population.begin(), population.end(), by_fitness);
    population.resize(mu);
    report.history.push_back(population.front().fitness);
    report.generations = generation;
  }

  report.best_chromosome = population.front().chromosome;
  report.best_fitness = population.front().fitness;
  report.best = make_schedule(greedy_split(report.best_chromosome, idx, instance),
                              instance.params);
  return report;
}

} // namespace vanplan
