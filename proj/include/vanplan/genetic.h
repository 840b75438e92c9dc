#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vanplan/model.h"

namespace vanplan {

using ExamId = std::uint32_t;

// Every examination becomes its own id; township i owns demand[i]
// consecutive ids.
struct ExamIndex {
  std::vector<Index> exam_to_township;

  std::size_t size() const {
    return exam_to_township.size();
  }
  Index township(ExamId id) const {
    return exam_to_township[id];
  }
};

// Visiting order of all examinations. Decoded into tours by greedy_split.
struct Chromosome {
  std::vector<ExamId> perm;

  bool operator==(const Chromosome&) const = default;
};

enum class MutationKind { Swap, ReverseSegment, ShuffleSegment };
enum class CrossoverKind { OX, PMX, UPMX };

struct GAParams {
  Count mu = 150;
  Count lambda = 300;
  double cx_prob = 0.6;
  double mut_prob = 0.2;
  // Indexed by MutationKind / CrossoverKind.
  std::array<double, 3> mutation_weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::array<double, 3> crossover_weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  // Per-position exchange probability of UPMX.
  double upmx_prob = 0.5;
  Count tournament_size = 3;
  // Defaults to max_day * total examinations + 1.
  std::optional<double> tour_factor;
  Seed seed = 1;
  double time_limit = 60.0;
  // Test mode: a fixed number of generations instead of the wall clock.
  std::optional<Count> generations;
  unsigned threads = 0;

  void check() const;
};

ExamIndex build_exam_index(const Instance& instance);

// Validates that `c` is a bijection over 0..size-1.
bool is_permutation(std::span<const ExamId> perm, std::size_t size);

// Scans the permutation left to right and closes the current tour as soon
// as the next examination would push it past max_day. Consecutive
// examinations in the same township share one stop. Throws
// InfeasibleInstance when a lone examination cannot fit in one day.
std::vector<PlannedTour> greedy_split(const Chromosome& c,
                                      const ExamIndex& idx,
                                      const Instance& instance);

void swap_positions(std::vector<ExamId>& perm, std::size_t i, std::size_t j);
// Both bounds inclusive.
void reverse_segment(std::vector<ExamId>& perm, std::size_t first, std::size_t last);
void shuffle_segment(std::vector<ExamId>& perm,
                     std::size_t first,
                     std::size_t last,
                     Rng& rng);

Chromosome mutate(const Chromosome& c, const GAParams& ga, Rng& rng);
Chromosome mutate(const Chromosome& c, MutationKind kind, Rng& rng);

using Offspring = std::pair<Chromosome, Chromosome>;

// Segment crossovers take the half-open cut [first, last).
// OX: each child keeps its own parent's segment and takes the remaining
// values in the other parent's order, starting after the cut.
Offspring ordered_crossover(const Chromosome& a,
                            const Chromosome& b,
                            std::size_t first,
                            std::size_t last);
// PMX: the first child is `a` with `b`'s segment, conflicts resolved
// through the segment mapping; the second child mirrors it.
Offspring partially_matched_crossover(const Chromosome& a,
                                      const Chromosome& b,
                                      std::size_t first,
                                      std::size_t last);
// UPMX: every position, with probability `prob`, exchanges the two
// parents' values inside each child.
Offspring uniform_partially_matched_crossover(const Chromosome& a,
                                              const Chromosome& b,
                                              double prob,
                                              Rng& rng);

Offspring crossover(const Chromosome& a, const Chromosome& b, const GAParams& ga, Rng& rng);
Offspring crossover(const Chromosome& a,
                    const Chromosome& b,
                    CrossoverKind kind,
                    const GAParams& ga,
                    Rng& rng);

double default_tour_factor(const Instance& instance);

// tour_factor * |tours| + total travel minutes. Lower is better.
double fitness(const Chromosome& c,
               const ExamIndex& idx,
               const Instance& instance,
               const GAParams& ga);

struct GaReport {
  Schedule best;
  Chromosome best_chromosome;
  double best_fitness = 0;
  // Population-best fitness after initialization and after every generation.
  std::vector<double> history;
  Count generations = 0;
};

// mu+lambda evolution: lambda offspring per generation, the best mu of
// parents and offspring survive.
GaReport solve_ga(const Instance& instance, const GAParams& ga);

inline Schedule run_ga(const Instance& instance, const GAParams& ga) {
  return solve_ga(instance, ga).best;
}

} // namespace vanplan
