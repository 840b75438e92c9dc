#pragma once

#include <functional>
#include <vector>

#include "vanplan/model.h"

namespace vanplan {

struct SAParams {
  Count runs = 8;
  // Unitless; multiplied by the mean matrix entry in the acceptance test.
  double initial_temperature = 1.0;
  double cooling_factor = 0.995;
  Count iterations_per_run = 200000;
  Seed seed = 1;
  // 0 = hardware concurrency.
  unsigned threads = 0;

  void check() const;
};

// Partition of the served townships into feasible depot-anchored routes.
struct MtspSolution {
  std::vector<BasicTour> tours;
};

// Receives the search cost (travel plus infeasibility penalty) after every
// accepted move.
using AcceptObserver = std::function<void(Minutes)>;

// One simulated-annealing run over the townships with positive demand.
// Moves relocate a township (possibly into a fresh route), swap townships
// between routes, or reverse a segment inside one route. Routes violating
// the one-slot-per-stop budget are penalized during search; the best
// penalty-free state is returned. Throws InfeasibleInstance when some
// served township cannot form a feasible singleton route.
MtspSolution sa_solve_mtsp(const Instance& instance,
                           const SAParams& sa,
                           Seed run_seed,
                           const AcceptObserver& on_accept = {});

// Union of `runs` independent SA runs plus every served singleton route,
// deduplicated on the exact stop sequence and sorted by (length, stops).
std::vector<BasicTour> build_pool(const Instance& instance,
                                  const SAParams& sa);

} // namespace vanplan
