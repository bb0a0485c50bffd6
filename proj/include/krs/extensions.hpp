#pragma once

#include <vector>

#include "krs/core.hpp"
#include "krs/killrestart.hpp"

namespace krs {

/// b-scaling with online release dates on one machine. A job's rank starts
/// at -inf on release; fresh jobs are advanced jointly in closed form until
/// their rank reaches the minimum rank of older waiting jobs or a fresh job
/// would complete. Probes are never interrupted; releases arriving mid-probe
/// take effect at the probe's end; idle periods jump to the next release.
BScaleResult simulate_bscaling_release(const Instance& instance, double b);

/// b-scaling on m identical machines (unit weights, trivial releases): the
/// single-machine probe sequence is list-scheduled greedily; once at most m
/// jobs remain, running probes are extended to infinite budget.
BScaleResult simulate_bscaling_parallel(const Instance& instance, int m,
                                        double b);

/// Instance transforms used to relate the strategy's cost to preemptive
/// baselines: `rounded` has Smith ratios rounded up to integer powers of b
/// (release dates shifted to probe ends), `inflated` additionally absorbs
/// all failed probing time into the sizes.
struct TransformedPair {
  Instance original;
  Instance rounded;
  Instance inflated;
  std::vector<int> ranks;  // q_j with p'_j = w_j b^(q_j)
};

/// Rounds Smith ratios up to integer powers of b. On a single machine with
/// release dates, also shifts each release to the end of the corresponding
/// probe in the replayed schedule (or keeps it, at idle points). With m > 1
/// (unit weights, trivial releases) only the sizes are rounded.
TransformedPair transform_round_smith(const Instance& instance, double b);

enum class InflateMode { single_machine, parallel };

/// Size inflation p'' of a rounded instance. single_machine: p'' = b/(b-1) p'.
/// parallel: p'' = b^(q+1)/(b-1) up to the largest preempted rank, capped
/// plus p' above it; the non-preempted set is determined by simulating the
/// rounded instance.
Instance inflate(const Instance& rounded, double b, InflateMode mode);

}  // namespace krs
