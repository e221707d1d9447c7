#pragma once

#include <utility>

#include "splitsd/descent.hpp"
#include "splitsd/splitting.hpp"

namespace splitsd {

// How fresh neuron parameters are drawn.
struct InitSpec {
    enum class Kind { GaussianIso, UniformBox };
    Kind kind = Kind::GaussianIso;
    double stddev = 1.0;  // GaussianIso
    Vec box_lo, box_hi;   // UniformBox, per coordinate

    Vec draw(int dim, Rng& rng) const;
};

// Split a uniformly chosen neuron along a uniformly random unit direction,
// with the usual weight-halving bookkeeping.
std::pair<Network, SplitEvent> random_split(const Network& net, Rng& rng, double eps);

// Append one freshly initialized neuron. Kernel particle systems re-divide
// all weights uniformly to 1/(n+1); additive networks append with weight 1.
Network new_initialization(const Network& net, Rng& rng, const InitSpec& init);

// Greedy growth: append one neuron and optimize it alone (previous neurons
// frozen bitwise) from `restarts` random starts, keeping the best final
// loss; ties break toward the earlier restart. Kernel particle systems get
// uniform weights before the inner fit. The per-restart iteration budget is
// inner_optim.max_iters / restarts, so one step costs one phase budget.
Network gradient_boost_step(const Network& net, const Dataset& data, const LossSpec& spec,
                            const OptimSpec& inner_optim, const ConvergenceSpec& conv,
                            const InitSpec& init, Rng& rng, int restarts = 5);

}  // namespace splitsd
