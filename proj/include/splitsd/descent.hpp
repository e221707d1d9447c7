#pragma once

#include <string>
#include <vector>

#include "splitsd/loss.hpp"
#include "splitsd/rng.hpp"

namespace splitsd {

enum class OptimMethod { Sgd, SgdMomentum, Adagrad };

struct OptimSpec {
    OptimMethod method = OptimMethod::Sgd;
    double learning_rate = 0.05;
    double momentum = 0.9;   // SgdMomentum only
    int batch_size = 0;      // 0 = full batch
    long max_iters = 2000;

    void validate() const;
};

// Convergence = the full-batch gradient norm stays below grad_norm_tol for
// `window` consecutive checks, checked every check_every iterations.
struct ConvergenceSpec {
    double grad_norm_tol = 1e-4;
    int window = 5;
    long check_every = 50;
    long min_iters = 0;

    void validate() const;
};

struct TracePoint {
    long iter = 0;
    double loss_value = 0.0;
    double grad_norm = 0.0;
};

enum class DescentStatus { Converged, MaxIters, Diverged };

struct DescentResult {
    Network net;
    std::vector<TracePoint> trace;
    DescentStatus status = DescentStatus::MaxIters;
    std::string message;
    long iters_run = 0;
};

// Per-coordinate optimizer state (momentum velocity / adagrad accumulators),
// exposed so the update rule can be tested on plain quadratics.
class OptimizerState {
public:
    OptimizerState(const OptimSpec& spec, int n_neurons, int dim);
    void step(std::vector<Vec>& params, const std::vector<Vec>& grads);

private:
    OptimSpec spec_;
    std::vector<Vec> buf_;  // velocity or squared-gradient accumulator
};

// Parametric descent phase on a copy of the network. Minibatches (when
// batch_size > 0) are drawn from rng; the convergence check always uses the
// full-batch gradient. Divergence returns the last finite checkpoint state
// with status Diverged rather than throwing, so partial logs survive.
DescentResult descend(const Network& net, const Dataset& data, const LossSpec& spec,
                      const OptimSpec& optim, const ConvergenceSpec& conv, Rng* rng = nullptr);

// Same loop, but only neuron `only_index` moves; all others stay frozen.
DescentResult descend_neuron(const Network& net, const Dataset& data, const LossSpec& spec,
                             const OptimSpec& optim, const ConvergenceSpec& conv, int only_index,
                             Rng* rng = nullptr);

// Moves every neuron one step of length eps along its normalized functional
// gradient. First-order transport: the loss drops by about
// eps * sum_ell w_ell ||G_ell||.
Network normalized_particle_step(const Network& net, const std::vector<Vec>& functional_grads,
                                 double eps);

}  // namespace splitsd
