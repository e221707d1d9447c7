#pragma once

#include <utility>
#include <vector>

#include "splitsd/loss.hpp"

namespace splitsd {

// Decision record for one neuron: its splitting matrix, the minimum
// eigenvalue (splitting index) and unit eigenvector (splitting gradient).
// parent_params snapshots the neuron so a candidate applied to a network
// that changed in the meantime is rejected instead of silently misapplied.
struct SplitCandidate {
    int neuron_index = -1;
    double splitting_index = 0.0;
    Vec splitting_gradient;
    SymMat matrix;
    Vec parent_params;
};

struct SplitPolicy {
    int max_splits = 1;         // per round
    double threshold = -1e-6;   // split only when splitting_index <= threshold (<= 0)
    double step_size = 1e-2;    // offspring displacement epsilon

    void validate() const;
};

struct SplitEvent {
    int round = 0;
    int parent_index = -1;
    double lambda_min = 0.0;
    double epsilon = 0.0;
    int child_a = -1;  // offspring in the parent's slot (theta + eps v)
    int child_b = -1;  // appended offspring (theta - eps v)
};

// Splitting matrix of neuron ell: the empirical mean of phi' times the
// neuron's parameter Hessian. No weight factor and no terms from other
// neurons; each neuron's matrix is computable in isolation.
SymMat splitting_matrix(const Network& net, const Dataset& data, const LossSpec& spec, int ell);

// One candidate per neuron. Candidate ell is bitwise identical to what
// splitting_matrix(net, data, spec, ell) + min_eigenpair would produce.
std::vector<SplitCandidate> splitting_candidates(const Network& net, const Dataset& data,
                                                 const LossSpec& spec);

// The up-to-max_splits candidates with the smallest splitting index, kept
// only if index <= threshold; ordered by (index, neuron_index) ascending.
std::vector<SplitCandidate> select_splits(const std::vector<SplitCandidate>& candidates,
                                          const SplitPolicy& policy);

// Replace neuron `index` with two offsprings at theta +- eps * direction,
// each carrying half the parent's weight. The + child takes the parent's
// slot, the - child is appended; all other neurons are untouched.
Network split_neuron(const Network& net, int index, const Vec& direction, double eps,
                     SplitEvent* event = nullptr);

std::pair<Network, SplitEvent> apply_split(const Network& net, const SplitCandidate& candidate,
                                           double eps);

// One full splitting round: candidates, selection, sequential application
// (most negative index first). Returns the grown network and the events.
std::pair<Network, std::vector<SplitEvent>> split_round(const Network& net, const Dataset& data,
                                                        const LossSpec& spec,
                                                        const SplitPolicy& policy);

// Second-order prediction of the loss change from splitting a neuron of
// weight w along the minimum eigenvector: eps^2 * w * lambda_min / 2.
double predicted_loss_change(double lambda_min, double weight, double eps);

}  // namespace splitsd
