#pragma once

#include <utility>
#include <vector>

#include "splitsd/model.hpp"

namespace splitsd {

enum class LossTag { SquaredError, Mmd };

// Loss functional over a network.
//   SquaredError: mean over the dataset of (target - forward)^2.
//   Mmd: squared maximum mean discrepancy between the weighted particle set
//        and the reference set, computed in closed kernel form (biased
//        V-statistic, self terms included). The kernel bandwidth comes from
//        the network's NeuronKind.
struct LossSpec {
    LossTag tag = LossTag::SquaredError;
    std::vector<Vec> reference;  // Mmd only: reference particles

    void validate() const;
};

double loss(const Network& net, const Dataset& data, const LossSpec& spec);

// First and second derivatives of the outer map at one evaluation point.
// SquaredError: (2 (f(x) - target), 2). Mmd: the target argument is ignored,
// x is a location in particle space, and the first component is the first
// variation of the loss under adding kernel mass at x (2 * witness(x)).
std::pair<double, double> outer_derivs(const Network& net, const Vec& x, double target,
                                       const LossSpec& spec);

// Per-neuron gradient of the loss functional at neuron ell, without the
// neuron's weight factor.
std::vector<Vec> functional_grads(const Network& net, const Dataset& data, const LossSpec& spec);

// Per-neuron parameter gradients d loss / d theta_ell = w_ell * G_ell.
std::vector<Vec> param_grad(const Network& net, const Dataset& data, const LossSpec& spec);

struct LossGrad {
    double value = 0.0;
    std::vector<Vec> grads;  // with weight factors, one per neuron
};

// Fused loss + gradients; the workhorse of the descent loop. A non-null
// subset restricts the empirical expectation: indices into the dataset for
// SquaredError, into the reference set for Mmd. mmd_ref_self, when given,
// supplies the constant reference-only kernel term so tight loops do not
// recompute the O(N^2) sum.
LossGrad loss_and_param_grad(const Network& net, const Dataset& data, const LossSpec& spec,
                             const std::vector<int>* subset = nullptr,
                             const double* mmd_ref_self = nullptr);

double grad_norm(const std::vector<Vec>& grads);

// Mmd pieces, exposed for reuse and cross-checking.
double mmd_ref_self_term(const LossSpec& spec, double bandwidth);  // mean_{m,m'} k(ref_m, ref_m')
double mmd_value(const Network& net, const LossSpec& spec);
double mmd_value_cached(const Network& net, const LossSpec& spec, double ref_self_term);
// witness(t) = sum_j w_j k(t, theta_j) - mean_m k(t, ref_m)
double mmd_witness(const Network& net, const LossSpec& spec, const Vec& t);

}  // namespace splitsd
