#pragma once

#include <string>
#include <vector>

#include "splitsd/linalg.hpp"

namespace splitsd {

enum class NeuronTag { Rbf1d, SoftplusUnit, KernelParticle };

// Neuron family plus its hyperparameters.
//   Rbf1d:          sigma(theta, x) = theta3 * exp(-(theta1*x + theta2)^2 / 2),
//                   theta in R^3, scalar input.
//   SoftplusUnit:   sigma(theta, x) = c * softplus_beta(w.x + b) with
//                   theta = (w_1..w_k, b, c); beta sharpens towards a hinge.
//   KernelParticle: sigma(theta, x) = rbf kernel k(theta, x) with bandwidth h;
//                   x is another point in particle space.
struct NeuronKind {
    NeuronTag tag = NeuronTag::Rbf1d;
    double softplus_beta = 10.0;
    double kernel_bandwidth = 1.0;
};

std::string to_string(NeuronTag tag);

// parameter dimension implied by the kind and the input dimension
int neuron_dim(const NeuronKind& kind, int input_dim);

double neuron_eval(const NeuronKind& kind, const Vec& theta, const Vec& x);
Vec neuron_grad(const NeuronKind& kind, const Vec& theta, const Vec& x);
SymMat neuron_hess(const NeuronKind& kind, const Vec& theta, const Vec& x);

// rbf kernel k(a, b) = exp(-||a - b||^2 / (2 h^2)) and its derivatives in the
// first argument
double kernel_rbf(const Vec& a, const Vec& b, double h);
Vec kernel_rbf_grad1(const Vec& a, const Vec& b, double h);
SymMat kernel_rbf_hess11(const Vec& a, const Vec& b, double h);

// Weighted sum of neurons of one kind. Weights stay positive; splits conserve
// their total, growth methods manage them per their own rules.
struct Network {
    NeuronKind kind;
    std::vector<Vec> neurons;
    std::vector<double> weights;

    int size() const { return static_cast<int>(neurons.size()); }
    int dim() const { return neurons.empty() ? 0 : static_cast<int>(neurons.front().size()); }
    double total_weight() const;
    void validate() const;  // throws std::invalid_argument on broken invariants
};

double forward(const Network& net, const Vec& x);

struct Dataset {
    std::vector<Vec> inputs;
    std::vector<double> targets;  // empty when the inputs are a reference particle set

    int size() const { return static_cast<int>(inputs.size()); }
    void validate() const;
};

}  // namespace splitsd
