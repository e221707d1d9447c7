#include "splitsd/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace splitsd {

void SplitPolicy::validate() const {
    if (max_splits < 0) throw std::invalid_argument("split policy: max_splits must be >= 0");
    if (threshold > 0.0) throw std::invalid_argument("split policy: threshold must be <= 0");
    if (!(step_size > 0.0)) throw std::invalid_argument("split policy: step_size must be > 0");
}

namespace {

void check_index(const Network& net, int ell) {
    if (ell < 0 || ell >= net.size())
        throw std::invalid_argument("splitting: neuron index " + std::to_string(ell) +
                                    " out of range [0, " + std::to_string(net.size()) + ")");
}

// Accumulates the splitting matrix of a single neuron. Per-neuron sums are
// kept independent so results do not depend on which other neurons are
// being processed.
SymMat matrix_for_neuron(const Network& net, const Dataset& data, const LossSpec& spec, int ell) {
    const Vec& th = net.neurons[static_cast<std::size_t>(ell)];
    const int d = net.dim();
    SymMat s(d);

    if (spec.tag == LossTag::SquaredError) {
        for (int i = 0; i < data.size(); ++i) {
            const Vec& x = data.inputs[static_cast<std::size_t>(i)];
            const double phi1 =
                2.0 * (forward(net, x) - data.targets[static_cast<std::size_t>(i)]);
            s.add_scaled(neuron_hess(net.kind, th, x), phi1);
        }
        s.scale(1.0 / static_cast<double>(data.size()));
        return s;
    }

    // Mmd: S = 2 [ sum_j w_j k''(theta, theta_j) - mean_m k''(theta, ref_m) ]
    const double h = net.kind.kernel_bandwidth;
    for (int j = 0; j < net.size(); ++j)
        s.add_scaled(kernel_rbf_hess11(th, net.neurons[static_cast<std::size_t>(j)], h),
                     2.0 * net.weights[static_cast<std::size_t>(j)]);
    const double inv_m = 1.0 / static_cast<double>(spec.reference.size());
    for (const auto& p : spec.reference)
        s.add_scaled(kernel_rbf_hess11(th, p, h), -2.0 * inv_m);
    return s;
}

SplitCandidate candidate_for_neuron(const Network& net, const Dataset& data, const LossSpec& spec,
                                    int ell) {
    SplitCandidate c;
    c.neuron_index = ell;
    c.matrix = matrix_for_neuron(net, data, spec, ell);
    const EigenPair ep = min_eigenpair(c.matrix);
    c.splitting_index = ep.value;
    c.splitting_gradient = ep.vector;
    c.parent_params = net.neurons[static_cast<std::size_t>(ell)];
    return c;
}

}  // namespace

SymMat splitting_matrix(const Network& net, const Dataset& data, const LossSpec& spec, int ell) {
    net.validate();
    data.validate();
    spec.validate();
    check_index(net, ell);
    return matrix_for_neuron(net, data, spec, ell);
}

std::vector<SplitCandidate> splitting_candidates(const Network& net, const Dataset& data,
                                                 const LossSpec& spec) {
    net.validate();
    data.validate();
    spec.validate();
    std::vector<SplitCandidate> out;
    out.reserve(static_cast<std::size_t>(net.size()));
    for (int ell = 0; ell < net.size(); ++ell)
        out.push_back(candidate_for_neuron(net, data, spec, ell));
    return out;
}

std::vector<SplitCandidate> select_splits(const std::vector<SplitCandidate>& candidates,
                                          const SplitPolicy& policy) {
    policy.validate();
    std::vector<SplitCandidate> picked;
    for (const auto& c : candidates)
        if (c.splitting_index <= policy.threshold) picked.push_back(c);
    std::stable_sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) {
        if (a.splitting_index != b.splitting_index) return a.splitting_index < b.splitting_index;
        return a.neuron_index < b.neuron_index;
    });
    if (static_cast<int>(picked.size()) > policy.max_splits)
        picked.resize(static_cast<std::size_t>(policy.max_splits));
    return picked;
}

Network split_neuron(const Network& net, int index, const Vec& direction, double eps,
                     SplitEvent* event) {
    check_index(net, index);
    if (direction.size() != static_cast<std::size_t>(net.dim()))
        throw std::invalid_argument("split: direction dimension mismatch");

    Network out = net;
    const Vec& parent = net.neurons[static_cast<std::size_t>(index)];
    const double half = 0.5 * net.weights[static_cast<std::size_t>(index)];

    Vec plus = parent, minus = parent;
    axpy(eps, direction, plus);
    axpy(-eps, direction, minus);

    out.neurons[static_cast<std::size_t>(index)] = plus;
    out.weights[static_cast<std::size_t>(index)] = half;
    out.neurons.push_back(minus);
    out.weights.push_back(half);

    if (event) {
        event->parent_index = index;
        event->epsilon = eps;
        event->child_a = index;
        event->child_b = out.size() - 1;
    }
    return out;
}

std::pair<Network, SplitEvent> apply_split(const Network& net, const SplitCandidate& candidate,
                                           double eps) {
    check_index(net, candidate.neuron_index);
    if (net.neurons[static_cast<std::size_t>(candidate.neuron_index)] != candidate.parent_params)
        throw std::invalid_argument(
            "apply_split: stale candidate, neuron " + std::to_string(candidate.neuron_index) +
            " changed since the candidate was computed");
    const double nrm = norm2(candidate.splitting_gradient);
    if (std::fabs(nrm - 1.0) > 1e-9)
        throw std::invalid_argument("apply_split: splitting gradient is not unit norm");

    SplitEvent ev;
    Network out = split_neuron(net, candidate.neuron_index, candidate.splitting_gradient, eps, &ev);
    ev.lambda_min = candidate.splitting_index;
    return {std::move(out), ev};
}

std::pair<Network, std::vector<SplitEvent>> split_round(const Network& net, const Dataset& data,
                                                        const LossSpec& spec,
                                                        const SplitPolicy& policy) {
    const auto selected = select_splits(splitting_candidates(net, data, spec), policy);
    Network cur = net;
    std::vector<SplitEvent> events;
    events.reserve(selected.size());
    for (const auto& cand : selected) {
        auto [next, ev] = apply_split(cur, cand, policy.step_size);
        cur = std::move(next);
        events.push_back(ev);
    }
    return {std::move(cur), std::move(events)};
}

double predicted_loss_change(double lambda_min, double weight, double eps) {
    return 0.5 * eps * eps * weight * lambda_min;
}

}  // namespace splitsd
