#include "splitsd/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace splitsd {

Vec InitSpec::draw(int dim, Rng& rng) const {
    if (kind == Kind::GaussianIso) return rng.normal_vec(dim, stddev);
    if (box_lo.size() != static_cast<std::size_t>(dim) || box_hi.size() != box_lo.size())
        throw std::invalid_argument("init spec: box bounds do not match dimension");
    Vec v(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = rng.uniform(box_lo[static_cast<std::size_t>(i)], box_hi[static_cast<std::size_t>(i)]);
    return v;
}

std::pair<Network, SplitEvent> random_split(const Network& net, Rng& rng, double eps) {
    net.validate();
    if (net.size() == 0) throw std::invalid_argument("random_split: empty network");
    const int index = static_cast<int>(rng.integer(static_cast<std::uint64_t>(net.size())));
    const Vec dir = rng.unit_sphere(net.dim());
    SplitEvent ev;
    Network out = split_neuron(net, index, dir, eps, &ev);
    ev.lambda_min = std::nan("");  // no eigen computation on this path
    ev.epsilon = eps;
    return {std::move(out), ev};
}

namespace {

Network append_neuron(const Network& net, Vec theta) {
    Network out = net;
    out.neurons.push_back(std::move(theta));
    if (net.kind.tag == NeuronTag::KernelParticle) {
        const double w = 1.0 / static_cast<double>(out.neurons.size());
        out.weights.assign(out.neurons.size(), w);
    } else {
        out.weights.push_back(1.0);
    }
    return out;
}

}  // namespace

Network new_initialization(const Network& net, Rng& rng, const InitSpec& init) {
    net.validate();
    return append_neuron(net, init.draw(net.dim(), rng));
}

Network gradient_boost_step(const Network& net, const Dataset& data, const LossSpec& spec,
                            const OptimSpec& inner_optim, const ConvergenceSpec& conv,
                            const InitSpec& init, Rng& rng, int restarts) {
    net.validate();
    if (restarts < 1) throw std::invalid_argument("gradient_boost_step: restarts must be >= 1");
    const int input_dim = static_cast<int>(spec.tag == LossTag::Mmd ? spec.reference.front().size()
                                                                    : data.inputs.front().size());
    const int dim = net.size() > 0 ? net.dim() : neuron_dim(net.kind, input_dim);

    OptimSpec per_restart = inner_optim;
    per_restart.max_iters = std::max<long>(1, inner_optim.max_iters / restarts);

    Network best;
    double best_loss = 0.0;
    bool have_best = false;
    for (int r = 0; r < restarts; ++r) {
        Network candidate = append_neuron(net, init.draw(dim, rng));
        const int new_index = candidate.size() - 1;
        DescentResult res = descend_neuron(candidate, data, spec, per_restart, conv, new_index);
        if (res.status == DescentStatus::Diverged)
            throw std::runtime_error("gradient_boost_step: inner fit diverged: " + res.message);
        const double l = res.trace.back().loss_value;
        if (!have_best || l < best_loss) {
            best = std::move(res.net);
            best_loss = l;
            have_best = true;
        }
    }
    return best;
}

}  // namespace splitsd
