#include "splitsd/descent.hpp"

#include <cmath>
#include <stdexcept>

namespace splitsd {

void OptimSpec::validate() const {
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("optim: learning rate must be >= 0");
    if (momentum < 0.0 || momentum >= 1.0)
        throw std::invalid_argument("optim: momentum must be in [0, 1)");
    if (batch_size < 0) throw std::invalid_argument("optim: batch size must be >= 0");
    if (max_iters < 0) throw std::invalid_argument("optim: max_iters must be >= 0");
}

void ConvergenceSpec::validate() const {
    if (!(grad_norm_tol > 0.0)) throw std::invalid_argument("convergence: tolerance must be > 0");
    if (window < 1) throw std::invalid_argument("convergence: window must be >= 1");
    if (check_every < 1) throw std::invalid_argument("convergence: check_every must be >= 1");
}

OptimizerState::OptimizerState(const OptimSpec& spec, int n_neurons, int dim) : spec_(spec) {
    if (spec_.method != OptimMethod::Sgd)
        buf_.assign(static_cast<std::size_t>(n_neurons), Vec(static_cast<std::size_t>(dim), 0.0));
}

void OptimizerState::step(std::vector<Vec>& params, const std::vector<Vec>& grads) {
    const double lr = spec_.learning_rate;
    switch (spec_.method) {
        case OptimMethod::Sgd:
            for (std::size_t l = 0; l < params.size(); ++l)
                axpy(-lr, grads[l], params[l]);
            break;
        case OptimMethod::SgdMomentum:
            for (std::size_t l = 0; l < params.size(); ++l)
                for (std::size_t i = 0; i < params[l].size(); ++i) {
                    buf_[l][i] = spec_.momentum * buf_[l][i] + grads[l][i];
                    params[l][i] -= lr * buf_[l][i];
                }
            break;
        case OptimMethod::Adagrad:
            for (std::size_t l = 0; l < params.size(); ++l)
                for (std::size_t i = 0; i < params[l].size(); ++i) {
                    buf_[l][i] += grads[l][i] * grads[l][i];
                    params[l][i] -= lr * grads[l][i] / (std::sqrt(buf_[l][i]) + 1e-10);
                }
            break;
    }
}

namespace {

DescentResult run_descent(const Network& start, const Dataset& data, const LossSpec& spec,
                          const OptimSpec& optim, const ConvergenceSpec& conv, int only_index,
                          Rng* rng) {
    optim.validate();
    conv.validate();
    start.validate();

    DescentResult res;
    res.net = start;
    Network& net = res.net;
    Network last_finite = start;

    // within one call the reference set and bandwidth are fixed
    const bool is_mmd = (spec.tag == LossTag::Mmd);
    const double ref_self = is_mmd ? mmd_ref_self_term(spec, start.kind.kernel_bandwidth) : 0.0;
    const double* ref_self_ptr = is_mmd ? &ref_self : nullptr;

    OptimizerState state(optim, net.size(), net.dim());
    const int pool = is_mmd ? static_cast<int>(spec.reference.size()) : data.size();
    std::vector<int> batch;
    int consecutive = 0;
    long iter = 0;

    for (; iter < optim.max_iters; ++iter) {
        if (iter % conv.check_every == 0 && iter >= conv.min_iters) {
            auto fg = loss_and_param_grad(net, data, spec, nullptr, ref_self_ptr);
            const double gn = grad_norm(fg.grads);
            const double lv = fg.value;
            res.trace.push_back({iter, lv, gn});
            if (!std::isfinite(lv) || !std::isfinite(gn)) {
                res.status = DescentStatus::Diverged;
                res.message = "diverged at iter " + std::to_string(iter) +
                              "; last finite checkpoint: iter " +
                              std::to_string(res.trace.size() >= 2
                                                 ? res.trace[res.trace.size() - 2].iter
                                                 : 0) +
                              " loss " +
                              std::to_string(res.trace.size() >= 2
                                                 ? res.trace[res.trace.size() - 2].loss_value
                                                 : 0.0);
                res.net = last_finite;
                res.iters_run = iter;
                return res;
            }
            last_finite = net;
            if (gn <= conv.grad_norm_tol) {
                if (++consecutive >= conv.window) {
                    res.status = DescentStatus::Converged;
                    res.iters_run = iter;
                    return res;
                }
            } else {
                consecutive = 0;
            }
        }

        std::vector<Vec> grads;
        if (optim.batch_size > 0 && optim.batch_size < pool && rng) {
            batch.resize(static_cast<std::size_t>(optim.batch_size));
            for (auto& b : batch)
                b = static_cast<int>(rng->integer(static_cast<std::uint64_t>(pool)));
            grads = loss_and_param_grad(net, data, spec, &batch, ref_self_ptr).grads;
        } else {
            grads = loss_and_param_grad(net, data, spec, nullptr, ref_self_ptr).grads;
        }

        if (only_index >= 0) {
            // freeze everything but one neuron
            for (int l = 0; l < net.size(); ++l)
                if (l != only_index)
                    for (auto& v : grads[static_cast<std::size_t>(l)]) v = 0.0;
        }
        state.step(net.neurons, grads);
    }

    auto fg = loss_and_param_grad(net, data, spec, nullptr, ref_self_ptr);
    res.trace.push_back({iter, fg.value, grad_norm(fg.grads)});
    res.status = DescentStatus::MaxIters;
    res.iters_run = iter;
    if (!std::isfinite(res.trace.back().loss_value)) {
        res.status = DescentStatus::Diverged;
        res.net = last_finite;
        res.message = "diverged by max_iters; returning last finite checkpoint";
    }
    return res;
}

}  // namespace

DescentResult descend(const Network& net, const Dataset& data, const LossSpec& spec,
                      const OptimSpec& optim, const ConvergenceSpec& conv, Rng* rng) {
    return run_descent(net, data, spec, optim, conv, -1, rng);
}

DescentResult descend_neuron(const Network& net, const Dataset& data, const LossSpec& spec,
                             const OptimSpec& optim, const ConvergenceSpec& conv, int only_index,
                             Rng* rng) {
    if (only_index < 0 || only_index >= net.size())
        throw std::invalid_argument("descend_neuron: index out of range");
    return run_descent(net, data, spec, optim, conv, only_index, rng);
}

Network normalized_particle_step(const Network& net, const std::vector<Vec>& functional_grads,
                                 double eps) {
    Network out = net;
    for (std::size_t l = 0; l < out.neurons.size(); ++l) {
        const double nrm = norm2(functional_grads[l]);
        if (nrm > 1e-300) axpy(-eps / nrm, functional_grads[l], out.neurons[l]);
    }
    return out;
}

}  // namespace splitsd
