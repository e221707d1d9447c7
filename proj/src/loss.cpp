#include "splitsd/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace splitsd {

void LossSpec::validate() const {
    if (tag == LossTag::Mmd) {
        if (reference.empty()) throw std::invalid_argument("mmd loss: empty reference set");
        for (const auto& p : reference)
            if (!all_finite(p)) throw std::invalid_argument("mmd loss: non-finite reference particle");
    }
}

namespace {

void check_inputs(const Network& net, const Dataset& data, const LossSpec& spec) {
    net.validate();
    data.validate();
    spec.validate();
    if (spec.tag == LossTag::SquaredError && data.targets.empty())
        throw std::invalid_argument("squared error loss: dataset has no targets");
    if (spec.tag == LossTag::Mmd && net.kind.tag != NeuronTag::KernelParticle)
        throw std::invalid_argument("mmd loss: network must be a kernel particle system");
}

// out += coef * grad_theta sigma(theta, x); allocation-free inner loop
void accumulate_neuron_grad(const NeuronKind& kind, const Vec& th, const Vec& x, double coef,
                            Vec& out) {
    switch (kind.tag) {
        case NeuronTag::Rbf1d: {
            const double u = th[0] * x[0] + th[1];
            const double g = std::exp(-0.5 * u * u);
            out[0] += coef * (-th[2] * g * u * x[0]);
            out[1] += coef * (-th[2] * g * u);
            out[2] += coef * g;
            return;
        }
        case NeuronTag::SoftplusUnit:
        case NeuronTag::KernelParticle: {
            const Vec g = neuron_grad(kind, th, x);
            axpy(coef, g, out);
            return;
        }
    }
}

// out += coef * grad_1 k(a, b); allocation-free
void accumulate_kernel_grad(const Vec& a, const Vec& b, double h, double coef, Vec& out) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    const double c = coef * std::exp(-0.5 * s / (h * h)) / (h * h);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= c * (a[i] - b[i]);
}

}  // namespace

double mmd_ref_self_term(const LossSpec& spec, double bandwidth) {
    const auto& ref = spec.reference;
    const std::size_t n = ref.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += 1.0;  // k(p, p) = 1 on the diagonal
        for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * kernel_rbf(ref[i], ref[j], bandwidth);
    }
    return s / (static_cast<double>(n) * static_cast<double>(n));
}

double mmd_value_cached(const Network& net, const LossSpec& spec, double ref_self_term) {
    const double h = net.kind.kernel_bandwidth;
    const auto& ref = spec.reference;
    const double inv_n = 1.0 / static_cast<double>(ref.size());

    double self = 0.0;
    for (std::size_t i = 0; i < net.neurons.size(); ++i) {
        self += net.weights[i] * net.weights[i];
        for (std::size_t j = i + 1; j < net.neurons.size(); ++j)
            self += 2.0 * net.weights[i] * net.weights[j] *
                    kernel_rbf(net.neurons[i], net.neurons[j], h);
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < net.neurons.size(); ++i) {
        double s = 0.0;
        for (const auto& p : ref) s += kernel_rbf(net.neurons[i], p, h);
        cross += net.weights[i] * s * inv_n;
    }
    return self - 2.0 * cross + ref_self_term;
}

double mmd_value(const Network& net, const LossSpec& spec) {
    return mmd_value_cached(net, spec, mmd_ref_self_term(spec, net.kind.kernel_bandwidth));
}

double mmd_witness(const Network& net, const LossSpec& spec, const Vec& t) {
    const double h = net.kind.kernel_bandwidth;
    double s = 0.0;
    for (std::size_t j = 0; j < net.neurons.size(); ++j)
        s += net.weights[j] * kernel_rbf(t, net.neurons[j], h);
    double r = 0.0;
    for (const auto& p : spec.reference) r += kernel_rbf(t, p, h);
    return s - r / static_cast<double>(spec.reference.size());
}

double loss(const Network& net, const Dataset& data, const LossSpec& spec) {
    check_inputs(net, data, spec);
    if (spec.tag == LossTag::Mmd) return mmd_value(net, spec);

    double s = 0.0;
    for (int i = 0; i < data.size(); ++i) {
        const double r = data.targets[static_cast<std::size_t>(i)] -
                         forward(net, data.inputs[static_cast<std::size_t>(i)]);
        s += r * r;
    }
    return s / static_cast<double>(data.size());
}

std::pair<double, double> outer_derivs(const Network& net, const Vec& x, double target,
                                       const LossSpec& spec) {
    net.validate();
    spec.validate();
    if (spec.tag == LossTag::SquaredError)
        return {2.0 * (forward(net, x) - target), 2.0};
    return {2.0 * mmd_witness(net, spec, x), 2.0};
}

LossGrad loss_and_param_grad(const Network& net, const Dataset& data, const LossSpec& spec,
                             const std::vector<int>* subset, const double* mmd_ref_self) {
    check_inputs(net, data, spec);
    const int n = net.size();
    const int d = net.dim();
    LossGrad out;
    out.grads.assign(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(d), 0.0));

    if (spec.tag == LossTag::SquaredError) {
        const int m = subset ? static_cast<int>(subset->size()) : data.size();
        double total = 0.0;
        for (int s = 0; s < m; ++s) {
            const int i = subset ? (*subset)[static_cast<std::size_t>(s)] : s;
            const Vec& x = data.inputs[static_cast<std::size_t>(i)];
            const double f = forward(net, x);
            const double residual = f - data.targets[static_cast<std::size_t>(i)];
            total += residual * residual;
            const double phi1 = 2.0 * residual;
            for (int l = 0; l < n; ++l)
                accumulate_neuron_grad(net.kind, net.neurons[static_cast<std::size_t>(l)], x, phi1,
                                       out.grads[static_cast<std::size_t>(l)]);
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        out.value = total * inv_m;
        for (int l = 0; l < n; ++l) {
            const double c = inv_m * net.weights[static_cast<std::size_t>(l)];
            for (auto& g : out.grads[static_cast<std::size_t>(l)]) g *= c;
        }
        return out;
    }

    // Mmd: G_ell = 2 [ sum_j w_j grad k(theta_ell, theta_j) - mean_m grad k(theta_ell, ref_m) ]
    const double h = net.kind.kernel_bandwidth;
    const int m = subset ? static_cast<int>(subset->size()) : static_cast<int>(spec.reference.size());
    const double inv_m = 1.0 / static_cast<double>(m);
    for (int l = 0; l < n; ++l) {
        Vec& g = out.grads[static_cast<std::size_t>(l)];
        const Vec& th = net.neurons[static_cast<std::size_t>(l)];
        for (int j = 0; j < n; ++j)
            accumulate_kernel_grad(th, net.neurons[static_cast<std::size_t>(j)], h,
                                   2.0 * net.weights[static_cast<std::size_t>(j)], g);
        for (int s = 0; s < m; ++s) {
            const int i = subset ? (*subset)[static_cast<std::size_t>(s)] : s;
            accumulate_kernel_grad(th, spec.reference[static_cast<std::size_t>(i)], h,
                                   -2.0 * inv_m, g);
        }
        for (auto& v : g) v *= net.weights[static_cast<std::size_t>(l)];
    }
    out.value = mmd_ref_self ? mmd_value_cached(net, spec, *mmd_ref_self) : mmd_value(net, spec);
    return out;
}

std::vector<Vec> param_grad(const Network& net, const Dataset& data, const LossSpec& spec) {
    return loss_and_param_grad(net, data, spec).grads;
}

std::vector<Vec> functional_grads(const Network& net, const Dataset& data, const LossSpec& spec) {
    auto grads = loss_and_param_grad(net, data, spec).grads;
    for (std::size_t l = 0; l < grads.size(); ++l)
        for (auto& v : grads[l]) v /= net.weights[l];
    return grads;
}

double grad_norm(const std::vector<Vec>& grads) {
    double s = 0.0;
    for (const auto& g : grads)
        for (double v : g) s += v * v;
    return std::sqrt(s);
}

}  // namespace splitsd
