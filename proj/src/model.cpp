#include "splitsd/model.hpp"

#include <cmath>
#include <stdexcept>

namespace splitsd {

std::string to_string(NeuronTag tag) {
    switch (tag) {
        case NeuronTag::Rbf1d: return "RBF1D";
        case NeuronTag::SoftplusUnit: return "SOFTPLUS_UNIT";
        case NeuronTag::KernelParticle: return "KERNEL_PARTICLE";
    }
    return "?";
}

int neuron_dim(const NeuronKind& kind, int input_dim) {
    switch (kind.tag) {
        case NeuronTag::Rbf1d: return 3;
        case NeuronTag::SoftplusUnit: return input_dim + 2;
        case NeuronTag::KernelParticle: return input_dim;
    }
    return 0;
}

namespace {

void check_shapes(const NeuronKind& kind, const Vec& theta, const Vec& x) {
    bool ok = true;
    switch (kind.tag) {
        case NeuronTag::Rbf1d:
            ok = theta.size() == 3 && x.size() == 1;
            break;
        case NeuronTag::SoftplusUnit:
            ok = theta.size() == x.size() + 2 && !x.empty();
            break;
        case NeuronTag::KernelParticle:
            ok = theta.size() == x.size() && !x.empty();
            break;
    }
    if (!ok)
        throw std::invalid_argument("neuron " + to_string(kind.tag) + ": dimension mismatch (theta " +
                                    std::to_string(theta.size()) + ", x " + std::to_string(x.size()) + ")");
    if (kind.tag == NeuronTag::SoftplusUnit && kind.softplus_beta <= 0.0)
        throw std::invalid_argument("softplus sharpness must be positive");
    if (kind.tag == NeuronTag::KernelParticle && kind.kernel_bandwidth <= 0.0)
        throw std::invalid_argument("kernel bandwidth must be positive");
}

// softplus_beta(z) = log(1 + exp(beta z)) / beta, overflow-safe
double softplus(double z, double beta) {
    const double bz = beta * z;
    return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(bz))) / beta;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

double kernel_rbf(const Vec& a, const Vec& b, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::exp(-0.5 * s / (h * h));
}

Vec kernel_rbf_grad1(const Vec& a, const Vec& b, double h) {
    const double k = kernel_rbf(a, b, h);
    const double inv_h2 = 1.0 / (h * h);
    Vec g(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) g[i] = -(a[i] - b[i]) * inv_h2 * k;
    return g;
}

SymMat kernel_rbf_hess11(const Vec& a, const Vec& b, double h) {
    const double k = kernel_rbf(a, b, h);
    const double inv_h2 = 1.0 / (h * h);
    const int d = static_cast<int>(a.size());
    SymMat m(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const double di = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
            const double dj = a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)];
            double v = di * dj * inv_h2 * inv_h2 * k;
            if (i == j) v -= inv_h2 * k;
            m.set(i, j, v);
        }
    return m;
}

double neuron_eval(const NeuronKind& kind, const Vec& theta, const Vec& x) {
    check_shapes(kind, theta, x);
    switch (kind.tag) {
        case NeuronTag::Rbf1d: {
            const double u = theta[0] * x[0] + theta[1];
            return theta[2] * std::exp(-0.5 * u * u);
        }
        case NeuronTag::SoftplusUnit: {
            const std::size_t k = x.size();
            double z = theta[k];  // bias
            for (std::size_t i = 0; i < k; ++i) z += theta[i] * x[i];
            return theta[k + 1] * softplus(z, kind.softplus_beta);
        }
        case NeuronTag::KernelParticle:
            return kernel_rbf(theta, x, kind.kernel_bandwidth);
    }
    return 0.0;
}

Vec neuron_grad(const NeuronKind& kind, const Vec& theta, const Vec& x) {
    check_shapes(kind, theta, x);
    switch (kind.tag) {
        case NeuronTag::Rbf1d: {
            const double u = theta[0] * x[0] + theta[1];
            const double g = std::exp(-0.5 * u * u);
            return {-theta[2] * g * u * x[0], -theta[2] * g * u, g};
        }
        case NeuronTag::SoftplusUnit: {
            const std::size_t k = x.size();
            const double beta = kind.softplus_beta;
            double z = theta[k];
            for (std::size_t i = 0; i < k; ++i) z += theta[i] * x[i];
            const double s = softplus(z, beta);
            const double s1 = sigmoid(beta * z);  // d softplus / dz
            const double c = theta[k + 1];
            Vec g(k + 2);
            for (std::size_t i = 0; i < k; ++i) g[i] = c * s1 * x[i];
            g[k] = c * s1;
            g[k + 1] = s;
            return g;
        }
        case NeuronTag::KernelParticle:
            return kernel_rbf_grad1(theta, x, kind.kernel_bandwidth);
    }
    return {};
}

SymMat neuron_hess(const NeuronKind& kind, const Vec& theta, const Vec& x) {
    check_shapes(kind, theta, x);
    switch (kind.tag) {
        case NeuronTag::Rbf1d: {
            const double u = theta[0] * x[0] + theta[1];
            const double g = std::exp(-0.5 * u * u);
            const double c = theta[2];
            const double x0 = x[0];
            const double uu1 = u * u - 1.0;  // d^2/du^2 of exp(-u^2/2) = (u^2-1) g
            SymMat m(3);
            m.set(0, 0, c * g * uu1 * x0 * x0);
            m.set(0, 1, c * g * uu1 * x0);
            m.set(1, 1, c * g * uu1);
            m.set(0, 2, -g * u * x0);
            m.set(1, 2, -g * u);
            m.set(2, 2, 0.0);
            return m;
        }
        case NeuronTag::SoftplusUnit: {
            const std::size_t k = x.size();
            const double beta = kind.softplus_beta;
            double z = theta[k];
            for (std::size_t i = 0; i < k; ++i) z += theta[i] * x[i];
            const double s1 = sigmoid(beta * z);
            const double s2 = beta * s1 * (1.0 - s1);  // d^2 softplus / dz^2
            const double c = theta[k + 1];
            const int d = static_cast<int>(k) + 2;
            SymMat m(d);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i; j < k; ++j)
                    m.set(static_cast<int>(i), static_cast<int>(j), c * s2 * x[i] * x[j]);
            for (std::size_t i = 0; i < k; ++i) {
                m.set(static_cast<int>(i), static_cast<int>(k), c * s2 * x[i]);
                m.set(static_cast<int>(i), static_cast<int>(k) + 1, s1 * x[i]);
            }
            m.set(static_cast<int>(k), static_cast<int>(k), c * s2);
            m.set(static_cast<int>(k), static_cast<int>(k) + 1, s1);
            m.set(static_cast<int>(k) + 1, static_cast<int>(k) + 1, 0.0);
            return m;
        }
        case NeuronTag::KernelParticle:
            return kernel_rbf_hess11(theta, x, kind.kernel_bandwidth);
    }
    return SymMat(0);
}

double Network::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void Network::validate() const {
    if (neurons.size() != weights.size())
        throw std::invalid_argument("network: neuron/weight count mismatch");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("network: weights must be positive");
    const std::size_t d = neurons.empty() ? 0 : neurons.front().size();
    for (const auto& th : neurons) {
        if (th.size() != d) throw std::invalid_argument("network: ragged neuron parameters");
        if (!all_finite(th)) throw std::invalid_argument("network: non-finite parameter");
    }
}

double forward(const Network& net, const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < net.neurons.size(); ++i)
        s += net.weights[i] * neuron_eval(net.kind, net.neurons[i], x);
    return s;
}

void Dataset::validate() const {
    if (inputs.empty()) throw std::invalid_argument("dataset: empty");
    if (!targets.empty() && targets.size() != inputs.size())
        throw std::invalid_argument("dataset: target count mismatch");
    for (const auto& x : inputs)
        if (!all_finite(x)) throw std::invalid_argument("dataset: non-finite input");
    for (double y : targets)
        if (!std::isfinite(y)) throw std::invalid_argument("dataset: non-finite target");
}

}  // namespace splitsd
