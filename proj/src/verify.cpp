#include "splitsd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace splitsd {

void FdSpec::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("fd spec: step must be > 0");
}

namespace {

double eval_finite(const std::function<double(const Vec&)>& f, const Vec& t) {
    const double v = f(t);
    if (!std::isfinite(v)) throw std::runtime_error("finite differences: non-finite evaluation");
    return v;
}

// comparison scale: the larger of the two magnitudes, floored so that
// near-zero quantities are compared absolutely at the floor scale
double err_scale(double a, double b) { return std::max({a, b, 1e-4}); }

double scaled_err_vec(const Vec& a, const Vec& b) {
    double diff = 0.0, ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::fabs(a[i] - b[i]));
        ma = std::max(ma, std::fabs(a[i]));
        mb = std::max(mb, std::fabs(b[i]));
    }
    return diff / err_scale(ma, mb);
}

double scaled_err_mat(const SymMat& a, const SymMat& b) {
    double diff = 0.0;
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) diff = std::max(diff, std::fabs(a.at(i, j) - b.at(i, j)));
    return diff / err_scale(a.max_abs(), b.max_abs());
}

}  // namespace

Vec fd_grad(const std::function<double(const Vec&)>& f, const Vec& theta, const FdSpec& fd) {
    fd.validate();
    const double h = fd.step;
    Vec g(theta.size());
    Vec t = theta;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        t[i] = theta[i] + h;
        const double fp = eval_finite(f, t);
        t[i] = theta[i] - h;
        const double fm = eval_finite(f, t);
        t[i] = theta[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

SymMat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& theta, const FdSpec& fd) {
    fd.validate();
    const double h = fd.step;
    const int d = static_cast<int>(theta.size());
    const double f0 = eval_finite(f, theta);
    SymMat m(d);
    Vec t = theta;
    for (int i = 0; i < d; ++i) {
        t[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] + h;
        const double fp = eval_finite(f, t);
        t[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] - h;
        const double fm = eval_finite(f, t);
        t[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)];
        m.set(i, i, (fp - 2.0 * f0 + fm) / (h * h));
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            auto at = [&](double si, double sj) {
                t[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] + si * h;
                t[static_cast<std::size_t>(j)] = theta[static_cast<std::size_t>(j)] + sj * h;
                const double v = eval_finite(f, t);
                t[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)];
                t[static_cast<std::size_t>(j)] = theta[static_cast<std::size_t>(j)];
                return v;
            };
            m.set(i, j, (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h));
        }
    return m;
}

std::vector<Vec> fd_jacobian(const std::function<Vec(const Vec&)>& g, const Vec& theta,
                             const FdSpec& fd) {
    fd.validate();
    const double h = fd.step;
    Vec t = theta;
    std::vector<Vec> cols(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        t[j] = theta[j] + h;
        const Vec gp = g(t);
        t[j] = theta[j] - h;
        const Vec gm = g(t);
        t[j] = theta[j];
        cols[j].resize(gp.size());
        for (std::size_t i = 0; i < gp.size(); ++i) cols[j][i] = (gp[i] - gm[i]) / (2.0 * h);
    }
    // transpose into rows J[i][j] = d g_i / d theta_j
    std::vector<Vec> rows(cols.empty() ? 0 : cols.front().size(), Vec(theta.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < theta.size(); ++j) rows[i][j] = cols[j][i];
    return rows;
}

OrderFit order_fit(const std::function<double(double)>& residual_at,
                   const std::vector<double>& epsilons, double floor) {
    if (epsilons.size() < 4) throw std::invalid_argument("order_fit: need at least 4 epsilons");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("order_fit: epsilons must be strictly decreasing");
    if (epsilons.front() / epsilons.back() < 31.62)
        throw std::invalid_argument("order_fit: epsilons must span at least 1.5 decades");

    OrderFit fit;
    fit.epsilons = epsilons;
    for (double e : epsilons) {
        const double r = std::fabs(residual_at(e));
        if (!std::isfinite(r)) throw std::runtime_error("order_fit: non-finite residual");
        fit.residuals.push_back(r);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (fit.residuals[i] <= floor) continue;  // noise-dominated
        const double x = std::log(epsilons[i]);
        const double y = std::log(fit.residuals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) {
        fit.pass_by_floor = true;
        fit.slope = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

double measure_split_gain(const Network& net, const Dataset& data, const LossSpec& spec,
                          const SplitCandidate& candidate, double eps, const OptimSpec* retrain,
                          const ConvergenceSpec* conv) {
    const double before = loss(net, data, spec);
    auto [split, ev] = apply_split(net, candidate, eps);
    (void)ev;
    if (retrain) {
        const ConvergenceSpec c = conv ? *conv : ConvergenceSpec{};
        split = descend(split, data, spec, *retrain, c).net;
    }
    return before - loss(split, data, spec);
}

double brute_mmd(const std::vector<Vec>& atoms, const Vec& atom_weights,
                 const std::vector<Vec>& reference, double bandwidth) {
    auto k = [bandwidth](const Vec& a, const Vec& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::exp(-0.5 * s / (bandwidth * bandwidth));
    };
    const double invn = 1.0 / static_cast<double>(reference.size());
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = 0; j < atoms.size(); ++j)
            total += atom_weights[i] * atom_weights[j] * k(atoms[i], atoms[j]);
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = 0; j < reference.size(); ++j)
            total -= 2.0 * atom_weights[i] * invn * k(atoms[i], reference[j]);
    for (std::size_t i = 0; i < reference.size(); ++i)
        for (std::size_t j = 0; j < reference.size(); ++j)
            total += invn * invn * k(reference[i], reference[j]);
    return total;
}

// ---------------------------------------------------------------- fixtures

namespace {

constexpr double kPriorStddev = 1.7320508075688772;  // sqrt(3)

// Draws (theta, x) for one neuron kind, rejecting draws where the unit is
// numerically inactive (finite differences of a flat function only measure
// round-off, not the derivative).
void draw_theta_x(const NeuronKind& kind, Rng& rng, Vec& theta, Vec& x) {
    switch (kind.tag) {
        case NeuronTag::Rbf1d:
            for (;;) {
                theta = rng.normal_vec(3);
                x = {rng.uniform(-2.0, 2.0)};
                if (std::fabs(theta[0] * x[0] + theta[1]) <= 3.0) return;
            }
        case NeuronTag::SoftplusUnit:
            for (;;) {
                theta = rng.normal_vec(4);
                x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
                const double z = theta[0] * x[0] + theta[1] * x[1] + theta[2];
                if (std::fabs(kind.softplus_beta * z) <= 4.0) return;
            }
        case NeuronTag::KernelParticle:
            for (;;) {
                theta = rng.normal_vec(2);
                x = rng.normal_vec(2);
                double r2 = 0.0;
                for (std::size_t i = 0; i < theta.size(); ++i)
                    r2 += (theta[i] - x[i]) * (theta[i] - x[i]);
                if (r2 <= 6.0 * kind.kernel_bandwidth * kind.kernel_bandwidth) return;
            }
    }
}

std::string kind_suffix(const NeuronKind& kind) {
    switch (kind.tag) {
        case NeuronTag::Rbf1d: return "rbf1d";
        case NeuronTag::SoftplusUnit: return "softplus";
        case NeuronTag::KernelParticle: return "kernel";
    }
    return "?";
}

// small random regression problem: 2-neuron learner, non-unit weights so
// weight-factor mistakes cannot cancel
void random_regression(Rng& rng, Network& net, Dataset& data, LossSpec& spec) {
    Network truth;
    truth.kind.tag = NeuronTag::Rbf1d;
    for (int i = 0; i < 2; ++i) {
        truth.neurons.push_back(rng.normal_vec(3));
        truth.weights.push_back(1.0);
    }
    data = Dataset{};
    for (int i = 0; i < 20; ++i) {
        data.inputs.push_back({rng.uniform(-3.0, 3.0)});
        data.targets.push_back(forward(truth, data.inputs.back()));
    }
    net = Network{};
    net.kind.tag = NeuronTag::Rbf1d;
    net.neurons = {rng.normal_vec(3), rng.normal_vec(3)};
    net.weights = {1.0, 0.5};
    spec = LossSpec{};
}

void random_particles(Rng& rng, Network& net, Dataset& data, LossSpec& spec) {
    net = Network{};
    net.kind.tag = NeuronTag::KernelParticle;
    net.kind.kernel_bandwidth = 0.9;
    net.neurons = {rng.normal_vec(2), rng.normal_vec(2), rng.normal_vec(2)};
    net.weights = {0.5, 0.3, 0.2};
    spec = LossSpec{};
    spec.tag = LossTag::Mmd;
    for (int i = 0; i < 6; ++i) spec.reference.push_back(rng.normal_vec(2));
    data = Dataset{};
    data.inputs = spec.reference;
}

}  // namespace

RegressionFixture make_rbf_fixture(std::uint64_t seed, int truth_neurons, int learner_neurons,
                                   int n_points) {
    Rng rng(seed);
    RegressionFixture fx;
    fx.truth.kind.tag = NeuronTag::Rbf1d;
    for (int i = 0; i < truth_neurons; ++i) {
        fx.truth.neurons.push_back(rng.normal_vec(3, kPriorStddev));
        fx.truth.weights.push_back(1.0);
    }
    for (int i = 0; i < n_points; ++i) {
        fx.data.inputs.push_back({rng.uniform(-5.0, 5.0)});
        fx.data.targets.push_back(forward(fx.truth, fx.data.inputs.back()));
    }
    for (int i = 0; i < learner_neurons; ++i) {
        fx.start.neurons.push_back(rng.normal_vec(3, kPriorStddev));
        fx.start.weights.push_back(1.0);
    }
    fx.start.kind.tag = NeuronTag::Rbf1d;
    return fx;
}

Network descend_to_optimum(const Network& start, const Dataset& data, const LossSpec& spec,
                           const OptimSpec& optim, double tol, long max_iters) {
    OptimSpec o = optim;
    o.max_iters = max_iters;
    ConvergenceSpec c;
    c.grad_norm_tol = tol;
    c.window = 3;
    c.check_every = 50;
    DescentResult res = descend(start, data, spec, o, c);
    if (res.status != DescentStatus::Converged)
        throw std::runtime_error("descend_to_optimum: not converged, final grad norm " +
                                 std::to_string(res.trace.back().grad_norm));
    return res.net;
}

// ----------------------------------------------------------- oracle checks

double max_rel_err_neuron_grad(const NeuronKind& kind, int trials, Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Vec theta, x;
        draw_theta_x(kind, rng, theta, x);
        const Vec analytic = neuron_grad(kind, theta, x);
        const Vec fd = fd_grad([&](const Vec& th) { return neuron_eval(kind, th, x); }, theta);
        worst = std::max(worst, scaled_err_vec(analytic, fd));
    }
    mark_oracle_checked("model.grad." + kind_suffix(kind));
    return worst;
}

double max_rel_err_neuron_hess(const NeuronKind& kind, int trials, Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Vec theta, x;
        draw_theta_x(kind, rng, theta, x);
        const SymMat analytic = neuron_hess(kind, theta, x);
        const auto rows =
            fd_jacobian([&](const Vec& th) { return neuron_grad(kind, th, x); }, theta);
        std::vector<double> flat;
        for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
        const SymMat fd = SymMat::symmetrized(static_cast<int>(theta.size()), flat);
        worst = std::max(worst, scaled_err_mat(analytic, fd));
    }
    mark_oracle_checked("model.hess." + kind_suffix(kind));
    return worst;
}

double max_rel_err_param_grad(LossTag tag, int trials, Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Network net;
        Dataset data;
        LossSpec spec;
        if (tag == LossTag::SquaredError)
            random_regression(rng, net, data, spec);
        else
            random_particles(rng, net, data, spec);

        const auto analytic = param_grad(net, data, spec);
        for (int l = 0; l < net.size(); ++l) {
            const Vec fd = fd_grad(
                [&](const Vec& th) {
                    Network copy = net;
                    copy.neurons[static_cast<std::size_t>(l)] = th;
                    return loss(copy, data, spec);
                },
                net.neurons[static_cast<std::size_t>(l)]);
            worst = std::max(worst, scaled_err_vec(analytic[static_cast<std::size_t>(l)], fd));
        }
    }
    mark_oracle_checked(tag == LossTag::SquaredError ? "loss.param_grad.squared_error"
                                                     : "loss.param_grad.mmd");
    return worst;
}

double max_rel_err_outer(LossTag tag, int trials, Rng& rng) {
    const double h = 1e-5;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Network net;
        Dataset data;
        LossSpec spec;
        if (tag == LossTag::SquaredError) {
            random_regression(rng, net, data, spec);
            const Vec& x = data.inputs.front();
            const double y = data.targets.front();
            const auto [phi1, phi2] = outer_derivs(net, x, y, spec);
            const double f0 = forward(net, x);
            auto phi = [&](double f) { return (y - f) * (y - f); };
            const double d1 = (phi(f0 + h) - phi(f0 - h)) / (2.0 * h);
            const double d2 = (phi(f0 + h) - 2.0 * phi(f0) + phi(f0 - h)) / (h * h);
            worst = std::max(worst, std::fabs(phi1 - d1) / err_scale(std::fabs(phi1), std::fabs(d1)));
            worst = std::max(worst, std::fabs(phi2 - d2) / err_scale(std::fabs(phi2), std::fabs(d2)));
        } else {
            random_particles(rng, net, data, spec);
            const Vec probe = rng.normal_vec(2);
            const auto [phi1, phi2] = outer_derivs(net, probe, 0.0, spec);
            // the loss with extra kernel mass eta at the probe location
            auto with_mass = [&](double eta) {
                std::vector<Vec> atoms = net.neurons;
                Vec w = net.weights;
                atoms.push_back(probe);
                w.push_back(eta);
                return brute_mmd(atoms, w, spec.reference, net.kind.kernel_bandwidth);
            };
            const double d1 = (with_mass(h) - with_mass(-h)) / (2.0 * h);
            const double d2 = (with_mass(h) - 2.0 * with_mass(0.0) + with_mass(-h)) / (h * h);
            worst = std::max(worst, std::fabs(phi1 - d1) / err_scale(std::fabs(phi1), std::fabs(d1)));
            worst = std::max(worst, std::fabs(phi2 - d2) / err_scale(std::fabs(phi2), std::fabs(d2)));
        }
    }
    mark_oracle_checked(tag == LossTag::SquaredError ? "loss.outer.squared_error"
                                                     : "loss.outer.mmd");
    return worst;
}

double max_rel_err_splitting_matrix(LossTag tag, int trials, Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Network net;
        Dataset data;
        LossSpec spec;
        if (tag == LossTag::SquaredError) {
            random_regression(rng, net, data, spec);
            for (int l = 0; l < net.size(); ++l) {
                const SymMat analytic = splitting_matrix(net, data, spec, l);
                // oracle: exact phi' composed with finite differences of the
                // neuron gradient, averaged over the data
                SymMat oracle(net.dim());
                for (int i = 0; i < data.size(); ++i) {
                    const Vec& x = data.inputs[static_cast<std::size_t>(i)];
                    const double phi1 =
                        2.0 * (forward(net, x) - data.targets[static_cast<std::size_t>(i)]);
                    const auto rows = fd_jacobian(
                        [&](const Vec& th) { return neuron_grad(net.kind, th, x); },
                        net.neurons[static_cast<std::size_t>(l)]);
                    std::vector<double> flat;
                    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
                    oracle.add_scaled(SymMat::symmetrized(net.dim(), flat), phi1);
                }
                oracle.scale(1.0 / static_cast<double>(data.size()));
                worst = std::max(worst, scaled_err_mat(analytic, oracle));
            }
        } else {
            random_particles(rng, net, data, spec);
            const double bw = net.kind.kernel_bandwidth;
            // oracle: second differences of twice the witness field, with a
            // locally re-typed kernel
            auto witness2 = [&](const Vec& p) {
                auto k = [bw](const Vec& a, const Vec& b) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
                    return std::exp(-0.5 * s / (bw * bw));
                };
                double v = 0.0;
                for (std::size_t j = 0; j < net.neurons.size(); ++j)
                    v += net.weights[j] * k(p, net.neurons[j]);
                for (const auto& r : spec.reference)
                    v -= k(p, r) / static_cast<double>(spec.reference.size());
                return 2.0 * v;
            };
            for (int l = 0; l < net.size(); ++l) {
                const SymMat analytic = splitting_matrix(net, data, spec, l);
                const SymMat oracle = fd_hessian(witness2, net.neurons[static_cast<std::size_t>(l)],
                                                 FdSpec{1e-4});
                worst = std::max(worst, scaled_err_mat(analytic, oracle));
            }
        }
    }
    mark_oracle_checked(tag == LossTag::SquaredError ? "splitting.matrix.squared_error"
                                                     : "splitting.matrix.mmd");
    return worst;
}

double max_abs_err_mmd_closed_vs_brute(int trials, Rng& rng) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Network net;
        Dataset data;
        LossSpec spec;
        random_particles(rng, net, data, spec);
        const double closed = loss(net, data, spec);
        const double brute = brute_mmd(net.neurons, net.weights, spec.reference,
                                       net.kind.kernel_bandwidth);
        worst = std::max(worst, std::fabs(closed - brute));
    }
    mark_oracle_checked("loss.mmd_closed_form");
    return worst;
}

double hessian_decomposition_rel_err(const Network& net, const Dataset& data,
                                     const LossSpec& spec) {
    if (spec.tag != LossTag::SquaredError)
        throw std::invalid_argument("hessian decomposition check: squared error only");
    const int n = net.size();
    const int d = net.dim();
    const int big = n * d;

    // analytic assembly: block diagonal of w_l S_l plus the outer-product
    // term w_l w_m * mean_x[ phi'' grad_l grad_m^T ]
    std::vector<double> analytic(static_cast<std::size_t>(big) * big, 0.0);
    for (int l = 0; l < n; ++l) {
        const SymMat s = splitting_matrix(net, data, spec, l);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                analytic[static_cast<std::size_t>(l * d + i) * big + (l * d + j)] +=
                    net.weights[static_cast<std::size_t>(l)] * s.at(i, j);
    }
    for (int i = 0; i < data.size(); ++i) {
        const Vec& x = data.inputs[static_cast<std::size_t>(i)];
        std::vector<Vec> grads(static_cast<std::size_t>(n));
        for (int l = 0; l < n; ++l)
            grads[static_cast<std::size_t>(l)] =
                neuron_grad(net.kind, net.neurons[static_cast<std::size_t>(l)], x);
        const double c = 2.0 / static_cast<double>(data.size());  // phi'' = 2
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
                const double ww = net.weights[static_cast<std::size_t>(l)] *
                                  net.weights[static_cast<std::size_t>(m)];
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        analytic[static_cast<std::size_t>(l * d + a) * big + (m * d + b)] +=
                            c * ww * grads[static_cast<std::size_t>(l)][static_cast<std::size_t>(a)] *
                            grads[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)];
            }
    }

    Vec flat(static_cast<std::size_t>(big));
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < d; ++i)
            flat[static_cast<std::size_t>(l * d + i)] =
                net.neurons[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
    const SymMat h_fd = fd_hessian(
        [&](const Vec& all) {
            Network copy = net;
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < d; ++i)
                    copy.neurons[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] =
                        all[static_cast<std::size_t>(l * d + i)];
            return loss(copy, data, spec);
        },
        flat, FdSpec{1e-4});

    double num = 0.0, den = 0.0;
    for (int i = 0; i < big; ++i)
        for (int j = 0; j < big; ++j) {
            const double a = analytic[static_cast<std::size_t>(i) * big + j];
            const double f = h_fd.at(i, j);
            num += (a - f) * (a - f);
            den += f * f;
        }
    mark_oracle_checked("splitting.hessian_decomposition");
    return std::sqrt(num) / std::sqrt(den);
}

// ------------------------------------------------------------- registry

namespace {

const std::vector<std::string> kOraclePaths = {
    "model.grad.rbf1d",          "model.grad.softplus",
    "model.grad.kernel",         "model.hess.rbf1d",
    "model.hess.softplus",       "model.hess.kernel",
    "loss.param_grad.squared_error", "loss.param_grad.mmd",
    "loss.outer.squared_error",  "loss.outer.mmd",
    "loss.mmd_closed_form",      "splitting.matrix.squared_error",
    "splitting.matrix.mmd",      "splitting.hessian_decomposition",
};

std::set<std::string>& checked_set() {
    static std::set<std::string> s;
    return s;
}

}  // namespace

const std::vector<std::string>& required_oracle_paths() { return kOraclePaths; }

void reset_oracle_registry() { checked_set().clear(); }

void mark_oracle_checked(const std::string& path) {
    if (std::find(kOraclePaths.begin(), kOraclePaths.end(), path) == kOraclePaths.end())
        throw std::logic_error("oracle registry: unknown path " + path);
    checked_set().insert(path);
}

std::vector<std::string> unchecked_oracle_paths() {
    std::vector<std::string> out;
    for (const auto& p : kOraclePaths)
        if (checked_set().count(p) == 0) out.push_back(p);
    return out;
}

// ------------------------------------------------------- verification suite

namespace {

const std::vector<double> kEpsGrid = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

PropertyResult prop_max(const std::string& name, double measured, double threshold,
                        const std::string& detail = "") {
    return {name, measured <= threshold, measured, threshold, detail};
}

PropertyResult prop_slope(const std::string& name, const OrderFit& fit, double threshold) {
    PropertyResult r;
    r.name = name;
    r.measured = fit.slope;
    r.threshold = threshold;
    r.pass = fit.pass_by_floor || fit.slope >= threshold;
    if (fit.pass_by_floor) r.detail = "PASS-BY-FLOOR (residuals at round-off)";
    return r;
}

// loss change from splitting one candidate, no retraining
double split_delta(const Network& net, const Dataset& data, const LossSpec& spec,
                   const SplitCandidate& cand, double eps) {
    return -measure_split_gain(net, data, spec, cand, eps);
}

}  // namespace

bool VerifyReport::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

VerifyReport run_verification(std::uint64_t seed) {
    reset_oracle_registry();
    Rng rng(seed ^ 0x5eedULL);
    VerifyReport rep;
    auto& out = rep.results;

    // the order fitter measures known power laws exactly
    {
        const std::vector<double> eps = {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3};
        const OrderFit cubic = order_fit([](double e) { return e * e * e; }, eps);
        const OrderFit quad = order_fit([](double e) { return e * e; }, eps);
        out.push_back(prop_max("order-fit-selftest-cubic", std::fabs(cubic.slope - 3.0), 0.01));
        out.push_back(prop_max("order-fit-selftest-quadratic", std::fabs(quad.slope - 2.0), 0.01));
    }

    // analytic derivatives against central differences
    {
        NeuronKind rbf;
        NeuronKind soft;
        soft.tag = NeuronTag::SoftplusUnit;
        NeuronKind kern;
        kern.tag = NeuronTag::KernelParticle;
        kern.kernel_bandwidth = 0.9;
        for (const auto& kind : {rbf, soft, kern}) {
            out.push_back(prop_max("grad-fd-" + kind_suffix(kind),
                                   max_rel_err_neuron_grad(kind, 100, rng), 1e-6));
            out.push_back(prop_max("hess-fd-" + kind_suffix(kind),
                                   max_rel_err_neuron_hess(kind, 100, rng), 1e-5));
        }
        out.push_back(prop_max("param-grad-fd-squared-error",
                               max_rel_err_param_grad(LossTag::SquaredError, 50, rng), 1e-6));
        out.push_back(
            prop_max("param-grad-fd-mmd", max_rel_err_param_grad(LossTag::Mmd, 50, rng), 1e-6));
        out.push_back(prop_max("outer-fd-squared-error",
                               max_rel_err_outer(LossTag::SquaredError, 20, rng), 1e-6));
        out.push_back(prop_max("outer-fd-mmd", max_rel_err_outer(LossTag::Mmd, 20, rng), 1e-6));
        out.push_back(prop_max("splitting-matrix-fd-squared-error",
                               max_rel_err_splitting_matrix(LossTag::SquaredError, 10, rng), 1e-6));
        out.push_back(prop_max("splitting-matrix-fd-mmd",
                               max_rel_err_splitting_matrix(LossTag::Mmd, 10, rng), 1e-6));
        out.push_back(
            prop_max("mmd-closed-vs-brute", max_abs_err_mmd_closed_vs_brute(30, rng), 1e-10));
    }

    // full Hessian equals the splitting matrices plus the outer-product term
    {
        RegressionFixture fx = make_rbf_fixture(seed + 21, 3, 3, 50);
        out.push_back(prop_max("hessian-decomposition",
                               hessian_decomposition_rel_err(fx.start, fx.data, fx.spec), 1e-5));
    }

    // second-order magnitude of a single split at a tight optimum
    OptimSpec sgd;
    sgd.learning_rate = 0.05;
    {
        RegressionFixture fx = make_rbf_fixture(seed + 11, 3, 1, 200);
        const Network opt = descend_to_optimum(fx.start, fx.data, fx.spec, sgd, 1e-8, 400000);
        const auto cands = splitting_candidates(opt, fx.data, fx.spec);
        const SplitCandidate& cand = cands.front();
        if (cand.splitting_index < -1e-8) {
            const double w = opt.weights.front();
            auto residual = [&](double e) {
                return split_delta(opt, fx.data, fx.spec, cand, e) -
                       predicted_loss_change(cand.splitting_index, w, e);
            };
            const OrderFit fit = order_fit(residual, kEpsGrid);
            out.push_back(prop_slope("split-gain-order", fit, 2.5));
            const double e0 = 1e-2;
            const double rel =
                std::fabs(residual(e0)) /
                std::fabs(predicted_loss_change(cand.splitting_index, w, e0));
            out.push_back(prop_max("split-gain-magnitude-at-1e-2", rel, 0.10));

            // splitting along directions away from the eigenvector loses gain
            const auto pairs = eig_sym(cand.matrix);
            Vec vmax = pairs.back().vector;
            const double c = dot(vmax, cand.splitting_gradient);
            axpy(-c, cand.splitting_gradient, vmax);
            const double nv = norm2(vmax);
            for (auto& v : vmax) v /= nv;
            int argmax = -1;
            double best = -1e300;
            const int n_angles = 24;
            std::vector<double> gains(n_angles);
            for (int a = 0; a < n_angles; ++a) {
                const double phi = 2.0 * M_PI * a / n_angles;
                Vec dir = scaled(cand.splitting_gradient, std::cos(phi));
                axpy(std::sin(phi), vmax, dir);
                const Network split = split_neuron(opt, cand.neuron_index, dir, 1e-2);
                gains[static_cast<std::size_t>(a)] = loss(opt, fx.data, fx.spec) -
                                                     loss(split, fx.data, fx.spec);
                if (gains[static_cast<std::size_t>(a)] > best) {
                    best = gains[static_cast<std::size_t>(a)];
                    argmax = a;
                }
            }
            PropertyResult dir_res;
            dir_res.name = "split-direction-optimality";
            dir_res.pass = (argmax == 0 || argmax == n_angles / 2);
            dir_res.measured = static_cast<double>(argmax) * 360.0 / n_angles;
            dir_res.threshold = 0.0;
            dir_res.detail = "best angle in degrees; expected 0 or 180";
            out.push_back(dir_res);
            double asym = 0.0;
            for (int a = 1; a < n_angles; ++a)
                asym = std::max(asym, std::fabs(gains[static_cast<std::size_t>(a)] -
                                                gains[static_cast<std::size_t>(n_angles - a)]));
            out.push_back(prop_max("split-direction-symmetry", asym,
                                   1e-9 * std::max(std::fabs(best), 1e-12)));
        } else {
            out.push_back({"split-gain-order", false, cand.splitting_index, -1e-8,
                           "fixture optimum is not splitting-unstable"});
        }
    }

    // additivity of simultaneous splits and the all-neuron rate
    {
        RegressionFixture fx = make_rbf_fixture(seed + 12, 4, 2, 200);
        const Network opt = descend_to_optimum(fx.start, fx.data, fx.spec, sgd, 1e-8, 400000);
        const auto cands = splitting_candidates(opt, fx.data, fx.spec);
        const double base = loss(opt, fx.data, fx.spec);
        auto joint_minus_sum = [&](double e) {
            Network both = split_neuron(opt, 0, cands[0].splitting_gradient, e);
            both = split_neuron(both, 1, cands[1].splitting_gradient, e);
            const double joint = loss(both, fx.data, fx.spec) - base;
            const double d0 = split_delta(opt, fx.data, fx.spec, cands[0], e);
            const double d1 = split_delta(opt, fx.data, fx.spec, cands[1], e);
            return joint - d0 - d1;
        };
        out.push_back(prop_slope("split-additivity", order_fit(joint_minus_sum, kEpsGrid), 2.5));

        auto all_rate_residual = [&](double e) {
            Network grown = opt;
            double predicted = 0.0;
            for (const auto& c : cands) {
                if (c.splitting_index < 0.0) {
                    predicted += predicted_loss_change(
                        c.splitting_index, opt.weights[static_cast<std::size_t>(c.neuron_index)], e);
                    grown = split_neuron(grown, c.neuron_index, c.splitting_gradient, e);
                }
            }
            return (loss(grown, fx.data, fx.spec) - base) - predicted;
        };
        out.push_back(
            prop_slope("stable-split-rate", order_fit(all_rate_residual, kEpsGrid), 2.5));

        // first-order rate of the normalized particle step at a fresh start
        const auto G = functional_grads(fx.start, fx.data, fx.spec);
        double pred = 0.0;
        for (int l = 0; l < fx.start.size(); ++l)
            pred += fx.start.weights[static_cast<std::size_t>(l)] *
                    norm2(G[static_cast<std::size_t>(l)]);
        const double l0 = loss(fx.start, fx.data, fx.spec);
        auto rate_residual = [&](double e) {
            const Network moved = normalized_particle_step(fx.start, G, e);
            return (loss(moved, fx.data, fx.spec) - l0) + e * pred;
        };
        out.push_back(
            prop_slope("first-order-rate", order_fit(rate_residual, kEpsGrid), 1.5));
    }

    // every analytic path got its oracle
    {
        const auto missing = unchecked_oracle_paths();
        PropertyResult r;
        r.name = "oracle-coverage";
        r.pass = missing.empty();
        r.measured = static_cast<double>(missing.size());
        r.threshold = 0.0;
        for (const auto& m : missing) r.detail += m + " ";
        out.push_back(r);
    }

    return rep;
}

std::string format_report_text(const VerifyReport& report) {
    std::ostringstream os;
    for (const auto& r : report.results) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "[%s] %-36s measured=%.6g threshold=%.6g %s\n",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.threshold,
                      r.detail.c_str());
        os << buf;
    }
    os << (report.all_pass() ? "ALL PASS\n" : "FAILURES PRESENT\n");
    return os.str();
}

std::string format_report_csv(const VerifyReport& report) {
    std::ostringstream os;
    os << "property,status,measured,threshold,detail\n";
    for (const auto& r : report.results) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", r.measured);
        os << r.name << "," << (r.pass ? "PASS" : "FAIL") << "," << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", r.threshold);
        os << buf << "," << r.detail << "\n";
    }
    return os.str();
}

}  // namespace splitsd
