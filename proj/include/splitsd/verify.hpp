#pragma once

#include <functional>
#include <string>
#include <vector>

#include "splitsd/baselines.hpp"
#include "splitsd/descent.hpp"
#include "splitsd/splitting.hpp"

namespace splitsd {

// Independent numerical oracles. Every analytic derivative in the library is
// cross-checked against these; the registry at the bottom fails the
// verification suite if any analytic path never got its check.

struct FdSpec {
    double step = 1e-5;  // central differences

    void validate() const;
};

Vec fd_grad(const std::function<double(const Vec&)>& f, const Vec& theta, const FdSpec& fd = {});

// second central differences of f, symmetric by construction
SymMat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& theta,
                  const FdSpec& fd = {});

// J[i][j] = d g_i / d theta_j by central differences
std::vector<Vec> fd_jacobian(const std::function<Vec(const Vec&)>& g, const Vec& theta,
                             const FdSpec& fd = {});

// Least-squares slope of log(residual) against log(epsilon). Residuals at or
// below `floor` are treated as noise-dominated and excluded; if fewer than
// two points survive the fit passes by floor.
struct OrderFit {
    std::vector<double> epsilons;
    std::vector<double> residuals;
    double slope = 0.0;
    bool pass_by_floor = false;
};

OrderFit order_fit(const std::function<double(double)>& residual_at,
                   const std::vector<double>& epsilons, double floor = 1e-13);

// loss(before) - loss(after splitting `candidate` with step eps), with an
// optional re-descent between the split and the measurement. Pure: works on
// copies, leaks no state.
double measure_split_gain(const Network& net, const Dataset& data, const LossSpec& spec,
                          const SplitCandidate& candidate, double eps,
                          const OptimSpec* retrain = nullptr,
                          const ConvergenceSpec* conv = nullptr);

// Naive O((n+N)^2) double-sum MMD between weighted atoms and a uniformly
// weighted reference set. Oracle only; independent of the closed-form path.
double brute_mmd(const std::vector<Vec>& atoms, const Vec& atom_weights,
                 const std::vector<Vec>& reference, double bandwidth);

// ---- measured oracle errors (each marks its registry path) ----

// max over `trials` random (theta, x) of the scaled gradient/Hessian error
double max_rel_err_neuron_grad(const NeuronKind& kind, int trials, Rng& rng);
double max_rel_err_neuron_hess(const NeuronKind& kind, int trials, Rng& rng);
double max_rel_err_param_grad(LossTag tag, int trials, Rng& rng);
double max_rel_err_outer(LossTag tag, int trials, Rng& rng);
double max_rel_err_splitting_matrix(LossTag tag, int trials, Rng& rng);
double max_abs_err_mmd_closed_vs_brute(int trials, Rng& rng);
// || H_fd - (S + T) ||_F / || H_fd ||_F on the full parameter vector
double hessian_decomposition_rel_err(const Network& net, const Dataset& data,
                                     const LossSpec& spec);

// ---- small deterministic fixtures for theorem-level checks ----

struct RegressionFixture {
    Dataset data;
    Network truth;
    Network start;  // fresh learner, unit weights
    LossSpec spec;
};

// truth and learner drawn from the usual prior; inputs Uniform[-5, 5]
RegressionFixture make_rbf_fixture(std::uint64_t seed, int truth_neurons, int learner_neurons,
                                   int n_points);

// descend with a tightened tolerance; throws unless Converged
Network descend_to_optimum(const Network& start, const Dataset& data, const LossSpec& spec,
                           const OptimSpec& optim, double tol, long max_iters);

// ---- registry of analytic paths that demand an oracle check ----

const std::vector<std::string>& required_oracle_paths();
void reset_oracle_registry();
void mark_oracle_checked(const std::string& path);  // throws on unknown path
std::vector<std::string> unchecked_oracle_paths();

// ---- the verification suite ----

struct PropertyResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<PropertyResult> results;
    bool all_pass() const;
};

VerifyReport run_verification(std::uint64_t seed = 0);
std::string format_report_text(const VerifyReport& report);
std::string format_report_csv(const VerifyReport& report);

}  // namespace splitsd
