#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "splitsd/verify.hpp"

namespace splitsd {

enum class ExperimentKind { RbfToy, AngleSweep, EigenVsGain, MmdCompress, VerifyAll };
enum class GrowthMethod { OptimalSplit, RandomSplit, NewInit, GradientBoost, Scratch };

std::string to_string(ExperimentKind k);
std::string to_string(GrowthMethod m);

struct RunConfig {
    ExperimentKind experiment = ExperimentKind::RbfToy;
    GrowthMethod method = GrowthMethod::OptimalSplit;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int target_size = 8;
    SplitPolicy policy;
    OptimSpec optim;
    ConvergenceSpec conv;
    long retrain_iters = 2000;      // per-neuron gain measurements
    int sweep_angles = 72;
    long sweep_retrain_iters = 0;   // 0 = measure the raw split
    double softplus_beta = 10.0;
    double mmd_bandwidth = 0.0;     // 0 = median heuristic over the reference set
    int boost_restarts = 5;
};

// Flat key=value text, '#' comments, optional [section] headers that prefix
// keys ("[policy]" + "epsilon = ..." means "policy.epsilon = ..."). Unknown
// keys and unparseable values are rejected naming the offending key.
// Defaults depend on the experiment (MMD runs use adagrad at 0.01, the
// regression toy plain sgd at 0.05) and are resolved before explicit keys
// are applied.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// canonical dump of every resolved setting; its FNV-1a hash stamps the CSVs
std::string echo_config(const RunConfig& cfg);
std::uint64_t fnv1a64(const std::string& text);
std::string config_hash_hex(const RunConfig& cfg);

// ---- canonical data synthesis ----

// 15 bump ground truth with parameters from Normal(0, sqrt(3)), 1000 inputs
// Uniform[-5, 5], noiseless targets
std::pair<Dataset, Network> synth_rbf_dataset(std::uint64_t seed);

// 1000 draws from the mixture 0.2 N(-2, s) + 0.3 N(1, s) + 0.5 N(3, s),
// s = sqrt(0.5)
std::vector<Vec> synth_gmm_reference(std::uint64_t seed, int count = 1000);

double median_heuristic_bandwidth(const std::vector<Vec>& points);

// ---- growth runs ----

struct RunRow {
    int round = 0;
    long iter = 0;
    int neuron_count = 0;
    double loss_value = 0.0;
    std::string event;
};

struct GrowthResult {
    Network net;
    std::vector<RunRow> rows;
    std::vector<SplitEvent> events;
    std::vector<Network> phase_nets;  // state at the end of each training phase
    bool diverged = false;
    std::string message;
};

struct ToyProblem {
    Dataset data;
    LossSpec spec;
    Network start;
    InitSpec init;
};

// Experiment-kind-specific dataset, loss, starting net and init
// distribution. The initial neuron is drawn from method_rng, so every
// method started from the same seed shares the same first neuron and the
// stream continues into the growth draws.
ToyProblem make_problem(const RunConfig& cfg, Rng& method_rng);

// The alternating train/grow loop for every method, at equal total budget:
// the growth methods get one optim.max_iters descent phase per size, scratch
// gets the sum as a single budget, the boosting inner fits draw from the
// same per-phase allowance.
GrowthResult run_growth(const RunConfig& cfg, const Dataset& data, const LossSpec& spec,
                        const Network& start, const InitSpec& init, Rng& method_rng);

// ---- figure-backing measurements ----

struct AngleGain {
    double angle = 0.0;  // radians from the minimum eigenvector
    double gain = 0.0;   // loss(before) - loss(after)
};

// Splits `neuron` along directions rotated by each grid angle inside the
// plane spanned by the minimum and maximum eigenvectors of its splitting
// matrix, measuring the gain with the same retrain budget for every angle.
// Refused when the neuron's splitting index is not negative.
std::vector<AngleGain> angle_sweep(const Network& net, const Dataset& data, const LossSpec& spec,
                                   int neuron, double eps, int n_angles, long retrain_iters,
                                   const OptimSpec& optim);

struct NeuronGain {
    int neuron = -1;
    double lambda_min = 0.0;
    double gain = 0.0;
};

// per-neuron split gain with retraining, rows ascending by lambda_min
std::vector<NeuronGain> eigen_vs_gain(const Network& net, const Dataset& data,
                                      const LossSpec& spec, double eps, long retrain_iters,
                                      const OptimSpec& optim);

// grow with optimal splits to `size` neurons, then tighten the optimum
Network grown_optimum(const RunConfig& cfg, const ToyProblem& problem, int size, Rng& method_rng);

// executes the configured experiment, writes all output files, returns the
// process exit code
int run_experiment(const RunConfig& cfg);

std::string format_double(double v);  // %.17g, for bit-faithful CSV round-trips

}  // namespace splitsd
