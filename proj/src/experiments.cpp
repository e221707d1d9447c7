#include "splitsd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace splitsd {

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::RbfToy: return "RBF_TOY";
        case ExperimentKind::AngleSweep: return "ANGLE_SWEEP";
        case ExperimentKind::EigenVsGain: return "EIGEN_VS_GAIN";
        case ExperimentKind::MmdCompress: return "MMD_COMPRESS";
        case ExperimentKind::VerifyAll: return "VERIFY_ALL";
    }
    return "?";
}

std::string to_string(GrowthMethod m) {
    switch (m) {
        case GrowthMethod::OptimalSplit: return "OPTIMAL_SPLIT";
        case GrowthMethod::RandomSplit: return "RANDOM_SPLIT";
        case GrowthMethod::NewInit: return "NEW_INIT";
        case GrowthMethod::GradientBoost: return "GRADIENT_BOOST";
        case GrowthMethod::Scratch: return "SCRATCH";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ------------------------------------------------------------- config

namespace {

constexpr double kPriorStddev = 1.7320508075688772;   // sqrt(3)
constexpr double kGmmStddev = 0.7071067811865476;     // sqrt(0.5)
constexpr std::uint64_t kMethodStream = 0x9e3779b97f4a7c15ULL;

ExperimentKind parse_experiment(const std::string& v) {
    if (v == "RBF_TOY") return ExperimentKind::RbfToy;
    if (v == "ANGLE_SWEEP") return ExperimentKind::AngleSweep;
    if (v == "EIGEN_VS_GAIN") return ExperimentKind::EigenVsGain;
    if (v == "MMD_COMPRESS") return ExperimentKind::MmdCompress;
    if (v == "VERIFY_ALL") return ExperimentKind::VerifyAll;
    throw std::invalid_argument("config: invalid value for 'experiment': " + v);
}

GrowthMethod parse_method(const std::string& v) {
    if (v == "OPTIMAL_SPLIT") return GrowthMethod::OptimalSplit;
    if (v == "RANDOM_SPLIT") return GrowthMethod::RandomSplit;
    if (v == "NEW_INIT") return GrowthMethod::NewInit;
    if (v == "GRADIENT_BOOST") return GrowthMethod::GradientBoost;
    if (v == "SCRATCH") return GrowthMethod::Scratch;
    throw std::invalid_argument("config: invalid value for 'method': " + v);
}

OptimMethod parse_optim_method(const std::string& v) {
    if (v == "SGD") return OptimMethod::Sgd;
    if (v == "SGD_MOMENTUM") return OptimMethod::SgdMomentum;
    if (v == "ADAGRAD") return OptimMethod::Adagrad;
    throw std::invalid_argument("config: invalid value for 'optim.method': " + v);
}

std::string optim_method_name(OptimMethod m) {
    switch (m) {
        case OptimMethod::Sgd: return "SGD";
        case OptimMethod::SgdMomentum: return "SGD_MOMENTUM";
        case OptimMethod::Adagrad: return "ADAGRAD";
    }
    return "?";
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw std::invalid_argument("config: invalid value for '" + key + "': " + v);
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw std::invalid_argument("config: invalid value for '" + key + "': " + v);
    }
}

void apply_experiment_defaults(RunConfig& cfg) {
    if (cfg.experiment == ExperimentKind::MmdCompress) {
        cfg.optim.method = OptimMethod::Adagrad;
        cfg.optim.learning_rate = 0.01;
        cfg.optim.max_iters = 5000;
        cfg.target_size = 5;
    } else {
        cfg.optim.method = OptimMethod::Sgd;
        cfg.optim.learning_rate = 0.05;
    }
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "experiment") cfg.experiment = parse_experiment(value);
    else if (key == "method") cfg.method = parse_method(value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, value));
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "target_size") cfg.target_size = static_cast<int>(to_long(key, value));
    else if (key == "policy.max_splits") cfg.policy.max_splits = static_cast<int>(to_long(key, value));
    else if (key == "policy.threshold") cfg.policy.threshold = to_double(key, value);
    else if (key == "policy.epsilon") cfg.policy.step_size = to_double(key, value);
    else if (key == "optim.method") cfg.optim.method = parse_optim_method(value);
    else if (key == "optim.learning_rate") cfg.optim.learning_rate = to_double(key, value);
    else if (key == "optim.momentum") cfg.optim.momentum = to_double(key, value);
    else if (key == "optim.batch_size") cfg.optim.batch_size = static_cast<int>(to_long(key, value));
    else if (key == "optim.max_iters") cfg.optim.max_iters = to_long(key, value);
    else if (key == "conv.grad_norm_tol") cfg.conv.grad_norm_tol = to_double(key, value);
    else if (key == "conv.window") cfg.conv.window = static_cast<int>(to_long(key, value));
    else if (key == "conv.check_every") cfg.conv.check_every = to_long(key, value);
    else if (key == "conv.min_iters") cfg.conv.min_iters = to_long(key, value);
    else if (key == "retrain.iters") cfg.retrain_iters = to_long(key, value);
    else if (key == "sweep.angles") cfg.sweep_angles = static_cast<int>(to_long(key, value));
    else if (key == "sweep.retrain_iters") cfg.sweep_retrain_iters = to_long(key, value);
    else if (key == "model.softplus_beta") cfg.softplus_beta = to_double(key, value);
    else if (key == "mmd.bandwidth") cfg.mmd_bandwidth = to_double(key, value);
    else if (key == "boost.restarts") cfg.boost_restarts = static_cast<int>(to_long(key, value));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> tokenize_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        entries.emplace_back(key, value);
    }
    return entries;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const auto entries = tokenize_config(text);
    RunConfig cfg;
    for (const auto& [k, v] : entries)
        if (k == "experiment") cfg.experiment = parse_experiment(v);
    apply_experiment_defaults(cfg);
    for (const auto& [k, v] : entries) apply_key(cfg, k, v);
    cfg.policy.validate();
    cfg.optim.validate();
    cfg.conv.validate();
    if (cfg.target_size < 1) throw std::invalid_argument("config: invalid value for 'target_size'");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string echo_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "experiment = " << to_string(cfg.experiment) << "\n";
    os << "method = " << to_string(cfg.method) << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "out_dir = " << cfg.out_dir << "\n";
    os << "target_size = " << cfg.target_size << "\n";
    os << "policy.max_splits = " << cfg.policy.max_splits << "\n";
    os << "policy.threshold = " << format_double(cfg.policy.threshold) << "\n";
    os << "policy.epsilon = " << format_double(cfg.policy.step_size) << "\n";
    os << "optim.method = " << optim_method_name(cfg.optim.method) << "\n";
    os << "optim.learning_rate = " << format_double(cfg.optim.learning_rate) << "\n";
    os << "optim.momentum = " << format_double(cfg.optim.momentum) << "\n";
    os << "optim.batch_size = " << cfg.optim.batch_size << "\n";
    os << "optim.max_iters = " << cfg.optim.max_iters << "\n";
    os << "conv.grad_norm_tol = " << format_double(cfg.conv.grad_norm_tol) << "\n";
    os << "conv.window = " << cfg.conv.window << "\n";
    os << "conv.check_every = " << cfg.conv.check_every << "\n";
    os << "conv.min_iters = " << cfg.conv.min_iters << "\n";
    os << "retrain.iters = " << cfg.retrain_iters << "\n";
    os << "sweep.angles = " << cfg.sweep_angles << "\n";
    os << "sweep.retrain_iters = " << cfg.sweep_retrain_iters << "\n";
    os << "model.softplus_beta = " << format_double(cfg.softplus_beta) << "\n";
    os << "mmd.bandwidth = " << format_double(cfg.mmd_bandwidth) << "\n";
    os << "boost.restarts = " << cfg.boost_restarts << "\n";
    return os.str();
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(echo_config(cfg))));
    return buf;
}

// ----------------------------------------------------------- synthesis

std::pair<Dataset, Network> synth_rbf_dataset(std::uint64_t seed) {
    Rng rng(seed);
    Network truth;
    truth.kind.tag = NeuronTag::Rbf1d;
    for (int i = 0; i < 15; ++i) {
        truth.neurons.push_back(rng.normal_vec(3, kPriorStddev));
        truth.weights.push_back(1.0);
    }
    Dataset data;
    for (int i = 0; i < 1000; ++i) {
        data.inputs.push_back({rng.uniform(-5.0, 5.0)});
        data.targets.push_back(forward(truth, data.inputs.back()));
    }
    return {std::move(data), std::move(truth)};
}

std::vector<Vec> synth_gmm_reference(std::uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double u = rng.uniform();
        double mean;
        if (u < 0.2) mean = -2.0;
        else if (u < 0.5) mean = 1.0;
        else mean = 3.0;
        out.push_back({rng.normal(mean, kGmmStddev)});
    }
    return out;
}

double median_heuristic_bandwidth(const std::vector<Vec>& points) {
    std::vector<double> dists;
    dists.reserve(points.size() * (points.size() - 1) / 2);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            dists.push_back(norm2(vsub(points[i], points[j])));
    if (dists.empty()) return 1.0;
    std::nth_element(dists.begin(), dists.begin() + static_cast<long>(dists.size() / 2),
                     dists.end());
    const double m = dists[dists.size() / 2];
    return m > 0.0 ? m : 1.0;
}

// ------------------------------------------------------------- growth

ToyProblem make_problem(const RunConfig& cfg, Rng& method_rng) {
    ToyProblem p;
    Rng& init_rng = method_rng;
    if (cfg.experiment == ExperimentKind::MmdCompress) {
        p.spec.tag = LossTag::Mmd;
        p.spec.reference = synth_gmm_reference(cfg.seed);
        p.data.inputs = p.spec.reference;
        p.start.kind.tag = NeuronTag::KernelParticle;
        p.start.kind.kernel_bandwidth = cfg.mmd_bandwidth > 0.0
                                            ? cfg.mmd_bandwidth
                                            : median_heuristic_bandwidth(p.spec.reference);
        p.init.kind = InitSpec::Kind::UniformBox;
        p.init.box_lo = {-5.0};
        p.init.box_hi = {-3.0};
        p.start.neurons.push_back(p.init.draw(1, init_rng));
        p.start.weights.push_back(1.0);
    } else {
        auto [data, truth] = synth_rbf_dataset(cfg.seed);
        p.data = std::move(data);
        p.spec.tag = LossTag::SquaredError;
        p.start.kind.tag = NeuronTag::Rbf1d;
        p.init.kind = InitSpec::Kind::GaussianIso;
        p.init.stddev = kPriorStddev;
        p.start.neurons.push_back(p.init.draw(3, init_rng));
        p.start.weights.push_back(1.0);
    }
    return p;
}

namespace {

void append_trace_rows(GrowthResult& res, int round, const Network& net,
                       const DescentResult& descent_result) {
    for (const auto& t : descent_result.trace)
        res.rows.push_back({round, t.iter, net.size(), t.loss_value, ""});
}

std::string split_event_text(const SplitEvent& ev) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "split parent=%d lambda=%.9g eps=%.9g", ev.parent_index,
                  ev.lambda_min, ev.epsilon);
    return buf;
}

}  // namespace

GrowthResult run_growth(const RunConfig& cfg, const Dataset& data, const LossSpec& spec,
                        const Network& start, const InitSpec& init, Rng& method_rng) {
    GrowthResult res;
    res.net = start;

    if (cfg.method == GrowthMethod::Scratch) {
        // fresh net at the target size, budget = the sum of all phase budgets
        Network net = start;
        while (net.size() < cfg.target_size) {
            net.neurons.push_back(init.draw(net.dim(), method_rng));
            net.weights.push_back(1.0);
        }
        if (spec.tag == LossTag::Mmd) {
            const double w = 1.0 / static_cast<double>(net.size());
            net.weights.assign(net.neurons.size(), w);
        }
        OptimSpec optim = cfg.optim;
        optim.max_iters = cfg.optim.max_iters * cfg.target_size;
        const DescentResult dr = descend(net, data, spec, optim, cfg.conv);
        append_trace_rows(res, 0, dr.net, dr);
        res.net = dr.net;
        res.phase_nets.push_back(dr.net);
        if (dr.status == DescentStatus::Diverged) {
            res.diverged = true;
            res.message = dr.message;
        }
        return res;
    }

    int round = 0;
    {
        const DescentResult dr = descend(res.net, data, spec, cfg.optim, cfg.conv);
        res.net = dr.net;
        append_trace_rows(res, round, res.net, dr);
        res.phase_nets.push_back(res.net);
        if (dr.status == DescentStatus::Diverged) {
            res.diverged = true;
            res.message = dr.message;
            return res;
        }
    }

    while (res.net.size() < cfg.target_size) {
        ++round;
        bool trained_in_growth = false;
        switch (cfg.method) {
            case GrowthMethod::OptimalSplit: {
                auto [grown, events] = split_round(res.net, data, spec, cfg.policy);
                if (events.empty()) {
                    res.rows.push_back({round, 0, res.net.size(),
                                        loss(res.net, data, spec),
                                        "stable: no splitting index below threshold"});
                    return res;
                }
                res.net = std::move(grown);
                for (auto& ev : events) {
                    ev.round = round;
                    res.events.push_back(ev);
                    res.rows.push_back({round, 0, res.net.size(), loss(res.net, data, spec),
                                        split_event_text(ev)});
                }
                break;
            }
            case GrowthMethod::RandomSplit: {
                auto [grown, ev] = random_split(res.net, method_rng, cfg.policy.step_size);
                res.net = std::move(grown);
                ev.round = round;
                res.events.push_back(ev);
                res.rows.push_back({round, 0, res.net.size(), loss(res.net, data, spec),
                                    split_event_text(ev)});
                break;
            }
            case GrowthMethod::NewInit:
                res.net = new_initialization(res.net, method_rng, init);
                res.rows.push_back({round, 0, res.net.size(), loss(res.net, data, spec),
                                    "new neuron appended"});
                break;
            case GrowthMethod::GradientBoost:
                res.net = gradient_boost_step(res.net, data, spec, cfg.optim, cfg.conv, init,
                                              method_rng, cfg.boost_restarts);
                trained_in_growth = true;
                res.rows.push_back({round, cfg.optim.max_iters, res.net.size(),
                                    loss(res.net, data, spec), "boosted neuron fitted"});
                break;
            case GrowthMethod::Scratch:
                break;  // handled above
        }

        if (!trained_in_growth) {
            const DescentResult dr = descend(res.net, data, spec, cfg.optim, cfg.conv);
            res.net = dr.net;
            append_trace_rows(res, round, res.net, dr);
            if (dr.status == DescentStatus::Diverged) {
                res.diverged = true;
                res.message = dr.message;
                res.phase_nets.push_back(res.net);
                return res;
            }
        }
        res.phase_nets.push_back(res.net);
    }
    return res;
}

// -------------------------------------------------------- measurements

std::vector<AngleGain> angle_sweep(const Network& net, const Dataset& data, const LossSpec& spec,
                                   int neuron, double eps, int n_angles, long retrain_iters,
                                   const OptimSpec& optim) {
    if (n_angles < 4) throw std::invalid_argument("angle_sweep: need at least 4 angles");
    const SymMat s = splitting_matrix(net, data, spec, neuron);
    const auto pairs = eig_sym(s);
    const EigenPair& low = pairs.front();
    if (low.value >= 0.0)
        throw std::invalid_argument("angle_sweep: neuron " + std::to_string(neuron) +
                                    " has splitting index " + std::to_string(low.value) +
                                    " >= 0, sweep refused");
    // orthonormal partner spanning the sweep plane
    Vec partner = pairs.back().vector;
    axpy(-dot(partner, low.vector), low.vector, partner);
    const double nrm = norm2(partner);
    if (nrm < 1e-12)
        throw std::invalid_argument("angle_sweep: degenerate spectrum, no sweep plane");
    for (auto& v : partner) v /= nrm;

    OptimSpec retrain = optim;
    retrain.max_iters = retrain_iters;
    ConvergenceSpec never;
    never.grad_norm_tol = 1e-300;  // fixed budget: the same for every angle

    const double before = loss(net, data, spec);
    std::vector<AngleGain> out;
    out.reserve(static_cast<std::size_t>(n_angles));
    for (int a = 0; a < n_angles; ++a) {
        const double phi = 2.0 * M_PI * static_cast<double>(a) / static_cast<double>(n_angles);
        Vec dir = scaled(low.vector, std::cos(phi));
        axpy(std::sin(phi), partner, dir);
        Network split = split_neuron(net, neuron, dir, eps);
        if (retrain_iters > 0) split = descend(split, data, spec, retrain, never).net;
        out.push_back({phi, before - loss(split, data, spec)});
    }
    return out;
}

std::vector<NeuronGain> eigen_vs_gain(const Network& net, const Dataset& data,
                                      const LossSpec& spec, double eps, long retrain_iters,
                                      const OptimSpec& optim) {
    OptimSpec retrain = optim;
    retrain.max_iters = retrain_iters;
    ConvergenceSpec never;
    never.grad_norm_tol = 1e-300;

    const auto candidates = splitting_candidates(net, data, spec);
    std::vector<NeuronGain> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        const double gain = measure_split_gain(net, data, spec, c, eps,
                                               retrain_iters > 0 ? &retrain : nullptr, &never);
        out.push_back({c.neuron_index, c.splitting_index, gain});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.lambda_min < b.lambda_min; });
    return out;
}

Network grown_optimum(const RunConfig& cfg, const ToyProblem& problem, int size, Rng& method_rng) {
    RunConfig grow_cfg = cfg;
    grow_cfg.method = GrowthMethod::OptimalSplit;
    grow_cfg.target_size = size;
    GrowthResult gr =
        run_growth(grow_cfg, problem.data, problem.spec, problem.start, problem.init, method_rng);

    // tighten so the curvature checks sit on a clean optimum
    OptimSpec tight = cfg.optim;
    tight.method = OptimMethod::SgdMomentum;
    tight.max_iters = 300000;
    ConvergenceSpec conv;
    conv.grad_norm_tol = 1e-8;
    conv.window = 3;
    return descend(gr.net, problem.data, problem.spec, tight, conv).net;
}

// ------------------------------------------------------------ file output

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string csv_header(const std::string& hash, const std::string& columns) {
    return "# config_hash=" + hash + "\n" + columns + "\n";
}

void write_run_files(const RunConfig& cfg, const GrowthResult& res, const std::string& dir) {
    const std::string hash = config_hash_hex(cfg);

    std::ostringstream run;
    run << csv_header(hash, "round,iter,neuron_count,loss,event");
    for (const auto& r : res.rows)
        run << r.round << "," << r.iter << "," << r.neuron_count << ","
            << format_double(r.loss_value) << "," << r.event << "\n";
    write_file(dir + "/run.csv", run.str());

    std::ostringstream splits;
    splits << csv_header(hash, "round,parent_index,lambda_min,epsilon,child_a,child_b");
    for (const auto& ev : res.events)
        splits << ev.round << "," << ev.parent_index << "," << format_double(ev.lambda_min) << ","
               << format_double(ev.epsilon) << "," << ev.child_a << "," << ev.child_b << "\n";
    write_file(dir + "/splits.csv", splits.str());

    std::ostringstream model;
    std::string cols = "neuron,weight";
    for (int i = 0; i < res.net.dim(); ++i) cols += ",theta" + std::to_string(i);
    model << csv_header(hash, cols);
    for (int l = 0; l < res.net.size(); ++l) {
        model << l << "," << format_double(res.net.weights[static_cast<std::size_t>(l)]);
        for (double v : res.net.neurons[static_cast<std::size_t>(l)])
            model << "," << format_double(v);
        model << "\n";
    }
    write_file(dir + "/final_model.csv", model.str());
}

}  // namespace

int run_experiment(const RunConfig& cfg) {
    const std::string dir = cfg.out_dir;
    std::filesystem::create_directories(dir);
    write_file(dir + "/config.echo", echo_config(cfg));
    const std::string hash = config_hash_hex(cfg);

    if (cfg.experiment == ExperimentKind::VerifyAll) {
        const VerifyReport rep = run_verification(cfg.seed);
        write_file(dir + "/verify_report.txt", format_report_text(rep));
        write_file(dir + "/verify_report.csv", format_report_csv(rep));
        std::fputs(format_report_text(rep).c_str(), stdout);
        return rep.all_pass() ? 0 : 1;
    }

    Rng method_rng(cfg.seed ^ kMethodStream);
    ToyProblem problem = make_problem(cfg, method_rng);

    if (cfg.experiment == ExperimentKind::RbfToy || cfg.experiment == ExperimentKind::MmdCompress) {
        const GrowthResult res =
            run_growth(cfg, problem.data, problem.spec, problem.start, problem.init, method_rng);
        write_run_files(cfg, res, dir);
        return 0;
    }

    if (cfg.experiment == ExperimentKind::AngleSweep) {
        const int at = std::max(1, cfg.target_size - 1);
        const Network opt = grown_optimum(cfg, problem, at, method_rng);
        const auto cands = splitting_candidates(opt, problem.data, problem.spec);
        int top = 0;
        for (int l = 1; l < static_cast<int>(cands.size()); ++l)
            if (cands[static_cast<std::size_t>(l)].splitting_index <
                cands[static_cast<std::size_t>(top)].splitting_index)
                top = l;
        const auto rows =
            angle_sweep(opt, problem.data, problem.spec, top, cfg.policy.step_size,
                        cfg.sweep_angles, cfg.sweep_retrain_iters, cfg.optim);
        std::ostringstream os;
        os << csv_header(hash, "angle_rad,loss_decrease");
        for (const auto& r : rows)
            os << format_double(r.angle) << "," << format_double(r.gain) << "\n";
        write_file(dir + "/angle_sweep.csv", os.str());
        return 0;
    }

    // EigenVsGain
    const int at = std::max(1, cfg.target_size - 1);
    const Network opt = grown_optimum(cfg, problem, at, method_rng);
    const auto rows = eigen_vs_gain(opt, problem.data, problem.spec, cfg.policy.step_size,
                                    cfg.retrain_iters, cfg.optim);
    std::ostringstream os;
    os << csv_header(hash, "neuron,lambda_min,gain");
    for (const auto& r : rows)
        os << r.neuron << "," << format_double(r.lambda_min) << "," << format_double(r.gain)
           << "\n";
    write_file(dir + "/eigen_gain.csv", os.str());
    return 0;
}

}  // namespace splitsd
