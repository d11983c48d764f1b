// Copyright 2026 The fbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fbqc: inspect fusion networks, run decoding campaigns, emit CSV data.
//
// Exit codes: 0 success, 2 usage/config error, 3 runtime/I-O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbqc/config.hpp"
#include "fbqc/montecarlo.hpp"
#include "fbqc/report.hpp"
#include "fbqc/serialization.hpp"

namespace fs = std::filesystem;
using namespace fbqc;

namespace {

constexpr int kUsage = 2;
constexpr int kRuntime = 3;

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Effective settings of one command: config-file section overlaid by flags.
class Settings {
   public:
    Settings(std::string section, CampaignConfig::Section values)
        : section_(std::move(section)), v_(std::move(values)) {
    }

    bool has(const std::string &key) const {
        return v_.count(key) > 0;
    }
    std::string str(const std::string &key, const std::string &def) const {
        auto it = v_.find(key);
        return it == v_.end() ? def : it->second;
    }
    double real(const std::string &key, double def, double lo, double hi) const {
        if (!has(key)) {
            return def;
        }
        double v;
        try {
            std::size_t used = 0;
            v = std::stod(v_.at(key), &used);
            if (used != v_.at(key).size()) {
                throw std::invalid_argument("");
            }
        } catch (const std::exception &) {
            throw ConfigError(key + ": not a number: '" + v_.at(key) + "'");
        }
        if (!(v >= lo && v <= hi)) {
            throw ConfigError(key + " must lie in [" + format_double(lo) + ", " + format_double(hi) + "]");
        }
        return v;
    }
    long long integer(const std::string &key, long long def, long long lo, long long hi) const {
        if (!has(key)) {
            return def;
        }
        long long v;
        try {
            std::size_t used = 0;
            v = std::stoll(v_.at(key), &used);
            if (used != v_.at(key).size()) {
                throw std::invalid_argument("");
            }
        } catch (const std::exception &) {
            throw ConfigError(key + ": not an integer: '" + v_.at(key) + "'");
        }
        if (v < lo || v > hi) {
            throw ConfigError(key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return v;
    }
    bool boolean(const std::string &key, bool def) const {
        if (!has(key)) {
            return def;
        }
        const std::string &s = v_.at(key);
        if (s == "true" || s == "1" || s == "yes") {
            return true;
        }
        if (s == "false" || s == "0" || s == "no") {
            return false;
        }
        throw ConfigError(key + ": expected true/false");
    }
    LatticeKind kind() const {
        std::string k = str("kind", "six-ring");
        if (k == "six-ring" || k == "6-ring") {
            return LatticeKind::SixRing;
        }
        if (k == "four-star" || k == "4-star") {
            return LatticeKind::FourStar;
        }
        throw ConfigError("kind must be six-ring or four-star");
    }
    std::vector<int> sizes(const std::vector<int> &def) const {
        if (!has("sizes")) {
            return def;
        }
        std::vector<int> out;
        std::stringstream ss(v_.at("sizes"));
        for (std::string tok; std::getline(ss, tok, ',');) {
            try {
                std::size_t used = 0;
                int L = std::stoi(tok, &used);
                if (used != tok.size()) {
                    throw std::invalid_argument("");
                }
                out.push_back(L);
            } catch (const std::exception &) {
                throw ConfigError("sizes: bad entry '" + tok + "'");
            }
        }
        for (int L : out) {
            if (L < 2 || L > 64) {
                throw ConfigError("sizes must lie in [2, 64]");
            }
        }
        if (out.empty()) {
            throw ConfigError("sizes: empty list");
        }
        return out;
    }
    fs::path out_dir() const {
        if (has("out")) {
            return v_.at("out");
        }
        if (const char *env = std::getenv("FBQC_OUT_DIR")) {
            return env;
        }
        return ".";
    }

   private:
    std::string section_;
    CampaignConfig::Section v_;
};

/// Flag values captured per command; only flags actually given are applied.
struct FlagSet {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option *> options;
    std::set<std::string> switches;

    void add(CLI::App *app, const std::string &flag, const std::string &key, const std::string &help) {
        options[key] = app->add_option(flag, values[key], help);
    }
    void add_flag(CLI::App *app, const std::string &flag, const std::string &key, const std::string &help) {
        options[key] = app->add_flag(flag, help);
        switches.insert(key);
    }
    Settings merge(const std::string &section, const std::optional<CampaignConfig> &cfg) const {
        CampaignConfig::Section s = cfg ? cfg->section(section) : CampaignConfig::Section{};
        for (const auto &[key, opt] : options) {
            if (opt->count() > 0) {
                s[key] = switches.count(key) ? "true" : values.at(key);
            }
        }
        return Settings(section, s);
    }
};

std::ofstream open_out(const fs::path &path) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        throw RuntimeFailure("cannot write " + path.string());
    }
    return out;
}

void write_file(const fs::path &path, const std::string &text) {
    auto out = open_out(path);
    out << text;
    if (!out) {
        throw RuntimeFailure("write failed: " + path.string());
    }
}

int cmd_inspect(const Settings &s) {
    std::string example = s.str("example", "");
    if (!example.empty()) {
        FusionNetwork net;
        if (example == "fig3") {
            net = build_four_line_example();
        } else if (example == "fig4") {
            net = build_bell_ftfn_example();
        } else {
            throw ConfigError("example must be fig3 or fig4");
        }
        write_algebra_report(std::cout, algebra_report(net));
        auto agreement = oracle_agreement(net, outcome_assignments(net, 10, 50, 7));
        std::cout << "oracle agreement " << agreement.agree << "/" << agreement.assignments << "\n";
        if (s.boolean("dump_network", false)) {
            fs::path p = s.out_dir() / (example + ".network");
            write_file(p, network_to_string(net));
            std::cout << "wrote " << p.string() << "\n";
        }
        return 0;
    }
    LatticeKind kind = s.kind();
    int L = static_cast<int>(s.integer("size", 3, 2, 40));
    FusionNetwork net = build_lattice(kind, L);
    auto graphs = derive_syndrome_graphs(net);
    std::cout << to_string(kind) << " L=" << L << "\n";
    write_lattice_report(std::cout, net, graphs);
    fs::path dir = s.out_dir();
    std::string stem = std::string(to_string(kind)) + "_L" + std::to_string(L);
    if (s.boolean("graph", false)) {
        for (const SyndromeGraph *g : {&graphs.first, &graphs.second}) {
            fs::path p = dir / (stem + (g->primal ? "_primal" : "_dual") + ".edges");
            auto out = open_out(p);
            g->write_edge_list(out);
            std::cout << "wrote " << p.string() << "\n";
        }
    }
    if (s.boolean("dump_network", false)) {
        fs::path p = dir / (stem + ".network");
        write_file(p, network_to_string(net));
        std::cout << "wrote " << p.string() << "\n";
    }
    return 0;
}

int cmd_simulate(const Settings &s) {
    LatticeKind kind = s.kind();
    int L = static_cast<int>(s.integer("size", 8, 2, 40));
    HardwareAgnosticParams params{s.real("p_erasure", 0, 0, 1), s.real("p_error", 0, 0, 1)};
    if (s.has("p_fail") || s.has("p_loss") || s.has("encoded")) {
        if (s.has("p_erasure")) {
            throw ConfigError("give either p_erasure or the linear-optical parameters, not both");
        }
        LinearOpticalParams lo{s.real("p_fail", 0.25, 1e-9, 1), s.real("p_loss", 0, 0, 0.999999),
                               s.boolean("encoded", false)};
        params.p_erasure = effective_erasure(lo);
    }
    auto trials = static_cast<std::uint64_t>(s.integer("trials", 1000, 1, 1LL << 40));
    auto seed = static_cast<std::uint64_t>(s.integer("seed", 1, 0, std::numeric_limits<long long>::max()));
    int workers = static_cast<int>(s.integer("workers", 1, 1, 1024));
    LatticeContext ctx(kind, L);
    CurvePoint p = run_point(ctx, params, trials, point_seed(seed, kind, L, params.p_erasure, params.p_error), workers);
    write_points_csv(std::cout, {p});
    if (s.has("out")) {
        auto out = open_out(s.out_dir() / "point.csv");
        write_points_csv(out, {p});
    }
    if (auto n = static_cast<std::uint64_t>(s.integer("dump_matching", 0, 0, 1000))) {
        // Primal matching problems of the first n trials, for external checking.
        auto out = open_out(s.out_dir() / "matching_problems.txt");
        Decoder dec(ctx.graphs.first);
        TrialSample sample;
        std::uint64_t pseed = point_seed(seed, kind, L, params.p_erasure, params.p_error);
        for (std::uint64_t t = 0; t < std::min(n, trials); t++) {
            CounterRng rng(pseed, 2 * t);
            sample_hardware_agnostic(params, ctx.graphs.first.num_edges(), rng, sample);
            auto syn = compute_syndrome(ctx.graphs.first, sample.flipped, sample.erased);
            out << "# trial " << t << "\n";
            dec.build_matching_problem(syn.odd_vertices, sample.erased).write(out);
        }
    }
    return 0;
}

SweepSpec sweep_spec(const Settings &s) {
    SweepSpec spec;
    spec.kind = s.kind();
    spec.sizes = s.sizes({8, 10, 12});
    spec.c_erasure = s.real("c_erasure", 1, 0, 1e6);
    spec.c_error = s.real("c_error", 0, 0, 1e6);
    double lo = s.real("x_min", 0, 0, 1e6);
    double hi = s.real("x_max", 0, 0, 1e6);
    if (!s.has("x_min") || !s.has("x_max") || !(hi > lo)) {
        throw ConfigError("x_min < x_max must both be given");
    }
    spec.x_values = linspace(lo, hi, static_cast<int>(s.integer("points", 9, 2, 1000)));
    spec.trials_per_point = static_cast<std::uint64_t>(s.integer("trials", 15000, 1, 1LL << 40));
    spec.master_seed = static_cast<std::uint64_t>(s.integer("seed", 1, 0, std::numeric_limits<long long>::max()));
    spec.workers = static_cast<int>(s.integer("workers", 1, 1, 1024));
    try {
        spec.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return spec;
}

std::vector<CurvePoint> run_and_write_sweep(const SweepSpec &spec, const fs::path &dir) {
    auto points = run_sweep(spec, [](const CurvePoint &p) {
        std::cerr << "L=" << p.L << " x=" << format_double(p.x, 6) << " rate=" << format_double(p.rate(), 6) << "\n";
    });
    {
        auto out = open_out(dir / "points.csv");
        write_points_csv(out, points);
    }
    for (int L : spec.sizes) {
        auto out = open_out(dir / ("series_L" + std::to_string(L) + ".dat"));
        write_series(out, points, L);
    }
    return points;
}

int cmd_sweep(const Settings &s) {
    SweepSpec spec = sweep_spec(s);
    run_and_write_sweep(spec, s.out_dir());
    std::cout << "wrote " << (s.out_dir() / "points.csv").string() << "\n";
    return 0;
}

int cmd_threshold(const Settings &s) {
    SweepSpec spec = sweep_spec(s);
    fs::path dir = s.out_dir();
    auto points = run_and_write_sweep(spec, dir);
    try {
        ThresholdEstimate est = find_threshold(spec, points);
        auto out = open_out(dir / "threshold.csv");
        write_threshold_csv(out, {est});
        std::cout << to_string(spec.kind) << " threshold x* = " << format_double(est.x_star, 6) << " +/- "
                  << format_double(est.uncertainty, 3) << " (p_erasure* = " << format_double(est.p_erasure_star(), 6)
                  << ", p_error* = " << format_double(est.p_error_star(), 6) << ")\n";
        for (std::size_t i = 0; i < est.fits.size(); i++) {
            const auto &f = est.fits[i];
            std::cout << "  fit L=" << est.sizes[i] << " chi2=" << format_double(f.chi2, 4) << "\n";
        }
        for (int L : spec.sizes) {
            if (std::find(est.sizes.begin(), est.sizes.end(), L) == est.sizes.end()) {
                std::cout << "  fit L=" << L << " failed (skipped)\n";
            }
        }
    } catch (const NoCrossing &e) {
        std::cout << "no threshold: " << e.what() << "\n";
    }
    return 0;
}

int cmd_lossmap(const Settings &s) {
    double six = s.real("erasure_threshold", 0.1198, 1e-6, 1);
    double four = s.real("erasure_threshold_four_star", 0.0690, 1e-6, 1);
    double lo = s.real("p_fail_min", 1.0 / 64, 1e-6, 1);
    double hi = s.real("p_fail_max", 0.5, 1e-6, 1);
    int n = static_cast<int>(s.integer("points", 200, 2, 100000));
    if (!(hi > lo)) {
        throw ConfigError("p_fail_min must be below p_fail_max");
    }
    // Log-spaced grid plus the boosting points 2^-n inside the range.
    std::vector<double> grid;
    for (int i = 0; i < n; i++) {
        grid.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    }
    for (double b = 0.5; b >= lo; b /= 2) {
        if (b <= hi) {
            grid.push_back(b);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    struct Curve {
        const char *name;
        double threshold;
        bool encoded;
    };
    std::ostringstream csv;
    csv << "curve,p_fail,p_loss_star,boosting_point\n";
    for (Curve c : {Curve{"four-star", four, false}, Curve{"six-ring", six, false},
                    Curve{"six-ring-encoded", six, true}}) {
        double best_pf = 0, best_loss = -1;
        for (auto [pf, loss] : loss_failure_curve(c.threshold, c.encoded, grid)) {
            double lg = std::log2(pf);
            bool boost = std::abs(lg - std::round(lg)) < 1e-12;
            csv << c.name << "," << format_double(pf) << "," << format_double(loss) << "," << (boost ? 1 : 0) << "\n";
            if (loss > best_loss) {
                best_loss = loss, best_pf = pf;
            }
        }
        std::cout << c.name << ": best p_loss* = " << format_double(best_loss, 6) << " at p_fail = "
                  << format_double(best_pf, 6) << "\n";
    }
    fs::path p = s.out_dir() / "lossmap.csv";
    write_file(p, csv.str());
    std::cout << "wrote " << p.string() << "\n";
    return 0;
}

int cmd_algebra(const Settings &s) {
    if (!s.has("network")) {
        throw ConfigError("algebra needs --network FILE");
    }
    std::ifstream in(s.str("network", ""));
    if (!in) {
        throw RuntimeFailure("cannot read " + s.str("network", ""));
    }
    FusionNetwork net;
    try {
        net = read_network(in);
    } catch (const ParseError &e) {
        throw ConfigError(std::string("network file: ") + e.what());
    }
    write_algebra_report(std::cout, algebra_report(net));
    if (s.has("outcomes")) {
        // One character per outcome: + - or e (erased).
        std::string o = s.str("outcomes", "");
        if (o.size() != net.num_outcomes() || o.find_first_not_of("+-e") != std::string::npos) {
            throw ConfigError("outcomes must have one of +, -, e per fusion outcome (" +
                              std::to_string(net.num_outcomes()) + ")");
        }
        OutcomeVector ov;
        for (char c : o) {
            ov.push_back(c == '+' ? Outcome::Plus : c == '-' ? Outcome::Minus : Outcome::Erased);
        }
        auto [r, f] = network_groups(net);
        auto sym = symbolic_output_stabilizers(centralizer_in(r, f), net.outer_qubits, f);
        std::cout << "given outcomes:\n";
        for (const auto &st : sym.checks) {
            try {
                std::cout << "  check " << (evaluate_sign(st, ov) > 0 ? "satisfied" : "VIOLATED") << "\n";
            } catch (const ErasedDependency &) {
                std::cout << "  check unknown (erased outcome)\n";
            }
        }
        for (const auto &st : sym.outputs) {
            auto label = [&](std::size_t k) { return std::to_string(sym.outer[k] + 1); };
            try {
                std::cout << "  " << (evaluate_sign(st, ov) > 0 ? "+" : "-") << st.pauli.sparse_str(label) << "\n";
            } catch (const ErasedDependency &) {
                std::cout << "  ?" << st.pauli.sparse_str(label) << " (sign lost to erasure)\n";
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"fbqc: fusion-based quantum computation simulator"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "INI config file (one section per command)");

    std::map<std::string, FlagSet> flags;
    std::map<std::string, CLI::App *> subs;
    auto common = [&](const std::string &name, CLI::App *sub) {
        subs[name] = sub;
        FlagSet &f = flags[name];
        if (name != "lossmap" && name != "algebra") {
            f.add(sub, "--kind", "kind", "six-ring | four-star");
        }
        if (name != "algebra") {
            f.add(sub, "--out", "out", "output directory (default $FBQC_OUT_DIR or .)");
        }
        return &f;
    };

    auto *inspect = app.add_subcommand("inspect", "print network structure or a worked example");
    auto *fi = common("inspect", inspect);
    fi->add(inspect, "--size", "size", "lattice size L");
    fi->add(inspect, "--example", "example", "fig3 | fig4");
    fi->add_flag(inspect, "--graph", "graph", "write syndrome-graph edge lists");
    fi->add_flag(inspect, "--dump-network", "dump_network", "write the serialized network");

    auto *simulate = app.add_subcommand("simulate", "estimate the failure rate at one point");
    auto *fs_ = common("simulate", simulate);
    fs_->add(simulate, "--size", "size", "lattice size L");
    fs_->add(simulate, "--p-erasure", "p_erasure", "erasure probability per outcome");
    fs_->add(simulate, "--p-error", "p_error", "flip probability per outcome");
    fs_->add(simulate, "--p-fail", "p_fail", "fusion failure probability (linear optics)");
    fs_->add(simulate, "--p-loss", "p_loss", "photon loss probability (linear optics)");
    fs_->add_flag(simulate, "--encoded", "encoded", "use (2,2)-Shor encoded fusions");
    fs_->add(simulate, "--dump-matching", "dump_matching", "write the matching problems of the first N trials");

    for (const char *name : {"sweep", "threshold"}) {
        auto *sub = app.add_subcommand(name, std::string(name) == "sweep" ? "sweep x along a ray"
                                                                          : "sweep a ray and fit the threshold");
        auto *f = common(name, sub);
        f->add(sub, "--sizes", "sizes", "comma-separated lattice sizes");
        f->add(sub, "--c-erasure", "c_erasure", "ray coefficient of p_erasure");
        f->add(sub, "--c-error", "c_error", "ray coefficient of p_error");
        f->add(sub, "--x-min", "x_min", "first x value");
        f->add(sub, "--x-max", "x_max", "last x value");
        f->add(sub, "--points", "points", "number of x values");
    }
    for (const char *name : {"simulate", "sweep", "threshold"}) {
        auto *f = &flags[name];
        f->add(subs[name], "--trials", "trials", "trials per point");
        f->add(subs[name], "--seed", "seed", "master seed");
        f->add(subs[name], "--workers", "workers", "worker threads");
    }

    auto *lossmap = app.add_subcommand("lossmap", "loss threshold versus fusion failure probability");
    auto *fl = common("lossmap", lossmap);
    fl->add(lossmap, "--erasure-threshold", "erasure_threshold", "six-ring erasure threshold");
    fl->add(lossmap, "--erasure-threshold-four-star", "erasure_threshold_four_star", "four-star erasure threshold");
    fl->add(lossmap, "--p-fail-min", "p_fail_min", "smallest p_fail");
    fl->add(lossmap, "--p-fail-max", "p_fail_max", "largest p_fail");
    fl->add(lossmap, "--points", "points", "grid points");

    auto *algebra = app.add_subcommand("algebra", "stabilizer analysis of a serialized network");
    auto *fa = common("algebra", algebra);
    fa->add(algebra, "--network", "network", "network file");
    fa->add(algebra, "--outcomes", "outcomes", "outcome string of + - e");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        std::optional<CampaignConfig> cfg;
        if (!config_path.empty()) {
            cfg = CampaignConfig::load(config_path);
        }
        for (auto &[name, sub] : subs) {
            if (!sub->parsed()) {
                continue;
            }
            Settings s = flags[name].merge(name, cfg);
            if (name == "inspect") {
                return cmd_inspect(s);
            }
            if (name == "simulate") {
                return cmd_simulate(s);
            }
            if (name == "sweep") {
                return cmd_sweep(s);
            }
            if (name == "threshold") {
                return cmd_threshold(s);
            }
            if (name == "lossmap") {
                return cmd_lossmap(s);
            }
            if (name == "algebra") {
                return cmd_algebra(s);
            }
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidSize &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
