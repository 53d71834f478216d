// Copyright 2026 The vbscale Authors
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


#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vbscale/arnn.hpp"
#include "vbscale/families.hpp"
#include "vbscale/fermion_tfd.hpp"
#include "vbscale/skewlinalg.hpp"
#include "vbscale/stabilizer_cmi.hpp"
#include "vbscale/tfim_tfd.hpp"

#ifndef VBSCALE_VERSION
#define VBSCALE_VERSION "dev"
#endif

using json = nlohmann::json;
using namespace vbscale;

namespace {

enum Exit { kOk = 0, kInvalidInput = 2, kNumerical = 3, kNoWidth = 4 };

class InvalidInput : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

// Tabular output plus the manifest that describes how it was produced.
struct Output {
    std::string path;  // empty: stdout
    std::string manifest_path;
    std::ostringstream csv;
    json manifest;

    void begin(const std::string &subcommand, json params, std::uint64_t seed) {
        manifest = {{"subcommand", subcommand},
                    {"parameters", std::move(params)},
                    {"seed", seed},
                    {"version", VBSCALE_VERSION},
                    {"timestamp", utc_now()}};
        csv << std::setprecision(15);
    }

    void finish() {
        if (path.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream f(path);
            if (!f) {
                throw InvalidInput("cannot write " + path);
            }
            f << csv.str();
        }
        std::string mpath = manifest_path;
        if (mpath.empty() && !path.empty()) {
            mpath = path + ".manifest.json";
        }
        if (!mpath.empty()) {
            std::ofstream m(mpath);
            if (!m) {
                throw InvalidInput("cannot write " + mpath);
            }
            m << manifest.dump(2) << '\n';
        }
    }
};

void add_output_flags(CLI::App *cmd, Output &out) {
    cmd->add_option("--out", out.path, "CSV destination (default stdout)");
    cmd->add_option("--manifest", out.manifest_path, "manifest destination (default <out>.manifest.json)");
}

// ---- cmi-stabilizer ----

struct StabilizerArgs {
    std::string system;
    std::size_t toric = 0;
    std::string cut = "mid";
    std::string emit;
};

ZCheckSystem read_system(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path);
    }
    json j;
    try {
        in >> j;
        const auto n = j.at("n").get<std::size_t>();
        GF2Matrix m(0, n);
        for (const auto &row : j.at("z_checks")) {
            const auto bits = bits_from_string(row.get<std::string>());
            if (bits.size() != n) {
                throw InvalidInput("check row length differs from n");
            }
            m.append_row(bits);
        }
        BitString s(m.rows(), 0);
        if (j.contains("syndrome")) {
            s = bits_from_string(j["syndrome"].get<std::string>());
        }
        return ZCheckSystem(std::move(m), std::move(s));
    } catch (const json::exception &e) {
        throw InvalidInput(std::string("malformed system file: ") + e.what());
    }
}

json system_json(const ZCheckSystem &sys) {
    json rows = json::array();
    for (std::size_t r = 0; r < sys.m().rows(); ++r) {
        rows.push_back(to_string(sys.m().row(r)));
    }
    return {{"n", sys.n()}, {"z_checks", rows}, {"syndrome", to_string(sys.syndrome())}};
}

// "mid", a prefix length, or a comma-separated list of A positions.
Bipartition parse_cut(const std::string &text, std::size_t n) {
    if (text == "mid") {
        return Bipartition::middle(n);
    }
    std::vector<std::size_t> a;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            a.push_back(std::stoul(item, &used));
            if (used != item.size()) {
                throw InvalidInput("bad cut entry '" + item + "'");
            }
        } catch (const std::logic_error &) {
            throw InvalidInput("bad cut entry '" + item + "'");
        }
    }
    if (a.size() == 1 && text.find(',') == std::string::npos) {
        return Bipartition::prefix(n, a[0]);
    }
    return Bipartition::from_subset(n, a);
}

int cmd_cmi_stabilizer(const StabilizerArgs &args, Output &out) {
    if (args.system.empty() == (args.toric == 0)) {
        throw InvalidInput("give exactly one of --system or --toric");
    }
    std::optional<ZCheckSystem> sys;
    Bipartition cut;
    if (args.toric != 0) {
        const auto t = build_toric(args.toric);
        sys.emplace(t.plaquettes);
        cut = args.cut == "mid" ? t.label_cut() : parse_cut(args.cut, t.n_qubits());
    } else {
        sys.emplace(read_system(args.system));
        cut = parse_cut(args.cut, sys->n());
    }
    if (!sys->feasible()) {
        throw InvalidInput("syndrome is inconsistent with the checks");
    }
    if (!args.emit.empty()) {
        std::ofstream(args.emit) << system_json(*sys).dump(2) << '\n';
    }
    out.begin("cmi-stabilizer",
              {{"system", args.system}, {"toric", args.toric}, {"cut", args.cut}, {"n", sys->n()}}, 0);
    out.csv << "n,rank,method,cmi_bits\n";
    const auto rf = cmi_rank_formula(sys->m(), cut);
    out.csv << sys->n() << ',' << sys->rank() << ',' << to_string(rf.method) << ',' << rf.value_bits << '\n';
    if (sys->support_dimension() <= kMaxEnumerableDimension) {
        const auto bf = cmi_brute_force(*sys, cut);
        out.csv << sys->n() << ',' << sys->rank() << ',' << to_string(bf.method) << ',' << bf.value_bits << '\n';
    }
    out.finish();
    return kOk;
}

// ---- scaling-curve ----

struct CurveArgs {
    std::string family = "checkerboard";
    double gamma = 1.0;
    std::vector<std::size_t> sizes;
    std::string axis = "vertical";
};

int cmd_scaling_curve(const CurveArgs &args, Output &out) {
    if (args.sizes.size() < 3) {
        throw InvalidInput("a slope needs at least three sizes");
    }
    out.begin("scaling-curve",
              {{"family", args.family}, {"gamma", args.gamma}, {"sizes", args.sizes}, {"axis", args.axis}}, 0);
    std::vector<double> xs;
    std::vector<double> ys;
    if (args.family == "toric") {
        out.csv << "L,cmi_bits,n_checks\n";
        for (auto l : args.sizes) {
            const auto c = toric_cmi(l);
            out.csv << l << ',' << c.value_bits << ',' << l * l << '\n';
            xs.push_back(static_cast<double>(l));
            ys.push_back(c.value_bits);
        }
    } else if (args.family == "checkerboard" || args.family == "single") {
        const double g = args.family == "single" ? 0.0 : args.gamma;
        const auto axis = args.axis == "horizontal" ? CutAxis::horizontal : CutAxis::vertical;
        out.csv << "L,gamma,cmi_bits,n_checks,n_crossing\n";
        for (const auto &p : checkerboard_cmi_curve(g, args.sizes, axis)) {
            out.csv << p.l << ',' << g << ',' << p.cmi.value_bits << ',' << p.n_checks << ',' << p.n_crossing << '\n';
            xs.push_back(static_cast<double>(p.l));
            ys.push_back(p.cmi.value_bits);
        }
    } else {
        throw InvalidInput("unknown family '" + args.family + "'");
    }
    const auto fit = fit_loglog_slope(xs, ys);
    out.manifest["slope"] = {{"slope", fit.slope}, {"stderr", fit.stderr_slope}, {"intercept", fit.intercept}};
    std::cerr << "slope " << fit.slope << " +- " << fit.stderr_slope << '\n';
    out.finish();
    return kOk;
}

// ---- tfd-cmi ----

struct TfdArgs {
    std::size_t n = 4;
    double beta = 1.0;
    double j = 1.0;
    double h = 0.6;
    std::string ordering = "separate";
    std::string cut = "mid";
    std::size_t samples = 100000;
    std::string method = "auto";
    std::uint64_t seed = 1;
};

int cmd_tfd(const TfdArgs &args, Output &out) {
    const auto t = build_tfd(BcsChain{args.n, args.j, args.h}, args.beta);
    const auto o = ordering_from_name(args.ordering, args.n);
    const std::size_t cut = args.cut == "mid" ? args.n : std::stoul(args.cut);
    TfdCmiMode mode = TfdCmiMode::automatic;
    if (args.method == "exact") {
        mode = TfdCmiMode::exact;
    } else if (args.method == "sampled") {
        mode = TfdCmiMode::sampled;
    } else if (args.method != "auto") {
        throw InvalidInput("unknown method '" + args.method + "'");
    }
    std::mt19937_64 rng(args.seed);
    const auto r = tfd_cmi(t, o, cut, args.samples, rng, mode);
    out.begin("tfd-cmi",
              {{"n", args.n}, {"beta", args.beta}, {"j", args.j}, {"h", args.h}, {"ordering", args.ordering},
               {"cut", cut}, {"samples", args.samples}, {"method", to_string(r.method)}},
              args.seed);
    out.manifest["regularized_pairing"] = t.regularized;
    out.csv << "n,beta,ordering,cmi_bits,stderr\n";
    out.csv << args.n << ',' << args.beta << ',' << args.ordering << ',' << r.value_bits << ','
            << r.stderr_bits.value_or(0.0) << '\n';
    out.finish();
    return kOk;
}

// ---- tfim-cmi ----

struct TfimArgs {
    std::size_t n = 4;
    double beta = 1.0;
    double j = 1.0;
    double h = 0.6;
    std::string method = "exact";
    std::size_t steps = 100000;
    std::uint64_t seed = 1;
};

int cmd_tfim(const TfimArgs &args, Output &out) {
    const TfimModel m{args.n, args.j, args.h};
    m.validate();
    if (!(args.beta >= 0.0)) {
        throw InvalidInput("beta must be nonnegative");
    }
    CmiResult r;
    if (args.method == "exact") {
        r = cmi_exact(m, args.beta);
    } else if (args.method == "mcmc") {
        std::mt19937_64 rng(args.seed);
        r = cmi_mcmc(m, args.beta, McmcOptions{args.steps, 0, 50}, rng);
    } else if (args.method == "smallbeta") {
        r = {small_beta_formula(args.n, args.beta, args.j, args.h), CmiMethod::small_beta, std::nullopt};
    } else {
        throw InvalidInput("unknown method '" + args.method + "'");
    }
    out.begin("tfim-cmi",
              {{"n", args.n}, {"beta", args.beta}, {"j", args.j}, {"h", args.h}, {"method", args.method},
               {"steps", args.steps}},
              args.seed);
    out.manifest["log_partition_function"] = partition_function(m, args.beta).log_abs;
    out.csv << "n,beta,j,h,method,cmi_bits,stderr\n";
    out.csv << args.n << ',' << args.beta << ',' << args.j << ',' << args.h << ',' << args.method << ','
            << r.value_bits << ',' << r.stderr_bits.value_or(0.0) << '\n';
    out.finish();
    return kOk;
}

// ---- sweep ----

struct SweepArgs {
    std::string family = "checkerboard";
    double gamma = 1.0;
    double beta = 0.1;
    double j = 1.0;
    double h = 0.6;
    std::string ordering = "separate";
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> widths = kDefaultWidthGrid;
    std::string checkpoint_dir;
    TrainConfig cfg;
};

std::unique_ptr<Target> make_target(const SweepArgs &a, std::size_t size) {
    if (a.family == "checkerboard") {
        return checkerboard_target(size, a.gamma);
    }
    if (a.family == "toric") {
        return toric_target(size);
    }
    if (a.family == "tfd") {
        const auto t = build_tfd(BcsChain{size, a.j, a.h}, a.beta);
        return tfd_target(t, ordering_from_name(a.ordering, size));
    }
    if (a.family == "bell") {
        return bell_chain_target(size);
    }
    if (a.family == "delta") {
        return delta_target(size);
    }
    throw InvalidInput("unknown family '" + a.family + "'");
}

// Flat little-endian doubles in flatten() order, with a JSON header next to it.
void save_checkpoint(const std::filesystem::path &dir, std::size_t size, std::size_t width, std::size_t seed,
                     const ArnnModel &m) {
    std::filesystem::create_directories(dir);
    const std::string stem = "size" + std::to_string(size) + "_w" + std::to_string(width) + "_s" + std::to_string(seed);
    const Eigen::VectorXd flat = m.params().flatten();
    std::ofstream bin(dir / (stem + ".bin"), std::ios::binary);
    bin.write(reinterpret_cast<const char *>(flat.data()), static_cast<std::streamsize>(flat.size() * sizeof(double)));
    json layout = json::array();
    for (const auto &[name, len] : ArnnParams::layout(width)) {
        layout.push_back({{"name", name}, {"length", len}});
    }
    std::ofstream(dir / (stem + ".json")) << json{{"n_sites", m.n_sites()},
                                                  {"width", width},
                                                  {"dtype", "float64"},
                                                  {"count", flat.size()},
                                                  {"layout", layout}}
                                                 .dump(2)
                                          << '\n';
}

int cmd_sweep(const SweepArgs &args, Output &out) {
    if (args.sizes.empty()) {
        throw InvalidInput("--sizes is required");
    }
    out.begin("sweep",
              {{"family", args.family},
               {"gamma", args.gamma},
               {"beta", args.beta},
               {"j", args.j},
               {"h", args.h},
               {"ordering", args.ordering},
               {"sizes", args.sizes},
               {"widths", args.widths},
               {"target_fidelity", args.cfg.target_fidelity},
               {"seeds", args.cfg.seeds},
               {"learning_rate", args.cfg.learning_rate},
               {"batch_size", args.cfg.batch_size},
               {"max_epochs", args.cfg.max_epochs},
               {"steps_per_epoch", args.cfg.steps_per_epoch},
               {"eval_every", args.cfg.eval_every},
               {"eval_samples", args.cfg.eval_samples}},
              args.cfg.seed);
    out.csv << "size,width,seed,final_fidelity,epochs,success\n";
    json summary = json::array();
    bool all_found = true;
    for (auto size : args.sizes) {
        const auto target = make_target(args, size);
        const auto r = sweep_min_width(*target, size, args.widths, args.cfg);
        for (const auto &c : r.cells) {
            out.csv << size << ',' << c.width << ',' << c.seed << ',' << c.result.final_fidelity << ','
                    << c.result.epochs << ',' << (c.result.success ? 1 : 0) << '\n';
        }
        if (!args.checkpoint_dir.empty() && r.n_d_min) {
            // Retrain the winning cell deterministically to export it.
            for (const auto &c : r.cells) {
                if (c.width == *r.n_d_min && c.result.success) {
                    std::seed_seq seq{args.cfg.seed, static_cast<std::uint64_t>(size),
                                      static_cast<std::uint64_t>(c.width), static_cast<std::uint64_t>(c.seed)};
                    std::mt19937_64 init(seq);
                    auto model = ArnnModel::random(target->n_sites(), c.width, init);
                    train(model, *target, args.cfg, init());
                    save_checkpoint(args.checkpoint_dir, size, c.width, c.seed, model);
                }
            }
        }
        all_found = all_found && r.n_d_min.has_value();
        summary.push_back({{"size", size},
                           {"n_d_min", r.n_d_min ? json(*r.n_d_min) : json(nullptr)},
                           {"widths", r.widths},
                           {"best_fidelity", r.best_fidelity}});
        std::cerr << "size " << size << ": n_d_min = " << (r.n_d_min ? std::to_string(*r.n_d_min) : "none") << '\n';
    }
    out.manifest["n_d_min"] = summary;
    out.finish();
    return all_found ? kOk : kNoWidth;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Amplitude mutual information and minimal autoregressive width"};
    app.require_subcommand(1);
    app.set_version_flag("--version", VBSCALE_VERSION);
    Output out;

    StabilizerArgs stab;
    auto *c1 = app.add_subcommand("cmi-stabilizer", "mutual information of a Z-check stabilizer distribution");
    c1->add_option("--system", stab.system, "JSON file {n, z_checks, syndrome}");
    c1->add_option("--toric", stab.toric, "use the toric code on an L x L torus");
    c1->add_option("--cut", stab.cut, "mid, a prefix length, or comma-separated A positions");
    c1->add_option("--emit", stab.emit, "also write the system as JSON");
    add_output_flags(c1, out);

    CurveArgs curve;
    auto *c2 = app.add_subcommand("scaling-curve", "CMI against lattice size with a log-log slope");
    c2->add_option("--family", curve.family, "checkerboard | toric | single")
        ->check(CLI::IsMember({"checkerboard", "toric", "single"}));
    c2->add_option("--gamma", curve.gamma, "checkerboard exponent")->check(CLI::Range(0.0, 1.0));
    c2->add_option("--sizes", curve.sizes, "lattice sizes L")->required();
    c2->add_option("--axis", curve.axis, "vertical | horizontal")->check(CLI::IsMember({"vertical", "horizontal"}));
    add_output_flags(c2, out);

    TfdArgs tfd;
    auto *c3 = app.add_subcommand("tfd-cmi", "thermofield double of the p-wave chain");
    c3->set_help_flag("--help", "print this help");  // -h is the field
    c3->add_option("--n", tfd.n, "sites per copy")->check(CLI::PositiveNumber);
    c3->add_option("--beta", tfd.beta, "inverse temperature");
    c3->add_option("--j", tfd.j, "coupling");
    c3->add_option("--h", tfd.h, "field");
    c3->add_option("--ordering", tfd.ordering, "separate | alternate")
        ->check(CLI::IsMember({"separate", "alternate"}));
    c3->add_option("--cut", tfd.cut, "mid or a token count");
    c3->add_option("--samples", tfd.samples, "samples for the sampled estimator");
    c3->add_option("--method", tfd.method, "auto | exact | sampled");
    c3->add_option("--seed", tfd.seed, "RNG seed");
    add_output_flags(c3, out);

    TfimArgs tfim;
    auto *c4 = app.add_subcommand("tfim-cmi", "copy-cut mutual information of the transverse-field Ising TFD");
    c4->set_help_flag("--help", "print this help");  // -h is the field
    c4->add_option("--n", tfim.n, "sites");
    c4->add_option("--beta", tfim.beta, "inverse temperature");
    c4->add_option("--j", tfim.j, "coupling");
    c4->add_option("--h", tfim.h, "field");
    c4->add_option("--method", tfim.method, "exact | mcmc | smallbeta")
        ->check(CLI::IsMember({"exact", "mcmc", "smallbeta"}));
    c4->add_option("--steps", tfim.steps, "Metropolis steps");
    c4->add_option("--seed", tfim.seed, "RNG seed");
    add_output_flags(c4, out);

    SweepArgs sw;
    auto *c5 = app.add_subcommand("sweep", "smallest network width reaching the fidelity target");
    c5->set_help_flag("--help", "print this help");  // -h is the field
    c5->add_option("--family", sw.family, "checkerboard | toric | tfd | bell | delta")
        ->check(CLI::IsMember({"checkerboard", "toric", "tfd", "bell", "delta"}));
    c5->add_option("--gamma", sw.gamma, "checkerboard exponent");
    c5->add_option("--beta", sw.beta, "TFD inverse temperature");
    c5->add_option("--j", sw.j, "TFD coupling");
    c5->add_option("--h", sw.h, "TFD field");
    c5->add_option("--ordering", sw.ordering, "TFD ordering");
    c5->add_option("--sizes", sw.sizes, "family sizes")->required();
    c5->add_option("--widths", sw.widths, "ascending width grid");
    c5->add_option("--target-fid", sw.cfg.target_fidelity, "fidelity target");
    c5->add_option("--seeds", sw.cfg.seeds, "seeds per width");
    c5->add_option("--lr", sw.cfg.learning_rate, "Adam learning rate");
    c5->add_option("--batch", sw.cfg.batch_size, "batch size");
    c5->add_option("--max-epochs", sw.cfg.max_epochs, "epoch cap");
    c5->add_option("--steps-per-epoch", sw.cfg.steps_per_epoch, "Adam steps per epoch");
    c5->add_option("--eval-every", sw.cfg.eval_every, "epochs between fidelity evaluations");
    c5->add_option("--eval-samples", sw.cfg.eval_samples, "samples for sampled fidelity");
    c5->add_option("--seed", sw.cfg.seed, "base seed");
    c5->add_option("--checkpoint-dir", sw.checkpoint_dir, "write the winning models here");
    add_output_flags(c5, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*c1) {
            return cmd_cmi_stabilizer(stab, out);
        }
        if (*c2) {
            return cmd_scaling_curve(curve, out);
        }
        if (*c3) {
            return cmd_tfd(tfd, out);
        }
        if (*c4) {
            return cmd_tfim(tfim, out);
        }
        if (*c5) {
            return cmd_sweep(sw, out);
        }
    } catch (const InvalidInput &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const InfeasibleSystem &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const SingularMatrix &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kInvalidInput;
}
