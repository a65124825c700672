// cdd: command-line front end for the weighted Chamfer-distance toolkit.
// Subcommands: gen, eval, curves, distill, train, compare. Every
// file-producing command drops a manifest.json capturing the resolved
// configuration so the run can be replayed bitwise.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cdd/cdd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Removes everything written so far if the command dies before finishing, so
// exit code 0 means "outputs fully written" and nothing else is left behind.
struct OutputGuard {
    std::vector<std::string> paths;
    bool committed = false;

    void add(const std::string& p) { paths.push_back(p); }
    ~OutputGuard() {
        if (committed) return;
        for (const auto& p : paths) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

void write_manifest(const std::string& path, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& outputs) {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["outputs"] = outputs;
    j["seed"] = seed;
    j["version"] = cdd::version_string;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

cdd::ShapeKind parse_shape(const std::string& s) {
    if (s == "sphere") return cdd::ShapeKind::sphere;
    if (s == "cube") return cdd::ShapeKind::cube;
    if (s == "torus") return cdd::ShapeKind::torus;
    throw std::invalid_argument("unknown shape '" + s + "' (valid: sphere, cube, torus)");
}

cdd::Vec3 parse_direction(const std::string& s) {
    const auto parts = cdd::detail::split_char(s, ',');
    if (parts.size() != 3) throw std::invalid_argument("--crop-dir expects X,Y,Z");
    cdd::Vec3 v;
    double* c[3] = {&v.x, &v.y, &v.z};
    for (int i = 0; i < 3; ++i) {
        if (!cdd::parse_double_token(parts[i], *c[i])) {
            throw std::invalid_argument("--crop-dir: invalid number '" + parts[i] + "'");
        }
    }
    const double n = std::sqrt(cdd::dot(v, v));
    if (!(n > 0.0)) throw std::invalid_argument("--crop-dir must be nonzero");
    return v * (1.0 / n);
}

std::string partial_path_for(const std::string& out) {
    const fs::path p(out);
    fs::path stem = p.stem();
    fs::path ext = p.extension();
    fs::path dir = p.parent_path();
    return (dir / (stem.string() + "_partial" + ext.string())).string();
}

// One "name=value" assignment.
std::pair<std::string, double> parse_assignment(const std::string& tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("expected name=value, got '" + tok + "'");
    }
    double v = 0.0;
    if (!cdd::parse_double_token(std::string_view(tok).substr(eq + 1), v)) {
        throw std::invalid_argument("invalid number in '" + tok + "'");
    }
    return {tok.substr(0, eq), v};
}

// Builds a weighting from a kind plus named parameter overrides; unnamed
// parameters fall back to the kind's reference point.
cdd::WeightingFunction build_weighting(cdd::WeightKind kind,
                                       const std::vector<std::pair<std::string, double>>& overrides) {
    std::vector<double> params = cdd::reference_point(kind).params;
    const auto& names = cdd::param_names(kind);
    for (const auto& [name, value] : overrides) {
        bool found = false;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) {
                params[i] = value;
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::invalid_argument(std::string(cdd::kind_name(kind)) +
                                        " has no parameter '" + name + "'");
        }
    }
    return cdd::make_weighting(kind, std::move(params));
}

// Comma-separated distribution list, e.g. "landau,normal:sigma=1.4,gamma:k=2,theta=2.5".
// A token with ':' starts a new distribution with its first parameter; a
// bare name=value token continues the previous one.
std::vector<cdd::WeightingFunction> parse_dist_list(const std::string& s) {
    struct Req {
        cdd::WeightKind kind;
        std::vector<std::pair<std::string, double>> overrides;
    };
    std::vector<Req> reqs;
    for (const auto& tok : cdd::detail::split_char(s, ',')) {
        if (tok.empty()) throw std::invalid_argument("--dist: empty entry");
        const auto colon = tok.find(':');
        if (colon != std::string::npos) {
            Req r{cdd::kind_from_name(tok.substr(0, colon)), {}};
            r.overrides.push_back(parse_assignment(tok.substr(colon + 1)));
            reqs.push_back(std::move(r));
        } else if (tok.find('=') != std::string::npos) {
            if (reqs.empty()) {
                throw std::invalid_argument("--dist: parameter '" + tok +
                                            "' appears before any distribution name");
            }
            reqs.back().overrides.push_back(parse_assignment(tok));
        } else {
            reqs.push_back(Req{cdd::kind_from_name(tok), {}});
        }
    }
    if (reqs.empty()) throw std::invalid_argument("--dist: no distributions given");
    std::vector<cdd::WeightingFunction> out;
    out.reserve(reqs.size());
    for (const auto& r : reqs) out.push_back(build_weighting(r.kind, r.overrides));
    return out;
}

// Loss spec string: cd_l1 | cd_l2 | hypercd[:alpha=A] | weighted:KIND[:name=v,name=v].
cdd::LossSpec parse_loss(const std::string& s, bool mode_shift) {
    const auto parts = cdd::detail::split_char(s, ':');
    cdd::LossSpec spec;
    spec.mode_shift = mode_shift;
    if (parts[0] == "cd_l1" || parts[0] == "cd_l2") {
        if (parts.size() != 1) throw std::invalid_argument("--loss: " + parts[0] + " takes no parameters");
        spec.kind = parts[0] == "cd_l1" ? cdd::LossKind::cd_l1 : cdd::LossKind::cd_l2;
        return spec;
    }
    if (parts[0] == "hypercd") {
        spec.kind = cdd::LossKind::hypercd;
        if (parts.size() > 2) throw std::invalid_argument("--loss: malformed hypercd spec");
        if (parts.size() == 2) {
            const auto [name, value] = parse_assignment(parts[1]);
            if (name != "alpha") throw std::invalid_argument("--loss: hypercd only takes alpha");
            spec.alpha = value;
        }
        return spec;
    }
    if (parts[0] == "weighted") {
        if (parts.size() < 2) throw std::invalid_argument("--loss: weighted needs a distribution kind");
        if (parts.size() > 3) throw std::invalid_argument("--loss: malformed weighted spec");
        spec.kind = cdd::LossKind::weighted_cd;
        const cdd::WeightKind kind = cdd::kind_from_name(parts[1]);
        std::vector<std::pair<std::string, double>> overrides;
        if (parts.size() == 3) {
            for (const auto& tok : cdd::detail::split_char(parts[2], ',')) {
                overrides.push_back(parse_assignment(tok));
            }
        }
        spec.weighting = build_weighting(kind, overrides);
        return spec;
    }
    throw std::invalid_argument("--loss: unknown kind '" + parts[0] +
                                "' (valid: cd_l1, cd_l2, hypercd, weighted)");
}

json loss_to_json(const cdd::LossSpec& spec) {
    json j;
    switch (spec.kind) {
        case cdd::LossKind::cd_l1: j["kind"] = "cd_l1"; break;
        case cdd::LossKind::cd_l2: j["kind"] = "cd_l2"; break;
        case cdd::LossKind::hypercd:
            j["kind"] = "hypercd";
            j["alpha"] = spec.alpha;
            break;
        case cdd::LossKind::weighted_cd: {
            j["kind"] = "weighted_cd";
            j["weighting"] = cdd::kind_name(spec.weighting->kind);
            json params = json::object();
            const auto& names = cdd::param_names(spec.weighting->kind);
            for (std::size_t i = 0; i < names.size(); ++i) {
                params[names[i]] = spec.weighting->params[i];
            }
            j["params"] = params;
            j["mode_shift"] = spec.mode_shift;
            break;
        }
    }
    return j;
}

cdd::ReferenceDistribution parse_ref(const std::string& s, const cdd::DistillConfig& cfg) {
    if (s == "uniform") return cdd::uniform_distribution(cfg);
    if (s.rfind("expdecay:", 0) == 0) {
        double rate = 0.0;
        if (!cdd::parse_double_token(std::string_view(s).substr(9), rate) || rate < 0.0) {
            throw std::invalid_argument("--ref: invalid expdecay rate in '" + s + "'");
        }
        return cdd::exp_decay_distribution(cfg, rate);
    }
    if (s.rfind("file:", 0) == 0) {
        return cdd::empirical_file_distribution(cfg, s.substr(5));
    }
    throw std::invalid_argument("--ref: expected uniform, expdecay:RATE or file:PATH");
}

// Grid file: one CSV row per parameter, "name,v1,v2,...", rows in the kind's
// parameter order. The search runs over the cartesian product of the rows.
cdd::ParamGrid parse_grid(const std::string& s, cdd::WeightKind kind) {
    if (s == "default") return cdd::default_grid(kind);
    if (s.rfind("file:", 0) != 0) {
        throw std::invalid_argument("--grid: expected default or file:PATH");
    }
    const std::string path = s.substr(5);
    std::ifstream in(path);
    if (!in) throw cdd::ParseError(path, 0, "cannot open file");
    cdd::ParamGrid g;
    g.names = cdd::param_names(kind);
    std::string line;
    std::size_t lineno = 0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        cdd::detail::strip_cr(line);
        if (cdd::detail::blank_or_comment(line)) continue;
        const auto fields = cdd::detail::split_char(line, ',');
        if (row >= g.names.size()) throw cdd::ParseError(path, lineno, "too many parameter rows");
        if (fields.size() < 2 || fields[0] != g.names[row]) {
            throw cdd::ParseError(path, lineno, "expected row for parameter '" + g.names[row] + "'");
        }
        std::vector<double> axis;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v = 0.0;
            if (!cdd::parse_double_token(fields[i], v) || !(v > 0.0)) {
                throw cdd::ParseError(path, lineno, "invalid parameter value '" + fields[i] + "'");
            }
            axis.push_back(v);
        }
        g.axes.push_back(std::move(axis));
        ++row;
    }
    if (row != g.names.size()) {
        throw cdd::ParseError(path, 0, "expected one row per parameter (" +
                                           std::to_string(g.names.size()) + ")");
    }
    return g;
}

std::map<long long, std::string> scan_snapshots(const std::string& dir) {
    std::map<long long, std::string> out;
    if (!fs::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("snap_", 0) != 0 || name.size() <= 9 ||
            name.substr(name.size() - 4) != ".xyz") {
            continue;
        }
        const std::string digits = name.substr(5, name.size() - 9);
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos) {
            continue;
        }
        out[std::stoll(digits)] = entry.path().string();
    }
    return out;
}

// ---- subcommand bodies ---------------------------------------------------

struct GenArgs {
    std::string shape, out, crop_dir;
    std::uint64_t n = 0, seed = 0;
    double keep = -1.0;
};

void run_gen(const GenArgs& a) {
    const cdd::ShapeKind kind = parse_shape(a.shape);
    const bool want_crop = !a.crop_dir.empty() || a.keep >= 0.0;
    if (want_crop && (a.crop_dir.empty() || a.keep < 0.0)) {
        throw std::invalid_argument("--crop-dir and --keep must be given together");
    }
    OutputGuard guard;
    const cdd::PointCloud pc = cdd::generate({kind, a.n, a.seed});
    guard.add(a.out);
    cdd::write_xyz(pc, a.out);
    std::vector<std::string> outputs{a.out};

    json cfg;
    cfg["shape"] = a.shape;
    cfg["n"] = a.n;
    cfg["seed"] = a.seed;
    cfg["out"] = a.out;
    if (want_crop) {
        const cdd::Vec3 dir = parse_direction(a.crop_dir);
        const cdd::PointCloud part = cdd::crop(pc, {dir, a.keep});
        const std::string ppath = partial_path_for(a.out);
        guard.add(ppath);
        cdd::write_xyz(part, ppath);
        outputs.push_back(ppath);
        cfg["crop_dir"] = {dir.x, dir.y, dir.z};
        cfg["keep"] = a.keep;
    }
    const std::string mpath = a.out + ".manifest.json";
    guard.add(mpath);
    write_manifest(mpath, "gen", cfg, a.seed, outputs);
    guard.committed = true;
}

struct EvalArgs {
    std::string pred, gt;
    double tau = 0.01;
};

void run_eval(const EvalArgs& a) {
    const cdd::PointCloud pred = cdd::read_xyz(a.pred);
    const cdd::PointCloud gt = cdd::read_xyz(a.gt);
    const double l1 = cdd::evaluate({cdd::LossKind::cd_l1}, pred, gt);
    const double l2 = cdd::evaluate({cdd::LossKind::cd_l2}, pred, gt);
    const double f1 = cdd::f1_score(pred, gt, a.tau);
    std::cout << cdd::format_double(l1) << ',' << cdd::format_double(l2) << ','
              << cdd::format_double(f1) << '\n';
}

struct CurvesArgs {
    std::string dist, approx = "dominant";
    double alpha = 1.0, delta = 1e-4;
    bool rescale = false;
};

cdd::DistillConfig::Approx parse_approx(const std::string& s) {
    if (s == "dominant") return cdd::DistillConfig::Approx::dominant;
    if (s == "finite_diff") return cdd::DistillConfig::Approx::finite_diff;
    throw std::invalid_argument("--approx: expected dominant or finite_diff");
}

void run_curves(const CurvesArgs& a) {
    cdd::DistillConfig cfg;
    cfg.alpha = a.alpha;
    cfg.approx = parse_approx(a.approx);
    cfg.delta = a.delta;
    const auto weightings = parse_dist_list(a.dist);

    cdd::GradientWeightCurve ref = cdd::reference_curve(cfg);
    std::vector<cdd::GradientWeightCurve> curves;
    curves.reserve(weightings.size());
    for (const auto& w : weightings) curves.push_back(cdd::candidate_curve(w, cfg));
    if (a.rescale) {
        ref = cdd::rescale(std::move(ref));
        for (auto& c : curves) c = cdd::rescale(std::move(c));
    }

    std::cout << "d,z_ref";
    for (const auto& w : weightings) std::cout << ",z_" << cdd::kind_name(w.kind);
    std::cout << '\n';
    for (std::size_t i = 0; i < ref.d_values.size(); ++i) {
        std::cout << cdd::format_double(ref.d_values[i]) << ','
                  << cdd::format_double(ref.z_values[i]);
        for (const auto& c : curves) std::cout << ',' << cdd::format_double(c.z_values[i]);
        std::cout << '\n';
    }
}

struct DistillArgs {
    std::string dist, approx = "dominant", ref = "expdecay:300", grid = "default", out;
    double alpha = 1.0, delta = 1e-4;
};

void run_distill(const DistillArgs& a) {
    cdd::DistillConfig cfg;
    cfg.alpha = a.alpha;
    cfg.approx = parse_approx(a.approx);
    cfg.delta = a.delta;
    const cdd::WeightKind kind = cdd::kind_from_name(a.dist);
    const cdd::ReferenceDistribution dist = parse_ref(a.ref, cfg);
    const cdd::ParamGrid grid = parse_grid(a.grid, kind);

    const cdd::DistillResult res = cdd::grid_search(kind, grid, cfg, dist);

    fs::create_directories(a.out);
    OutputGuard guard;
    const std::string curves_path = (fs::path(a.out) / "curves.csv").string();
    const std::string summary_path = (fs::path(a.out) / "summary.csv").string();
    guard.add(curves_path);
    cdd::write_curves_csv(res, curves_path);
    guard.add(summary_path);
    cdd::write_summary_csv(res, summary_path);

    json cfgj;
    cfgj["dist"] = a.dist;
    cfgj["alpha"] = a.alpha;
    cfgj["approx"] = a.approx;
    cfgj["delta"] = a.delta;
    cfgj["ref"] = a.ref;
    cfgj["grid"] = a.grid;
    cfgj["out"] = a.out;
    const std::string mpath = (fs::path(a.out) / "manifest.json").string();
    guard.add(mpath);
    write_manifest(mpath, "distill", cfgj, 0, {curves_path, summary_path});
    guard.committed = true;
}

struct TrainArgs {
    std::string gt, partial, loss, out;
    std::string optimizer = "adam", init = "jitter";
    int iters = 0, snapshots = 0, eval_every = 100;
    double lr = 0.01, jitter_sigma = 0.05;
    std::uint64_t seed = 0, output_size = 0;
    bool no_mode_shift = false;
};

void run_train(const TrainArgs& a) {
    cdd::TrainConfig cfg;
    cfg.loss = parse_loss(a.loss, !a.no_mode_shift);
    cfg.iters = a.iters;
    cfg.lr = a.lr;
    cfg.seed = a.seed;
    cfg.eval_every = a.eval_every;
    cfg.output_size = a.output_size;
    cfg.jitter_sigma = a.jitter_sigma;
    cfg.snapshot_every = a.snapshots;
    if (a.optimizer == "sgd") {
        cfg.optimizer = cdd::OptimizerKind::sgd;
    } else if (a.optimizer == "adam") {
        cfg.optimizer = cdd::OptimizerKind::adam;
    } else {
        throw std::invalid_argument("--optimizer: expected sgd or adam");
    }
    if (a.init == "jitter") {
        cfg.init = cdd::InitKind::jitter;
    } else if (a.init == "uniform_box") {
        cfg.init = cdd::InitKind::uniform_box;
    } else if (a.init == "copy_partial") {
        cfg.init = cdd::InitKind::copy_partial;
    } else {
        throw std::invalid_argument("--init: expected jitter, uniform_box or copy_partial");
    }

    const cdd::PointCloud gt = cdd::read_xyz(a.gt);
    const cdd::PointCloud partial = cdd::read_xyz(a.partial);

    fs::create_directories(a.out);
    OutputGuard guard;
    std::vector<std::string> outputs;
    cdd::SnapshotSink sink;
    if (a.snapshots > 0) {
        sink = [&](long long iter, const cdd::PointCloud& pc) {
            const std::string p = (fs::path(a.out) / cdd::snapshot_filename(iter)).string();
            guard.add(p);
            cdd::write_xyz(pc, p);
            outputs.push_back(p);
        };
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto [model, log] = cdd::train(partial, gt, cfg, sink);
    const auto t1 = std::chrono::steady_clock::now();

    const std::string final_path = (fs::path(a.out) / "final.xyz").string();
    guard.add(final_path);
    cdd::write_xyz(model.points, final_path);
    outputs.push_back(final_path);
    const std::string log_path = (fs::path(a.out) / "train_log.csv").string();
    guard.add(log_path);
    log.write_csv(log_path);
    outputs.push_back(log_path);

    json cfgj;
    cfgj["gt"] = a.gt;
    cfgj["partial"] = a.partial;
    cfgj["loss"] = loss_to_json(cfg.loss);
    cfgj["iters"] = a.iters;
    cfgj["lr"] = a.lr;
    cfgj["optimizer"] = a.optimizer;
    cfgj["seed"] = a.seed;
    cfgj["eval_every"] = a.eval_every;
    cfgj["output_size"] = a.output_size;
    cfgj["init"] = a.init;
    cfgj["jitter_sigma"] = a.jitter_sigma;
    cfgj["snapshots"] = a.snapshots;
    cfgj["out"] = a.out;
    const std::string mpath = (fs::path(a.out) / "manifest.json").string();
    guard.add(mpath);
    write_manifest(mpath, "train", cfgj, a.seed, outputs);
    guard.committed = true;

    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cerr << "trained " << a.iters << " iterations in " << secs << " s (wall)\n";
}

struct CompareArgs {
    std::string run_a, run_b;
};

void run_compare(const CompareArgs& a) {
    const auto snaps_a = scan_snapshots(a.run_a);
    const auto snaps_b = scan_snapshots(a.run_b);
    if (snaps_a.empty()) throw std::invalid_argument("no snapshots found in " + a.run_a);
    std::vector<std::pair<long long, cdd::PointCloud>> seq_a, seq_b;
    {
        auto ia = snaps_a.begin();
        auto ib = snaps_b.begin();
        for (; ia != snaps_a.end() && ib != snaps_b.end(); ++ia, ++ib) {
            if (ia->first != ib->first) break;
            seq_a.emplace_back(ia->first, cdd::read_xyz(ia->second));
            seq_b.emplace_back(ib->first, cdd::read_xyz(ib->second));
        }
        if (seq_a.size() != snaps_a.size() || seq_b.size() != snaps_b.size()) {
            throw std::invalid_argument("snapshot sets do not match between runs");
        }
    }
    const auto dists = cdd::compare_runs(seq_a, seq_b);
    std::cout << "iter,distance\n";
    for (const auto& [iter, d] : dists) {
        std::cout << iter << ',' << cdd::format_double(d) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted Chamfer-distance losses, curve distillation, and toy completion training"};
    app.set_version_flag("--version", cdd::version_string);
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a synthetic shape (and optional crop)");
    gen->add_option("--shape", gen_args.shape, "sphere|cube|torus")->required();
    gen->add_option("--n", gen_args.n, "point count")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_args.seed, "generator seed")->required();
    gen->add_option("--out", gen_args.out, "output XYZ path")->required();
    gen->add_option("--crop-dir", gen_args.crop_dir, "crop direction X,Y,Z");
    gen->add_option("--keep", gen_args.keep, "crop keep ratio in (0,1]");
    gen->callback([&] { run_gen(gen_args); });

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate l1cd,l2cd,f1 between two clouds");
    eval->add_option("--pred", eval_args.pred, "predicted cloud (XYZ)")->required();
    eval->add_option("--gt", eval_args.gt, "ground-truth cloud (XYZ)")->required();
    eval->add_option("--tau", eval_args.tau, "F1 distance threshold");
    eval->callback([&] { run_eval(eval_args); });

    CurvesArgs curves_args;
    auto* curves = app.add_subcommand("curves", "print gradient-weight curves as CSV");
    curves->add_option("--alpha", curves_args.alpha, "reference curve alpha");
    curves->add_option("--dist", curves_args.dist, "distribution list")->required();
    curves->add_option("--approx", curves_args.approx, "dominant|finite_diff");
    curves->add_option("--delta", curves_args.delta, "finite_diff step");
    curves->add_flag("--rescale", curves_args.rescale, "rescale every curve to max 1");
    curves->callback([&] { run_curves(curves_args); });

    DistillArgs distill_args;
    auto* distill = app.add_subcommand("distill", "fit weighting parameters by gradient matching");
    distill->add_option("--dist", distill_args.dist, "weighting kind")->required();
    distill->add_option("--alpha", distill_args.alpha, "reference curve alpha");
    distill->add_option("--approx", distill_args.approx, "dominant|finite_diff");
    distill->add_option("--delta", distill_args.delta, "finite_diff step");
    distill->add_option("--ref", distill_args.ref, "uniform|expdecay:RATE|file:PATH");
    distill->add_option("--grid", distill_args.grid, "default|file:PATH");
    distill->add_option("--out", distill_args.out, "output directory")->required();
    distill->callback([&] { run_distill(distill_args); });

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "free-point completion training");
    train->add_option("--gt", train_args.gt, "ground-truth cloud (XYZ)")->required();
    train->add_option("--partial", train_args.partial, "partial cloud (XYZ)")->required();
    train->add_option("--loss", train_args.loss,
                      "cd_l1|cd_l2|hypercd[:alpha=A]|weighted:KIND[:k=v,...]")
        ->required();
    train->add_option("--iters", train_args.iters, "iterations")->required()->check(CLI::PositiveNumber);
    train->add_option("--lr", train_args.lr, "learning rate");
    train->add_option("--seed", train_args.seed, "init seed")->required();
    train->add_option("--out", train_args.out, "output directory")->required();
    train->add_option("--snapshots", train_args.snapshots, "snapshot every N iterations (0 = off)");
    train->add_option("--eval-every", train_args.eval_every, "log every N iterations");
    train->add_option("--optimizer", train_args.optimizer, "sgd|adam");
    train->add_option("--output-size", train_args.output_size, "model size (0 = |gt|)");
    train->add_option("--init", train_args.init, "jitter|uniform_box|copy_partial");
    train->add_option("--jitter-sigma", train_args.jitter_sigma, "jitter scale");
    train->add_flag("--no-mode-shift", train_args.no_mode_shift,
                    "evaluate the weighting at d instead of mode + d");
    train->callback([&] { run_train(train_args); });

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "parameter distance between two snapshot runs");
    compare->add_option("--run-a", compare_args.run_a, "first run directory")->required();
    compare->add_option("--run-b", compare_args.run_b, "second run directory")->required();
    compare->callback([&] { run_compare(compare_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
