#include "tvnet/cli.hpp"

#include "tvnet/eval.hpp"
#include "tvnet/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

namespace tvnet {

namespace {

using KeySet = std::set<std::string>;

void check_keys(const Json& j, const KeySet& allowed, const std::string& where) {
    if (!j.is_object()) throw ParameterError(where + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ParameterError("unknown key '" + key + "' in " + where);
}

double number_or_inf(const Json& j, const std::string& what) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        throw ParameterError(what + " must be a number or \"inf\"");
    }
    if (!j.is_number()) throw ParameterError(what + " must be a number");
    return j.get<double>();
}

Json inf_to_json(double v) { return std::isinf(v) && v > 0 ? Json("inf") : Json(v); }

template <class T>
void read_into(const Json& j, const char* key, T& target, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ParameterError(where + "." + key + " has the wrong type");
    }
}

void require_file(const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) throw DependencyError(what + " not found: " + path.string());
}

void require_stem(const fs::path& stem, const std::string& what) {
    if (!fs::exists(manifest_path(stem)))
        throw DependencyError(what + " not found: " + manifest_path(stem).string());
}

Json echo(const RunConfig& cfg, const std::string& command, Json inputs) {
    return {{"command", command}, {"inputs", std::move(inputs)}, {"run", cfg.to_json()}};
}

TimeSeriesPanel load_panel(const fs::path& path) {
    require_file(path, "panel");
    return read_panel(path);
}

double trapezoid_auc(std::vector<EdgeRocPoint> roc) {
    roc.push_back({0.0, 0.0, 0.0});
    roc.push_back({0.0, 1.0, 1.0});
    std::sort(roc.begin(), roc.end(), [](const EdgeRocPoint& a, const EdgeRocPoint& b) {
        return a.p_fa != b.p_fa ? a.p_fa < b.p_fa : a.p_d < b.p_d;
    });
    double area = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i)
        area += (roc[i].p_fa - roc[i - 1].p_fa) * 0.5 * (roc[i].p_d + roc[i - 1].p_d);
    return area;
}

RunConfig parse_run_config(const Json& j) {
    check_keys(j, {"seed", "setting", "link", "kernel", "penalty", "solver", "detect", "pna", "generate", "eval", "roc"},
               "configuration");
    RunConfig c;
    read_into(j, "seed", c.seed, "configuration");
    read_into(j, "link", c.link, "configuration");

    if (j.contains("setting")) {
        const Json& s = j["setting"];
        check_keys(s, {"mode", "lags", "mask"}, "setting");
        if (s.contains("mode")) c.mode = mode_from_string(s["mode"].get<std::string>());
        read_into(s, "lags", c.lags, "setting");
        if (s.contains("mask") && !s["mask"].is_null()) c.mask = fs::path(s["mask"].get<std::string>());
    }
    if (j.contains("kernel")) {
        const Json& k = j["kernel"];
        check_keys(k, {"shape", "bandwidth"}, "kernel");
        if (k.contains("shape")) c.shape = shape_from_string(k["shape"].get<std::string>());
        read_into(k, "bandwidth", c.bandwidth, "kernel");
    }
    if (j.contains("penalty")) {
        const Json& p = j["penalty"];
        check_keys(p, {"kind", "lambda", "lambda_latent", "joint_slope"}, "penalty");
        if (p.contains("kind") && !p["kind"].is_null()) c.penalty_kind = penalty_from_string(p["kind"].get<std::string>());
        read_into(p, "lambda", c.lambda, "penalty");
        read_into(p, "lambda_latent", c.lambda_latent, "penalty");
        read_into(p, "joint_slope", c.joint_slope, "penalty");
    }
    if (j.contains("solver")) {
        const Json& s = j["solver"];
        check_keys(s, {"s0", "t_max", "tol", "freeze_slope"}, "solver");
        read_into(s, "s0", c.solver.s0, "solver");
        read_into(s, "t_max", c.solver.t_max, "solver");
        read_into(s, "tol", c.solver.tol, "solver");
        read_into(s, "freeze_slope", c.solver.freeze_slope, "solver");
    }
    if (j.contains("detect")) {
        const Json& d = j["detect"];
        check_keys(d, {"gamma", "strategy", "smooth_boundaries", "min_window"}, "detect");
        if (d.contains("gamma")) c.gamma = number_or_inf(d["gamma"], "detect.gamma");
        if (d.contains("strategy")) c.strategy = strategy_from_string(d["strategy"].get<std::string>());
        read_into(d, "smooth_boundaries", c.smooth_boundaries, "detect");
        read_into(d, "min_window", c.min_window, "detect");
    }
    if (j.contains("pna")) {
        const Json& p = j["pna"];
        check_keys(p, {"rank", "lambda_star", "lambda_1", "t_max", "delta", "init"}, "pna");
        read_into(p, "rank", c.rank, "pna");
        read_into(p, "lambda_star", c.lambda_star, "pna");
        read_into(p, "lambda_1", c.lambda_1, "pna");
        read_into(p, "t_max", c.ipalm.t_max, "pna");
        read_into(p, "delta", c.ipalm.delta, "pna");
        if (p.contains("init")) c.ipalm.init = init_from_string(p["init"].get<std::string>());
    }
    if (j.contains("generate")) {
        if (j["generate"].is_object() && j["generate"].contains("seed"))
            throw ParameterError("generate.seed is not allowed; use the top-level seed");
        c.generate = synth_config_from_json(j["generate"]);
    }
    if (j.contains("eval")) {
        check_keys(j["eval"], {"window"}, "eval");
        read_into(j["eval"], "window", c.window, "eval");
    }
    if (j.contains("roc")) {
        check_keys(j["roc"], {"gammas"}, "roc");
        if (j["roc"].contains("gammas")) {
            const Json& g = j["roc"]["gammas"];
            if (!g.is_array() || g.empty()) throw ParameterError("roc.gammas must be a non-empty array");
            c.gammas.clear();
            for (const auto& v : g) c.gammas.push_back(number_or_inf(v, "roc.gammas entry"));
        }
    }
    c.generate.seed = c.seed;
    c.ipalm.seed = c.seed;
    c.validate();
    return c;
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
    try {
        return parse_run_config(j);
    } catch (const Json::exception& e) {
        throw ParameterError(std::string("configuration: ") + e.what());
    }
}

Json RunConfig::to_json() const {
    Json g = synth_config_to_json(generate);
    g.erase("seed");
    Json gammas_json = Json::array();
    for (double v : gammas) gammas_json.push_back(inf_to_json(v));
    return {
        {"seed", seed},
        {"setting", {{"mode", std::string(to_string(mode))}, {"lags", lags}, {"mask", mask ? Json(mask->string()) : Json(nullptr)}}},
        {"link", link},
        {"kernel", {{"shape", std::string(to_string(shape))}, {"bandwidth", bandwidth}}},
        {"penalty",
         {{"kind", penalty_kind ? Json(std::string(to_string(*penalty_kind))) : Json(nullptr)},
          {"lambda", lambda},
          {"lambda_latent", lambda_latent},
          {"joint_slope", joint_slope}}},
        {"solver", {{"s0", solver.s0}, {"t_max", solver.t_max}, {"tol", solver.tol}, {"freeze_slope", solver.freeze_slope}}},
        {"detect",
         {{"gamma", inf_to_json(gamma)},
          {"strategy", std::string(to_string(strategy))},
          {"smooth_boundaries", smooth_boundaries},
          {"min_window", min_window}}},
        {"pna",
         {{"rank", rank},
          {"lambda_star", lambda_star},
          {"lambda_1", lambda_1},
          {"t_max", ipalm.t_max},
          {"delta", ipalm.delta},
          {"init", std::string(to_string(ipalm.init))}}},
        {"generate", g},
        {"eval", {{"window", window}}},
        {"roc", {{"gammas", gammas_json}}},
    };
}

void RunConfig::validate() const {
    if (lags < 1) throw ParameterError("setting.lags must be at least 1");
    (void)LinkSpec::from_name(link);
    if (!(bandwidth > 0) || !std::isfinite(bandwidth)) throw ParameterError("kernel.bandwidth must be positive");
    if (penalty_kind && mode == Mode::DirectedAR && *penalty_kind == PenaltyKind::SymmetricPairs)
        throw ParameterError("symmetric pair penalty needs the undirected setting");
    PenaltySpec p;
    p.lambda = lambda;
    p.lambda_latent = lambda_latent;
    p.validate();
    solver.validate();
    changepoint().validate();
    if (rank < 1) throw ParameterError("pna.rank must be at least 1");
    if (!(lambda_star >= 0) || !(lambda_1 >= 0)) throw ParameterError("pna weights must be >= 0");
    ipalm.validate();
    generate.validate();
    if (window < 0) throw ParameterError("eval.window must be >= 0");
    for (double g : gammas)
        if (!(g >= 0)) throw ParameterError("roc.gammas entries must be >= 0");
}

RegressionSetting RunConfig::setting(Index nodes) const {
    RegressionSetting s =
        mode == Mode::DirectedAR ? RegressionSetting::directed_ar(nodes, lags) : RegressionSetting::undirected(nodes);
    if (mask) {
        require_file(*mask, "mask");
        Matrix m = read_matrix_csv(*mask);
        if (m.rows() != s.rows() || m.cols() != s.cols())
            throw ShapeError("mask must be " + std::to_string(s.rows()) + " x " + std::to_string(s.cols()));
        s = s.with_mask(std::move(m));
    }
    return s;
}

LinkSpec RunConfig::link_spec() const { return LinkSpec::from_name(link); }

PenaltySpec RunConfig::penalty(const RegressionSetting& s) const {
    PenaltySpec p;
    p.kind = penalty_kind.value_or(s.mode() == Mode::DirectedAR ? PenaltyKind::GrangerGroups
                                                                 : PenaltyKind::SymmetricPairs);
    p.lambda = lambda;
    p.lambda_latent = lambda_latent;
    p.joint_slope = joint_slope;
    return p;
}

ChangepointConfig RunConfig::changepoint() const {
    ChangepointConfig c;
    c.bandwidth = bandwidth;
    c.shape = shape;
    c.gamma = gamma;
    c.strategy = strategy;
    c.smooth_boundaries = smooth_boundaries;
    c.min_window = min_window;
    return c;
}

FitOptions RunConfig::fit_options(unsigned workers) const {
    FitOptions o = solver;
    o.workers = std::max(1u, workers);
    return o;
}

RunConfig load_run_config(const fs::path& path) {
    require_file(path, "configuration");
    Json j;
    try {
        j = Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw ParameterError("configuration is not valid JSON: " + std::string(e.what()));
    }
    return RunConfig::from_json(j);
}

void cmd_generate(const RunConfig& cfg, const fs::path& out_dir) {
    const GroundTruth gt = generate(cfg.generate);
    write_ground_truth(out_dir, gt);
}

void cmd_fit(const RunConfig& cfg, const fs::path& panel_path, KernelSide side, const fs::path& out_stem,
             unsigned workers) {
    const TimeSeriesPanel panel = load_panel(panel_path);
    const RegressionSetting setting = cfg.setting(panel.nodes());
    check_compatible(setting, panel);
    const KernelWeights kernel = make_kernel(panel.length(), cfg.bandwidth, cfg.shape, side, setting.first_time());
    const GraphSequence seq = fit_tv_graphs(panel, setting, cfg.link_spec(), cfg.penalty(setting), kernel,
                                            cfg.fit_options(workers));
    Json inputs = {{"panel", panel_path.string()}, {"side", std::string(to_string(side))}};
    write_graph_sequence(out_stem, seq, echo(cfg, "fit", inputs));
}

void cmd_detect(const RunConfig& cfg, const fs::path& panel_path, const fs::path& out_dir, bool emit_sides,
                unsigned workers) {
    const TimeSeriesPanel panel = load_panel(panel_path);
    const RegressionSetting setting = cfg.setting(panel.nodes());
    const ChangepointResult result = fit_with_changepoints(panel, setting, cfg.link_spec(), cfg.penalty(setting),
                                                           cfg.changepoint(), cfg.fit_options(workers));
    const Json config = echo(cfg, "detect", {{"panel", panel_path.string()}, {"emit_sides", emit_sides}});
    write_graph_sequence(out_dir / "estimate", result.estimate, config);
    write_changepoint_report(out_dir / "report", result.report, config);
    if (emit_sides)
        for (KernelSide s : {KernelSide::Left, KernelSide::Center, KernelSide::Right})
            write_graph_sequence(out_dir / std::string(to_string(s)),
                                 result.sides[static_cast<std::size_t>(side_row(s))], config);
}

void cmd_pna(const RunConfig& cfg, const fs::path& graphs, const fs::path& out_stem) {
    require_stem(graphs, "graph sequence");
    const GraphSequence seq = read_graph_sequence(graphs);
    const Factorization f = ipalm_factorize(seq.Acal, seq.setting, cfg.rank, cfg.lambda_star, cfg.lambda_1, cfg.ipalm);
    write_factorization(out_stem, f, seq.setting, echo(cfg, "pna", {{"graphs", graphs.string()}}));
    const Vector sv = scree(seq.Acal);
    std::string text = "index,singular_value\n";
    for (Index i = 0; i < sv.size(); ++i) text += std::to_string(i + 1) + ',' + format_double(sv[i]) + '\n';
    write_text(out_stem.string() + ".scree.csv", text);
}

void cmd_eval(const RunConfig& cfg, const EvalInputs& in, const fs::path& out_dir) {
    if (!in.graphs && !in.factorization && !in.report)
        throw ParameterError("eval needs at least one of --graphs, --factorization, --report");
    require_stem(in.truth / "ground_truth", "ground truth");
    const StoredGroundTruth truth = read_ground_truth(in.truth);

    Json inputs = {{"truth", in.truth.string()}};
    Json metrics;
    metrics["format_version"] = kFormatVersion;
    metrics["kind"] = "metrics";

    if (in.graphs) {
        require_stem(*in.graphs, "graph sequence");
        inputs["graphs"] = in.graphs->string();
        const GraphSequence est = read_graph_sequence(*in.graphs);
        if (!(est.setting == truth.truth.setting))
            throw ConfigurationError("estimate and truth use different regression settings");
        const TrajectoryError te = trajectory_error(est, truth.graphs());
        std::string text = "k,error\n";
        for (Index k = 0; k < te.per_k.size(); ++k) text += std::to_string(k + 1) + ',' + format_double(te.per_k[k]) + '\n';
        write_text(out_dir / "trajectory.csv", text);
        metrics["trajectory"] = {{"mean", te.mean}};
    }
    if (in.factorization) {
        require_stem(*in.factorization, "factorization");
        inputs["factorization"] = in.factorization->string();
        const StoredFactorization est = read_factorization(*in.factorization);
        const Factorization& ref = truth.truth.factorization;
        if (!(est.setting == truth.truth.setting))
            throw ConfigurationError("factorization and truth use different regression settings");
        if (est.factorization.rank() != ref.rank())
            throw ConfigurationError("factorization rank " + std::to_string(est.factorization.rank()) +
                                     " differs from the true rank " + std::to_string(ref.rank()));
        const Alignment a = align_factors(est.factorization, ref);
        const Factorization aligned = apply_alignment(est.factorization, a);
        Json nets = Json::array();
        for (Index r = 0; r < ref.rank(); ++r) {
            const Matrix e = aligned.eigennetwork(r, est.setting);
            const Matrix t = ref.eigennetwork(r, est.setting);
            const auto roc = edge_roc(e, t, est.setting);
            std::string text = "threshold,p_fa,p_d\n";
            const EdgeRocPoint* best = &roc.front();
            for (const auto& p : roc) {
                text += format_double(p.threshold) + ',' + format_double(p.p_fa) + ',' + format_double(p.p_d) + '\n';
                if (p.p_d - p.p_fa > best->p_d - best->p_fa) best = &p;
            }
            write_text(out_dir / ("roc_eigennetwork_" + std::to_string(r + 1) + ".csv"), text);
            nets.push_back({{"r", r + 1},
                            {"matched_column", a.permutation[static_cast<std::size_t>(r)] + 1},
                            {"correlation", a.correlations[r]},
                            {"auc", trapezoid_auc(roc)},
                            {"youden_point", {{"threshold", best->threshold}, {"p_fa", best->p_fa}, {"p_d", best->p_d}}}});
        }
        metrics["eigennetworks"] = nets;
    }
    if (in.report) {
        require_stem(*in.report, "changepoint report");
        inputs["report"] = in.report->string();
        const ChangepointReport rep = read_changepoint_report(*in.report);
        const ChangepointError ce = changepoint_error(rep.changepoints, truth.changepoints, cfg.window);
        Json detected = Json::array();
        for (Index c : rep.changepoints) detected.push_back(c + 1);
        metrics["changepoints"] = {{"detected", detected},
                                   {"misses", ce.misses},
                                   {"false_alarms", ce.false_alarms},
                                   {"offsets", ce.offsets}};
    }
    metrics["config"] = echo(cfg, "eval", inputs);
    write_text(out_dir / "metrics.json", metrics.dump(2) + "\n");
}

void cmd_roc(const RunConfig& cfg, const fs::path& panel_path, const std::optional<fs::path>& truth_dir,
             const fs::path& out_dir, unsigned workers) {
    const TimeSeriesPanel panel = load_panel(panel_path);
    std::optional<StoredGroundTruth> truth;
    if (truth_dir) {
        require_stem(*truth_dir / "ground_truth", "ground truth");
        truth = read_ground_truth(*truth_dir);
    }
    const RegressionSetting setting = cfg.setting(panel.nodes());
    ChangepointConfig cc = cfg.changepoint();
    cc.gamma = 1.0;
    cc.strategy = DetectionStrategy::Exhaustive;
    cc.smooth_boundaries = false;
    const ChangepointResult result =
        fit_with_changepoints(panel, setting, cfg.link_spec(), cfg.penalty(setting), cc, cfg.fit_options(workers));

    std::string text = "gamma,center,left,right,detections";
    if (truth) text += ",misses,false_alarms";
    text += '\n';
    for (double g : cfg.gammas) {
        const auto sel = select_estimators(result.report.residuals, g);
        Index counts[3] = {0, 0, 0};
        for (Index k = setting.first_time(); k < panel.length(); ++k)
            ++counts[side_row(sel[static_cast<std::size_t>(k)])];
        const auto cps = detect(sel);
        text += format_double(g) + ',' + std::to_string(counts[1]) + ',' + std::to_string(counts[0]) + ',' +
                std::to_string(counts[2]) + ',' + std::to_string(cps.size());
        if (truth) {
            const ChangepointError ce = changepoint_error(cps, truth->changepoints, cfg.window);
            text += ',' + std::to_string(ce.misses) + ',' + std::to_string(ce.false_alarms);
        }
        text += '\n';
    }
    write_text(out_dir / "gamma_sweep.csv", text);
    Json inputs = {{"panel", panel_path.string()}};
    if (truth_dir) inputs["truth"] = truth_dir->string();
    write_changepoint_report(out_dir / "residuals", result.report, echo(cfg, "roc", inputs));
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return 3;
    if (dynamic_cast<const NonConvergenceError*>(&e) || dynamic_cast<const NumericError*>(&e)) return 2;
    return 1;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Time-varying network estimation, changepoint detection and eigennetwork analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<unsigned> workers_flag;
    std::optional<std::uint64_t> seed_flag;
    app.add_option("-c,--config", config_path, "JSON run configuration (defaults apply when omitted)");
    app.add_option("--workers", workers_flag, "Worker threads (overrides TVNET_WORKERS)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed_flag, "Override the configuration seed");

    std::string out, panel, graphs, truth, factorization, report, side = "center", gamma, strategy;
    std::optional<Index> rank;
    bool emit_sides = false;

    auto* gen = app.add_subcommand("generate", "Write a synthetic ground-truth bundle");
    gen->add_option("-o,--out", out, "Output directory")->required();

    auto* fit = app.add_subcommand("fit", "Fit one kernel side at every time point");
    fit->add_option("-p,--panel", panel, "Panel CSV (N x K)")->required();
    fit->add_option("-o,--out", out, "Output stem")->required();
    fit->add_option("--side", side, "left, center or right")->check(CLI::IsMember({"left", "center", "right"}));

    auto* det = app.add_subcommand("detect", "Changepoint-aware fit");
    det->add_option("-p,--panel", panel, "Panel CSV (N x K)")->required();
    det->add_option("-o,--out", out, "Output directory")->required();
    det->add_option("--gamma", gamma, "Centre residual weight (number or inf)");
    det->add_option("--strategy", strategy, "fast or exhaustive")->check(CLI::IsMember({"fast", "exhaustive"}));
    det->add_flag("--emit-sides", emit_sides, "Also write the left, centre and right fits");

    auto* pna = app.add_subcommand("pna", "Factorize a graph sequence into eigennetworks");
    pna->add_option("-g,--graphs", graphs, "Graph sequence stem")->required();
    pna->add_option("-o,--out", out, "Output stem")->required();
    pna->add_option("-r,--rank", rank, "Number of eigennetworks");

    auto* ev = app.add_subcommand("eval", "Score estimates against a ground-truth bundle");
    ev->add_option("-t,--truth", truth, "Ground-truth directory")->required();
    ev->add_option("-g,--graphs", graphs, "Graph sequence stem");
    ev->add_option("-f,--factorization", factorization, "Factorization stem");
    ev->add_option("--report", report, "Changepoint report stem");
    ev->add_option("-o,--out", out, "Output directory")->required();

    auto* roc = app.add_subcommand("roc", "Sweep gamma over one exhaustive residual table");
    roc->add_option("-p,--panel", panel, "Panel CSV (N x K)")->required();
    roc->add_option("-t,--truth", truth, "Ground-truth directory for miss and false-alarm counts");
    roc->add_option("-o,--out", out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (seed_flag) {
            cfg.seed = *seed_flag;
            cfg.generate.seed = *seed_flag;
            cfg.ipalm.seed = *seed_flag;
        }
        if (!gamma.empty()) {
            try {
                cfg.gamma = gamma == "inf" ? std::numeric_limits<double>::infinity() : std::stod(gamma);
            } catch (const std::logic_error&) {
                throw ParameterError("--gamma must be a number or inf");
            }
        }
        if (!strategy.empty()) cfg.strategy = strategy_from_string(strategy);
        if (rank) cfg.rank = *rank;
        cfg.validate();
        const unsigned workers = workers_flag ? *workers_flag : default_workers();

        if (*gen) {
            cmd_generate(cfg, out);
        } else if (*fit) {
            cmd_fit(cfg, panel, side_from_string(side), out, workers);
        } else if (*det) {
            cmd_detect(cfg, panel, out, emit_sides, workers);
        } else if (*pna) {
            cmd_pna(cfg, graphs, out);
        } else if (*ev) {
            EvalInputs in{truth, std::nullopt, std::nullopt, std::nullopt};
            if (!graphs.empty()) in.graphs = fs::path(graphs);
            if (!factorization.empty()) in.factorization = fs::path(factorization);
            if (!report.empty()) in.report = fs::path(report);
            cmd_eval(cfg, in, out);
        } else if (*roc) {
            cmd_roc(cfg, panel, truth.empty() ? std::nullopt : std::optional<fs::path>(truth), out, workers);
        }
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what();
        if (e.time_index() >= 0) std::cerr << " (k = " << e.time_index() + 1 << ")";
        std::cerr << '\n';
        return exit_code_for(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace tvnet
