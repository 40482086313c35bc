#include "xinflate/cli.hpp"

#include "xinflate/bench.hpp"
#include "xinflate/dataset.hpp"
#include "xinflate/duality.hpp"
#include "xinflate/error.hpp"
#include "xinflate/model_io.hpp"
#include "xinflate/parallel.hpp"
#include "xinflate/render.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace xinflate {

using Json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string model;
    std::string instance;
    std::string klass;
    std::string format = "json";
    std::string out;
    std::string oracle = "box";
    std::vector<std::size_t> order;
    int threads = 0;

    std::string delta = "0.2";
    std::string beta;
    std::string strategy = "linear";
    bool from_full = false;

    std::vector<std::size_t> cxp;

    std::string data;
    std::string label;
    std::size_t trees = 25;
    std::size_t depth = 4;
    std::size_t max_features = 0;
    std::size_t samples = 100;
    std::uint64_t seed = 1;
};

struct Output {
    Json doc;
    std::string text;
    int code = 0;
};

Json one_based(const FeatureSet& s)
{
    Json a = Json::array();
    for (auto j : s) a.push_back(j + 1);
    return a;
}

std::vector<FeatureIndex> zero_based(const std::vector<std::size_t>& order)
{
    std::vector<FeatureIndex> out;
    for (auto j : order) {
        if (j == 0) throw ValidationError("feature numbers start at 1");
        out.push_back(j - 1);
    }
    return out;
}

Json point_json(const FeatureSpace& space, const Point& p)
{
    Json o = Json::object();
    for (std::size_t j = 0; j < p.size(); ++j) o[space[j].name] = space.domain(j).format_value(p[j]);
    return o;
}

Json set_json(const Domain& d, const ValueSet& s)
{
    Json a = Json::array();
    if (s.is_categorical()) {
        for (auto l : s.cat().labels()) a.push_back(d.label_name(l));
    } else {
        for (const auto& part : s.intervals().parts()) a.push_back(part.str());
    }
    return a;
}

Json explanation_json(const Model& m, const InflatedExplanation& x, bool with_probes)
{
    Json sets = Json::array();
    for (auto j : x.features) {
        const auto& d = m.space.domain(j);
        Json f = Json::object();
        f["feature"] = j + 1;
        f["name"] = m.space[j].name;
        f["set"] = set_json(d, x.sets.at(j));
        if (with_probes) {
            f[x.kind == ExplanationKind::contrastive ? "removed" : "added"] = x.added(j);
            Json probes = Json::array();
            for (const auto& pr : x.probes) {
                if (pr.feature != j) continue;
                Json q = Json::object();
                q["step"] = render_step(d, pr.step);
                q["accepted"] = pr.accepted;
                probes.push_back(std::move(q));
            }
            f["probes"] = std::move(probes);
        }
        sets.push_back(std::move(f));
    }
    return sets;
}

Point read_instance(const FeatureSpace& space, const std::string& arg)
{
    if (arg.empty()) throw ValidationError("--instance is required");
    std::vector<std::vector<std::string>> rows;
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        rows = parse_csv(read_text_file(arg));
        if (!rows.empty()) {
            bool header = rows.front().size() == space.size();
            for (std::size_t j = 0; header && j < space.size(); ++j) header = rows.front()[j] == space[j].name;
            if (header) rows.erase(rows.begin());
        }
        if (rows.empty()) throw ValidationError("instance file " + arg + " has no data row");
    } else {
        rows = parse_csv(arg);
        if (rows.size() != 1) throw ValidationError("inline instance must be a single CSV record");
    }
    return parse_point(space, rows.front());
}

struct Session {
    std::shared_ptr<const Oracle> oracle;
    ExplanationProblem problem;
};

std::shared_ptr<const Oracle> open_model(const Options& o)
{
    if (o.model.empty()) throw ValidationError("--model is required");
    auto model = std::make_shared<const Model>(load_model(o.model));
    return std::make_shared<const Oracle>(std::move(model), parse_backend(o.oracle));
}

Session open_session(const Options& o)
{
    auto oracle = open_model(o);
    Point v = read_instance(oracle->space(), o.instance);
    std::optional<ClassIndex> c;
    if (!o.klass.empty()) c = oracle->model().class_index(o.klass);
    auto p = ExplanationProblem::create(oracle, std::move(v), c);
    return Session{oracle, std::move(p)};
}

InflationConfig inflation_config(const Options& o)
{
    InflationConfig cfg;
    cfg.delta = parse_rational(o.delta);
    if (!o.beta.empty()) cfg.beta = parse_rational(o.beta);
    cfg.strategy = parse_strategy(o.strategy);
    cfg.order = zero_based(o.order);
    cfg.validate_input = false;
    check_config(cfg);
    return cfg;
}

Json header(const std::string& command, const ExplanationProblem& p)
{
    Json doc = Json::object();
    doc["command"] = command;
    doc["instance"] = point_json(p.space(), p.point());
    doc["class"] = p.model().classes[p.class_id()];
    return doc;
}

Output cmd_predict(const Options& o)
{
    auto oracle = open_model(o);
    const Point v = read_instance(oracle->space(), o.instance);
    const auto c = predict(oracle->model(), v);
    Output out;
    out.doc["command"] = "predict";
    out.doc["instance"] = point_json(oracle->space(), v);
    out.doc["class"] = oracle->model().classes[c];
    out.text = oracle->model().classes[c] + "\n";
    return out;
}

Output cmd_explain(const Options& o)
{
    auto s = open_session(o);
    const auto order = zero_based(o.order);
    const auto axp = find_axp(s.problem, order);
    const auto cxp = find_cxp(s.problem, order);
    Output out;
    out.doc = header("explain", s.problem);
    out.doc["axp"] = one_based(axp);
    out.doc["cxp"] = one_based(cxp);
    out.doc["oracle_calls"] = s.problem.calls();
    out.text = "AXp " + to_string(axp) + "\nCXp " + to_string(cxp) + "\n";
    return out;
}

Output cmd_inflate(const Options& o)
{
    auto s = open_session(o);
    const auto cfg = inflation_config(o);
    const auto& p = s.problem;
    InflatedExplanation x;
    FeatureSet axp;
    if (o.from_full) {
        x = inflate_from_full(p, cfg);
        axp = x.features;
    } else {
        axp = find_axp(p, cfg.order);
        x = inflate_axp(p, axp, cfg);
    }
    Output out;
    out.doc = header("inflate", p);
    out.doc["axp"] = one_based(axp);
    out.doc["order"] = one_based(x.probe_order);
    out.doc["delta"] = format_rational(cfg.delta);
    out.doc["strategy"] = o.strategy;
    out.doc["sets"] = explanation_json(p.model(), x, true);
    out.doc["total_added"] = x.total_added();
    const auto rule = render_rule(p.model(), x, p.class_id());
    out.doc["rule"] = rule;
    out.doc["oracle_calls"] = p.calls();
    out.text = rule + "\n";
    return out;
}

Output cmd_enumerate(const Options& o)
{
    auto s = open_session(o);
    const auto e = enumerate_all(s.problem);
    Json axps = Json::array(), cxps = Json::array();
    std::ostringstream text;
    for (const auto& x : e.axps) {
        axps.push_back(one_based(x));
        text << "AXp " << to_string(x) << "\n";
    }
    for (const auto& y : e.cxps) {
        cxps.push_back(one_based(y));
        text << "CXp " << to_string(y) << "\n";
    }
    const bool dual = minimal_hitting_sets(e.cxps) == e.axps && minimal_hitting_sets(e.axps) == e.cxps;
    Output out;
    out.doc = header("enumerate", s.problem);
    out.doc["axps"] = std::move(axps);
    out.doc["cxps"] = std::move(cxps);
    out.doc["hitting_set_duality"] = dual;
    out.doc["oracle_calls"] = s.problem.calls();
    text << "duality " << (dual ? "holds" : "FAILS") << "\n";
    out.text = text.str();
    return out;
}

Output cmd_shrink(const Options& o)
{
    auto s = open_session(o);
    const auto order = zero_based(o.order);
    FeatureSet cxp = o.cxp.empty() ? find_cxp(s.problem, order) : make_feature_set(zero_based(o.cxp));
    const auto y = shrink_cxp(s.problem, cxp, order);
    Output out;
    out.doc = header("shrink-cxp", s.problem);
    out.doc["cxp"] = one_based(cxp);
    out.doc["sets"] = explanation_json(s.problem.model(), y, true);
    const auto rule = render_contrast(s.problem.model(), y, s.problem.class_id());
    out.doc["rule"] = rule;
    out.doc["oracle_calls"] = s.problem.calls();
    out.text = rule + "\n";
    return out;
}

Output cmd_dual(const Options& o)
{
    auto s = open_session(o);
    const auto& p = s.problem;
    const auto cfg = inflation_config(o);
    const auto sets = enumerate_inflated(p, cfg);
    const auto& m = p.model();
    std::ostringstream text;

    Json iaxps = Json::array(), icxps = Json::array(), hits = Json::array(), violations = Json::array();
    for (const auto& x : sets.iaxps) {
        iaxps.push_back(render_rule(m, x, p.class_id()));
        text << "iAXp " << render_rule(m, x, p.class_id()) << "\n";
    }
    for (const auto& y : sets.icxps) {
        icxps.push_back(render_contrast(m, y, p.class_id()));
        text << "iCXp " << render_contrast(m, y, p.class_id()) << "\n";
    }
    for (std::size_t a = 0; a < sets.iaxps.size(); ++a) {
        for (std::size_t c = 0; c < sets.icxps.size(); ++c) {
            const auto j = check_hits(p, sets.iaxps[a], sets.icxps[c]);
            Json h = Json::object();
            h["iaxp"] = a;
            h["icxp"] = c;
            if (j) {
                h["feature"] = *j + 1;
                hits.push_back(std::move(h));
            } else {
                h["iaxp_sets"] = explanation_json(m, sets.iaxps[a], false);
                h["icxp_sets"] = explanation_json(m, sets.icxps[c], false);
                violations.push_back(std::move(h));
            }
        }
    }

    auto constructions = [&](const SelectionResult& r, bool abductive) {
        Json j = Json::object();
        Json built = Json::array(), failed = Json::array();
        for (const auto& x : r.minimal)
            built.push_back(abductive ? render_rule(m, x, p.class_id()) : render_contrast(m, x, p.class_id()));
        for (const auto& f : r.failures) {
            Json q = Json::object();
            q["selection"] = one_based(make_feature_set(f.selection));
            q["candidate"] = explanation_json(m, f.candidate, false);
            q["reason"] = f.reason;
            failed.push_back(std::move(q));
        }
        j["minimal"] = std::move(built);
        j["failures"] = std::move(failed);
        return j;
    };

    Output out;
    out.doc = header("dual", p);
    out.doc["iaxps"] = std::move(iaxps);
    out.doc["icxps"] = std::move(icxps);
    out.doc["hits"] = std::move(hits);
    out.doc["icxps_from_iaxps"] = constructions(icxps_by_selection(p, sets.iaxps), false);
    bool finite = p.oracle().discretization() != nullptr;
    if (finite) {
        std::vector<FeatureSet> cxps;
        for (const auto& y : sets.icxps) cxps.push_back(y.features);
        const auto atoms = atomic_icxps(p, cxps);
        out.doc["iaxps_from_icxps"] = constructions(iaxps_by_selection(p, atoms, cfg), true);
    }
    const bool clean = violations.empty();
    out.doc["violations"] = std::move(violations);
    out.doc["oracle_calls"] = p.calls();
    text << (clean ? "every iAXp hits every iCXp" : "HIT VIOLATIONS FOUND") << "\n";
    out.text = text.str();
    out.code = clean ? 0 : 1;
    return out;
}

Output cmd_train(const Options& o)
{
    if (o.data.empty()) throw ValidationError("--data is required");
    CsvOptions csv;
    if (!o.label.empty()) csv.label = o.label;
    const auto data = load_dataset(o.data, csv);
    ForestOptions fo;
    fo.trees = o.trees;
    fo.max_depth = o.depth;
    fo.seed = o.seed;
    if (o.max_features) fo.max_features = o.max_features;
    const auto model = train_forest(data, fo);
    Output out;
    out.doc["command"] = "train-rf";
    out.doc["trees"] = fo.trees;
    out.doc["max_depth"] = fo.max_depth;
    out.doc["seed"] = fo.seed;
    out.doc["rows"] = data.rows.size();
    out.doc["train_accuracy"] = accuracy(model, data);
    out.text = dump_model(model);
    out.doc["model"] = Json::parse(out.text);
    return out;
}

std::vector<Point> bench_instances(const Options& o, const FeatureSpace& space)
{
    if (o.data.empty()) return random_points(space, o.samples, o.seed);
    auto rows = parse_csv(read_text_file(o.data));
    if (rows.size() < 2) throw ValidationError("dataset " + o.data + " has no rows");
    std::vector<std::size_t> cols;
    for (const auto& f : space.features()) {
        std::size_t found = rows.front().size();
        for (std::size_t c = 0; c < rows.front().size(); ++c) {
            auto name = rows.front()[c];
            if (auto colon = name.rfind(':'); colon != std::string::npos) name = name.substr(0, colon);
            if (name == f.name) found = c;
        }
        if (found == rows.front().size()) throw ValidationError("dataset lacks column " + f.name);
        cols.push_back(found);
    }
    std::vector<std::size_t> idx(rows.size() - 1);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
    std::mt19937_64 rng(o.seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(idx.size(), o.samples));
    std::vector<Point> out;
    for (auto r : idx) {
        std::vector<std::string> fields;
        for (auto c : cols) fields.push_back(rows[r].at(c));
        out.push_back(parse_point(space, fields));
    }
    return out;
}

Output cmd_bench(const Options& o)
{
    auto oracle = open_model(o);
    const auto cfg = inflation_config(o);
    const auto instances = bench_instances(o, oracle->space());
    const auto report = run_bench(oracle, instances, cfg, o.threads);
    const auto& space = oracle->space();
    Json records = Json::array();
    for (const auto& r : report.records) {
        Json j = Json::object();
        j["index"] = r.index;
        j["instance"] = point_json(space, r.point);
        j["class"] = oracle->model().classes[r.class_id];
        j["axp"] = one_based(r.axp);
        j["axp_len"] = r.axp.size();
        Json added = Json::object();
        for (const auto& [f, n] : r.added) added[space[f].name] = n;
        j["added"] = std::move(added);
        j["total_added"] = r.total_added;
        j["oracle_calls"] = r.oracle_calls;
        j["axp_time"] = r.axp_seconds;
        j["inflate_time"] = r.inflate_seconds;
        records.push_back(std::move(j));
    }
    const auto& a = report.aggregates;
    Json agg = Json::object();
    agg["Len"] = a.len;
    agg["Time"] = a.time;
    agg["m"] = a.min_added;
    agg["M"] = a.max_added;
    agg["avg"] = a.avg_added;
    Output out;
    out.doc["command"] = "bench";
    out.doc["instances"] = report.records.size();
    out.doc["records"] = std::move(records);
    out.doc["aggregates"] = std::move(agg);
    std::ostringstream text;
    text << std::fixed << std::setprecision(3) << "instances " << report.records.size() << "\n"
         << "Len " << a.len << "  Time " << a.time << "  m " << a.min_added << "  M " << a.max_added << "  avg "
         << a.avg_added << "\n";
    out.text = text.str();
    return out;
}

void add_model_options(CLI::App* c, Options& o, bool instance)
{
    c->add_option("--model", o.model, "model JSON file");
    if (instance) {
        c->add_option("--instance", o.instance, "CSV file or inline record, e.g. Junior,Red");
        c->add_option("--class", o.klass, "expected class; refuse when the model disagrees");
    }
    c->add_option("--oracle", o.oracle, "box | exhaustive | exhaustive-omp");
    c->add_option("--format", o.format, "json | text")->check(CLI::IsMember({"json", "text"}));
    c->add_option("--out", o.out, "write output to this file");
    c->add_option("--threads", o.threads, "worker threads (XINFLATE_THREADS caps this)");
}

void add_order(CLI::App* c, Options& o)
{
    c->add_option("--order", o.order, "feature order, 1-based, comma separated")->delimiter(',');
}

void add_inflation(CLI::App* c, Options& o)
{
    c->add_option("--delta", o.delta, "grid step for ordinal search");
    c->add_option("--beta", o.beta, "coarse step for linear search (multiple of delta)");
    c->add_option("--strategy", o.strategy, "linear | binary")->check(CLI::IsMember({"linear", "binary"}));
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Abductive and contrastive explanations, inflated"};
    app.name("xinflate");
    app.require_subcommand(1);
    Options o;

    auto* predict_cmd = app.add_subcommand("predict", "classify an instance");
    add_model_options(predict_cmd, o, true);

    auto* explain_cmd = app.add_subcommand("explain", "one AXp and one CXp");
    add_model_options(explain_cmd, o, true);
    add_order(explain_cmd, o);

    auto* inflate_cmd = app.add_subcommand("inflate", "compute an AXp and inflate it");
    add_model_options(inflate_cmd, o, true);
    add_order(inflate_cmd, o);
    add_inflation(inflate_cmd, o);
    inflate_cmd->add_flag("--from-full", o.from_full, "inflate every feature and drop full-domain ones");

    auto* enumerate_cmd = app.add_subcommand("enumerate", "all AXps and CXps");
    add_model_options(enumerate_cmd, o, true);

    auto* shrink_cmd = app.add_subcommand("shrink-cxp", "strong inflated CXp");
    add_model_options(shrink_cmd, o, true);
    add_order(shrink_cmd, o);
    shrink_cmd->add_option("--cxp", o.cxp, "CXp features, 1-based; computed when omitted")->delimiter(',');

    auto* dual_cmd = app.add_subcommand("dual", "inflated explanation duality report");
    add_model_options(dual_cmd, o, true);
    add_order(dual_cmd, o);
    add_inflation(dual_cmd, o);

    auto* train_cmd = app.add_subcommand("train-rf", "train a bagged tree ensemble from CSV");
    train_cmd->add_option("--data", o.data, "CSV dataset")->required();
    train_cmd->add_option("--label", o.label, "label column (default: last)");
    train_cmd->add_option("--trees", o.trees, "number of trees");
    train_cmd->add_option("--depth", o.depth, "maximum depth");
    train_cmd->add_option("--max-features", o.max_features, "features tried per split (default ceil(sqrt(m)))");
    train_cmd->add_option("--seed", o.seed, "random seed");
    train_cmd->add_option("--out", o.out, "model output file (stdout when omitted)");
    train_cmd->add_option("--format", o.format, "json | text")->check(CLI::IsMember({"json", "text"}));

    auto* bench_cmd = app.add_subcommand("bench", "AXp plus inflation over many instances");
    add_model_options(bench_cmd, o, false);
    add_order(bench_cmd, o);
    add_inflation(bench_cmd, o);
    bench_cmd->add_option("--data", o.data, "CSV to sample instances from (random points when omitted)");
    bench_cmd->add_option("--samples", o.samples, "number of instances");
    bench_cmd->add_option("--seed", o.seed, "sampling seed");

    std::vector<std::string> argv_store;
    argv_store.push_back("xinflate");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    set_worker_override(o.threads);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Output result;
        if (*predict_cmd) result = cmd_predict(o);
        else if (*explain_cmd) result = cmd_explain(o);
        else if (*inflate_cmd) result = cmd_inflate(o);
        else if (*enumerate_cmd) result = cmd_enumerate(o);
        else if (*shrink_cmd) result = cmd_shrink(o);
        else if (*dual_cmd) result = cmd_dual(o);
        else if (*train_cmd) result = cmd_train(o);
        else result = cmd_bench(o);

        const bool training = train_cmd->parsed();
        if (!training) result.doc["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string payload;
        if (training) {
            // The model goes to --out; the summary goes to stdout.
            if (!o.out.empty()) {
                write_text_file(o.out, result.text);
                result.doc.erase("model");
                payload = o.format == "json" ? result.doc.dump(2) + "\n"
                                             : "train accuracy " + std::to_string(result.doc["train_accuracy"].get<double>()) + "\n";
            } else {
                payload = result.text;
            }
            out << payload;
        } else {
            payload = o.format == "json" ? result.doc.dump(2) + "\n" : result.text;
            if (o.out.empty()) out << payload;
            else write_text_file(o.out, payload);
        }
        set_worker_override(0);
        return result.code;
    } catch (const ValidationError& e) {
        set_worker_override(0);
        err << "xinflate: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        set_worker_override(0);
        err << "xinflate: internal error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace xinflate
