#include "cli.hpp"

#include "relaq/artifacts.hpp"
#include "relaq/error.hpp"
#include "relaq/matcher.hpp"
#include "relaq/recommender.hpp"
#include "relaq/result_json.hpp"
#include "relaq/service.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace relaq::cli {

namespace {

namespace fs = std::filesystem;

struct Failure {
    int code;
    std::string message;
};

std::string read_text(const fs::path& path, int code)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Failure{code, "cannot read " + path.string()};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<fs::path> data_root()
{
    if (const char* env = std::getenv("RELAQ_DATA_DIR"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return std::nullopt;
}

fs::path resolve_dir(const std::string& dir)
{
    fs::path p(dir);
    if (!fs::exists(p)) {
        if (auto root = data_root(); root && fs::exists(*root / p)) {
            return *root / p;
        }
    }
    return p;
}

std::shared_ptr<const Artifacts> load(const std::string& dir)
{
    try {
        return load_artifacts(resolve_dir(dir));
    } catch (const Error& e) {
        throw Failure{kDataError, std::string(e.name()) + ": " + e.detail()};
    }
}

QueryGraph load_query(const std::string& file)
{
    try {
        return parse_query(read_text(file, kQueryError));
    } catch (const Error& e) {
        throw Failure{kQueryError, std::string(e.name()) + " at " + e.path() + ": " + e.detail()};
    }
}

void check_query(const QueryGraph& q, const Artifacts& artifacts)
{
    for (const auto& d : validate_query(q, artifacts)) {
        if (d.severity == Severity::Error) {
            throw Failure{kQueryError, d.code + (d.subject.empty() ? "" : " (" + d.subject + ")") + ": " + d.message};
        }
    }
}

void emit(const std::string& text, const std::string& out_file, std::ostream& out)
{
    if (out_file.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_file, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Failure{kDataError, "cannot write " + out_file};
    }
    f << text;
}

struct IngestArgs {
    std::string data;
    std::string config;
    int sampling = 0;
    int box = 0;
    std::string out;
};

void ingest(const IngestArgs& a, std::ostream& out)
{
    std::shared_ptr<const Artifacts> artifacts;
    try {
        PreprocessParams params;
        params.sampling_length = a.sampling;
        params.box_length = a.box;
        auto dataset = parse_dataset(read_text(a.data, kDataError));
        auto labels = a.config.empty() ? MetaLabels{} : parse_config(read_text(a.config, kDataError));
        for (const auto& d : validate(dataset, labels)) {
            if (d.severity == Severity::Error) {
                throw Failure{kDataError, d.code + " (" + d.subject + "): " + d.message};
            }
        }
        artifacts = preprocess(std::move(dataset), std::move(labels), params);
        fs::path dir;
        if (!a.out.empty()) {
            dir = a.out;
        } else if (auto root = data_root()) {
            dir = *root / artifacts->id();
        } else {
            throw Failure{kUsage, "--out is required when RELAQ_DATA_DIR is not set"};
        }
        save_artifacts(*artifacts, dir);
        out << artifacts->id() << ' ' << dir.string() << '\n';
    } catch (const Error& e) {
        std::string where = e.row() ? " (row " + std::to_string(*e.row()) + ")" : "";
        throw Failure{kDataError, std::string(e.name()) + where + ": " + e.detail()};
    }
}

struct QueryArgs {
    std::string dir;
    std::string query;
    std::string format = "json";
    bool fuzzy = false;
    std::string out;
    long timeout_ms = 30000;
};

void query(const QueryArgs& a, std::ostream& out)
{
    const auto artifacts = load(a.dir);
    auto q = load_query(a.query);
    if (a.fuzzy) {
        q.mode = MatchMode::Fuzzy;
    }
    check_query(q, *artifacts);
    try {
        ExecuteOptions opt;
        opt.timeout = std::chrono::milliseconds(a.timeout_ms);
        const auto result = execute_query(q, *artifacts, opt);
        emit(a.format == "csv" ? results_csv(q, *artifacts, result) : results_json(q, *artifacts, result), a.out, out);
    } catch (const Error& e) {
        throw Failure{kQueryError, std::string(e.name()) + ": " + e.detail()};
    }
}

struct RecommendArgs {
    std::string dir;
    std::string query;
    std::string focus;
    std::vector<long> lags;
    std::string out;
};

void recommend_cmd(const RecommendArgs& a, std::ostream& out)
{
    const auto artifacts = load(a.dir);
    const auto q = load_query(a.query);
    check_query(q, *artifacts);
    try {
        RecommendOptions opt;
        if (a.lags.size() == 2) {
            opt.lag_range = LagRange{a.lags[0], a.lags[1]};
        }
        const auto matrix = recommend(q, a.focus, *artifacts, opt);
        emit(guidance_json(q, matrix), a.out, out);
    } catch (const Error& e) {
        throw Failure{kQueryError, std::string(e.name()) + ": " + e.detail()};
    }
}

struct ServeArgs {
    std::string dir;
    int port = 8080;
    std::string host = "127.0.0.1";
};

void serve(const ServeArgs& a, std::ostream& out)
{
    Service service;
    const auto root = resolve_dir(a.dir);
    if (fs::exists(root / "manifest.json")) {
        service.add(load(root.string()));
    } else if (fs::is_directory(root)) {
        for (const auto& entry : fs::directory_iterator(root)) {
            if (fs::exists(entry.path() / "manifest.json")) {
                service.add(load(entry.path().string()));
            }
        }
    } else {
        throw Failure{kDataError, "no artifacts under " + root.string()};
    }
    out << "listening on " << a.host << ':' << a.port << std::endl;
    if (!service.listen(a.host, a.port)) {
        throw Failure{kUsage, "cannot bind " + a.host + ":" + std::to_string(a.port)};
    }
}

struct BenchArgs {
    std::string dir;
    int series = 32;
    int length = 2000;
    int sampling = 5;
    int box = 50;
    unsigned seed = 7;
};

// Random walks sharing a few latent factors, so every series has strongly
// correlated partners.
Dataset synthetic(int n, int m, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int factors = 4;
    std::vector<std::vector<double>> latent(factors, std::vector<double>(static_cast<std::size_t>(m)));
    for (auto& f : latent) {
        double v = 0.0;
        for (auto& x : f) {
            v += noise(rng);
            x = v;
        }
    }
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (int i = 0; i < n; ++i) {
        std::ostringstream name;
        name << 's' << std::setw(4) << std::setfill('0') << i;
        names.push_back(name.str());
        const auto& f = latent[static_cast<std::size_t>(i % factors)];
        std::vector<double> s(static_cast<std::size_t>(m));
        for (std::size_t t = 0; t < s.size(); ++t) {
            s[t] = f[t] + 0.3 * noise(rng);
        }
        series.push_back(std::move(s));
    }
    return Dataset::with_index_time(std::move(names), std::move(series));
}

QueryGraph chain_query(const PreprocessParams& params, const Dataset& ds, int k)
{
    QueryGraph q;
    q.params = params;
    for (int i = 0; i < k; ++i) {
        Timebox b;
        b.id = "b" + std::to_string(i);
        if (i == 0) {
            b.name = ds.name(0);
        }
        q.timeboxes.push_back(b);
        if (i > 0) {
            Relalink l;
            l.id = "l" + std::to_string(i);
            l.kind = RelationKind::Correlation;
            l.source = "b" + std::to_string(i - 1);
            l.target = b.id;
            l.threshold = {0.9, 1.0};
            q.relalinks.push_back(l);
        }
    }
    return q;
}

void bench(const BenchArgs& a, std::ostream& out)
{
    if (a.series < 2 || a.length < 4 * a.box) {
        throw Failure{kUsage, "bench needs --series >= 2 and --length >= 4 * --box"};
    }
    PreprocessParams params;
    params.sampling_length = a.sampling;
    params.box_length = a.box;
    std::vector<int> ns{std::max(2, a.series / 4), std::max(2, a.series / 2), a.series};
    std::vector<int> ms{std::max(2 * a.box, a.length / 4), std::max(2 * a.box, a.length / 2), a.length};
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

    std::ostringstream table;
    table << "N,M,k,preprocess_ms,query_ms,results,query_ns_per_kN2M\n";
    for (int n : ns) {
        for (int m : ms) {
            using clock = std::chrono::steady_clock;
            const auto t0 = clock::now();
            PreprocessOptions popt;
            popt.budget = std::chrono::hours(1);
            auto artifacts = preprocess(synthetic(n, m, a.seed), {}, params, popt);
            const double pre_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            for (int k : {2, 3}) {
                const auto q = chain_query(params, artifacts->dataset(), k);
                const auto t1 = clock::now();
                const auto result = execute_query(q, *artifacts);
                const double q_ms = std::chrono::duration<double, std::milli>(clock::now() - t1).count();
                const double per = q_ms * 1e6 / (static_cast<double>(k) * n * n * m);
                table << n << ',' << m << ',' << k << ',' << std::fixed << std::setprecision(1) << pre_ms << ','
                      << q_ms << ',' << result.found << ',' << std::setprecision(4) << per << '\n';
                table.unsetf(std::ios::fixed);
            }
        }
    }
    out << table.str();
    const fs::path dir = resolve_dir(a.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / "bench.csv");
    if (!f) {
        throw Failure{kDataError, "cannot write " + (dir / "bench.csv").string()};
    }
    f << table.str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"relaq: relation-driven queries over multiple time series", "relaq"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest_cmd = app.add_subcommand("ingest", "preprocess a dataset into an artifact directory");
    ingest_cmd->add_option("data", ingest_args.data, "data CSV (time column + one column per series)")->required();
    ingest_cmd->add_option("config", ingest_args.config, "config CSV (name column + label columns)");
    ingest_cmd->add_option("--sampling", ingest_args.sampling, "sampling length in samples")->required();
    ingest_cmd->add_option("--box", ingest_args.box, "box length in samples")->required();
    ingest_cmd->add_option("--out", ingest_args.out, "artifact directory (default $RELAQ_DATA_DIR/<id>)");

    QueryArgs query_args;
    auto* query_cmd = app.add_subcommand("query", "run a query graph against an artifact directory");
    query_cmd->add_option("dir", query_args.dir)->required();
    query_cmd->add_option("query", query_args.query, "query graph JSON")->required();
    query_cmd->add_option("--format", query_args.format)->check(CLI::IsMember({"json", "csv"}));
    query_cmd->add_flag("--fuzzy", query_args.fuzzy, "force fuzzy matching");
    query_cmd->add_option("--out", query_args.out, "write results to a file");
    query_cmd->add_option("--timeout-ms", query_args.timeout_ms)->check(CLI::PositiveNumber);

    RecommendArgs rec_args;
    auto* rec_cmd = app.add_subcommand("recommend", "guidance matrix for a focus timebox");
    rec_cmd->add_option("dir", rec_args.dir)->required();
    rec_cmd->add_option("query", rec_args.query)->required();
    rec_cmd->add_option("--focus", rec_args.focus, "timebox id")->required();
    rec_cmd->add_option("--lag-range", rec_args.lags, "lo hi, in compressed samples")->expected(2);
    rec_cmd->add_option("--out", rec_args.out);

    ServeArgs serve_args;
    auto* serve_cmd = app.add_subcommand("serve", "serve artifact directories over HTTP");
    serve_cmd->add_option("dir", serve_args.dir, "artifact directory or a directory of them")->required();
    serve_cmd->add_option("--port", serve_args.port)->required();
    serve_cmd->add_option("--host", serve_args.host);

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "synthetic scaling report over N, M and query size");
    bench_cmd->add_option("dir", bench_args.dir, "where bench.csv is written")->required();
    bench_cmd->add_option("--series", bench_args.series)->required();
    bench_cmd->add_option("--length", bench_args.length)->required();
    bench_cmd->add_option("--sampling", bench_args.sampling);
    bench_cmd->add_option("--box", bench_args.box);
    bench_cmd->add_option("--seed", bench_args.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*ingest_cmd) {
            ingest(ingest_args, out);
        } else if (*query_cmd) {
            query(query_args, out);
        } else if (*rec_cmd) {
            recommend_cmd(rec_args, out);
        } else if (*serve_cmd) {
            serve(serve_args, out);
        } else if (*bench_cmd) {
            bench(bench_args, out);
        }
    } catch (const Failure& f) {
        err << "relaq: " << f.message << '\n';
        return f.code;
    } catch (const Error& e) {
        err << "relaq: " << e.name() << ": " << e.detail() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "relaq: " << e.what() << '\n';
        return kDataError;
    }
    return kOk;
}

} // namespace relaq::cli
