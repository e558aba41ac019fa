#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace relaq::testkit {

namespace fs = std::filesystem;

fs::path fixture_dir()
{
    return fs::path(RELAQ_FIXTURE_DIR);
}

std::string read_fixture(const std::string& name)
{
    return read_file(fixture_dir() / name);
}

std::shared_ptr<const Artifacts> make_artifacts(std::vector<std::string> names, std::vector<std::vector<double>> series,
                                                PreprocessParams params, MetaLabels labels)
{
    PreprocessOptions opt;
    opt.budget = std::chrono::hours(1);
    return preprocess(Dataset::with_index_time(std::move(names), std::move(series)), std::move(labels), params, opt);
}

namespace {

std::vector<double> centered(std::vector<double> v)
{
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (auto& x : v) {
        x -= mean;
    }
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

} // namespace

std::vector<std::vector<double>> three_city_series()
{
    const std::vector<double> f{0.0, 1.0 / 3.0 + 0.1, 2.0 / 3.0, 1.0};
    // unit direction of the centered fragment, and a centered unit vector orthogonal to it
    auto e = centered(f);
    const double ne = std::sqrt(dot(e, e));
    for (auto& x : e) {
        x /= ne;
    }
    auto u = centered({1.0, -1.0, -1.0, 1.0});
    const double proj = dot(u, e);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] -= proj * e[i];
    }
    const double nu = std::sqrt(dot(u, u));
    for (auto& x : u) {
        x /= nu;
    }
    auto partner = [&](double r) {
        std::vector<double> s(12, 0.5);
        for (std::size_t i = 0; i < 4; ++i) {
            s[4 + i] = 0.5 + 0.4 * (r * e[i] + std::sqrt(1.0 - r * r) * u[i]);
        }
        return s;
    };
    std::vector<double> sf(12, 0.5);
    std::copy(f.begin(), f.end(), sf.begin() + 4);
    return {sf, partner(0.99), partner(0.98)};
}

QueryGraph three_city_query()
{
    QueryGraph q;
    q.params.sampling_length = 1;
    q.params.box_length = 4;
    Timebox sf;
    sf.id = "sf";
    sf.name = "SF";
    sf.sketch = {{0.0, 0.0}, {1.0, 1.0}};
    Timebox def;
    def.id = "def";
    q.timeboxes = {sf, def};
    Relalink link;
    link.id = "corr";
    link.kind = RelationKind::Correlation;
    link.source = "sf";
    link.target = "def";
    link.threshold = {0.8, 1.0};
    q.relalinks = {link};
    return q;
}

ThreeCities make_three_cities()
{
    ThreeCities out;
    out.artifacts = make_artifacts({"SF", "LA", "SD"}, three_city_series(), {1, 4, 4});
    out.query = three_city_query();
    out.sf_fragment = {0.0, 1.0 / 3.0 + 0.1, 2.0 / 3.0, 1.0};
    return out;
}

Dominance make_dominance(unsigned seed)
{
    std::mt19937_64 rng(seed);
    const std::size_t m = 240;
    // a 12-sample cycle under light noise: Yantai keeps the cycle and Beijing's noise,
    // Zhangjiakou only the cycle under heavy noise of its own
    const double pi = std::acos(-1.0);
    auto beijing = white_noise(rng, m, 0.3);
    for (std::size_t t = 0; t < m; ++t) {
        beijing[t] += std::sin(2.0 * pi * static_cast<double>(t) / 12.0);
    }
    auto yantai = beijing;
    auto zhangjiakou = beijing;
    auto small = white_noise(rng, m, 0.05);
    auto large = white_noise(rng, m, 0.8);
    for (std::size_t t = 0; t < m; ++t) {
        yantai[t] += small[t];
        zhangjiakou[t] += large[t];
    }
    Dominance d;
    d.artifacts = make_artifacts({"Beijing", "Dalian", "Qingdao", "Yantai", "Zhangjiakou"},
        {beijing, white_noise(rng, m), white_noise(rng, m), yantai, zhangjiakou}, {2, 24, 4});
    QueryGraph q;
    q.params = {2, 24, 4};
    Timebox z;
    z.id = "z";
    z.name = "Zhangjiakou";
    Timebox b;
    b.id = "b";
    b.name = "Beijing";
    q.timeboxes = {z, b};
    Relalink l;
    l.id = "zb";
    l.kind = RelationKind::Correlation;
    l.source = "z";
    l.target = "b";
    l.threshold = {0.8, 1.0};
    q.relalinks = {l};
    d.query = q;
    d.focus = "b";
    d.dominant = "Yantai";
    return d;
}

std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n, double step)
{
    std::normal_distribution<double> dist(0.0, step);
    std::vector<double> out(n);
    double v = 0.0;
    for (auto& x : out) {
        v += dist(rng);
        x = v;
    }
    return out;
}

std::vector<double> white_noise(std::mt19937_64& rng, std::size_t n, double sigma)
{
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<double> out(n);
    for (auto& x : out) {
        x = dist(rng);
    }
    return out;
}

TempDir::TempDir()
{
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path = fs::temp_directory_path()
        / ("relaq-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path);
}

TempDir::~TempDir()
{
    std::error_code ec;
    fs::remove_all(path, ec);
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace relaq::testkit
