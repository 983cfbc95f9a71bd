#include "teichstab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace teichstab {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidConfig, what);
}

std::vector<cplx> parse_series(const json& j, const std::string& name) {
    require(j.is_array() && !j.empty(), name + " must be a nonempty array of [re, im] pairs");
    std::vector<cplx> out;
    for (const auto& p : j) {
        require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(), name + " entries must be [re, im]");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorKind::InvalidConfig, std::string("wrong type for '") + key + "'");
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    require(j.is_object(), "config must be a JSON object");
    ExperimentConfig c;
    require(j.contains("base_surface") && j["base_surface"].is_object(), "missing 'base_surface'");
    c.base = SurfaceSpec::from_json_text(j["base_surface"].dump());
    require(j.contains("perturbation") && j["perturbation"].is_object(), "missing 'perturbation'");
    const json& p = j["perturbation"];
    require(p.contains("direction"), "missing 'perturbation.direction'");
    c.direction = parse_series(p["direction"], "perturbation.direction");
    require(p.contains("epsilons") && p["epsilons"].is_array(), "missing 'perturbation.epsilons'");
    for (const auto& e : p["epsilons"]) {
        require(e.is_number(), "epsilons must be numbers");
        c.epsilons.push_back(e.get<double>());
    }
    if (j.contains("r0_ladder")) c.alpha.r0_ladder = get_or<std::vector<double>>(j, "r0_ladder", {});
    if (j.contains("probes")) {
        const json& q = j["probes"];
        c.alpha.interior_probes = get_or(q, "interior", c.alpha.interior_probes);
        const auto strip = get_or<std::vector<int>>(q, "strip", {c.alpha.strip_l, c.alpha.strip_r});
        const auto ring = get_or<std::vector<int>>(q, "ring", {c.alpha.blend_l, c.alpha.blend_r});
        require(strip.size() == 2 && ring.size() == 2, "probes.strip and probes.ring are [n_l, n_r]");
        c.alpha.strip_l = strip[0];
        c.alpha.strip_r = strip[1];
        c.alpha.blend_l = ring[0];
        c.alpha.blend_r = ring[1];
        c.alpha.overlap_probes = get_or(q, "overlap", c.alpha.overlap_probes);
    }
    if (j.contains("charts")) {
        const json& q = j["charts"];
        c.model.n_charts = get_or(q, "count", c.model.n_charts);
        const auto cheb = get_or<std::vector<int>>(q, "chebyshev", {c.model.cheb1, c.model.cheb2});
        require(cheb.size() == 2, "charts.chebyshev is [n1, n2]");
        c.model.cheb1 = cheb[0];
        c.model.cheb2 = cheb[1];
    }
    if (j.contains("tolerances")) {
        const json& q = j["tolerances"];
        c.alpha.glue_tol = get_or(q, "glue", c.alpha.glue_tol);
        c.trace_tol = get_or(q, "trace", c.trace_tol);
        c.rank_tol = get_or(q, "rank", c.rank_tol);
        c.alpha.fd_step = get_or(q, "fd_step", c.alpha.fd_step);
    }
    c.alpha.seed = get_or(j, "seed", c.alpha.seed);
    c.record_timing = get_or(j, "record_timing", c.record_timing);
    if (j.contains("outputs")) {
        c.csv_name = get_or<std::string>(j["outputs"], "csv", c.csv_name);
        c.plot_name = get_or<std::string>(j["outputs"], "plot", c.plot_name);
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void ExperimentConfig::validate() const {
    require(!epsilons.empty(), "epsilon list is empty");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        require(std::isfinite(epsilons[k]) && epsilons[k] >= 0.0, "epsilons must be nonnegative");
        if (k > 0) require(epsilons[k] < epsilons[k - 1], "epsilons must be strictly decreasing");
    }
    const int n = base.grid.n_samples();
    require(n >= 64 && n <= 1024, "n_samples must lie in [64, 1024]");
    require(!direction.empty() && direction.size() <= 64, "perturbation.direction needs 1..64 coefficients");
    require(!alpha.r0_ladder.empty(), "r0_ladder is empty");
    for (std::size_t k = 0; k < alpha.r0_ladder.size(); ++k) {
        require(alpha.r0_ladder[k] > 0.0 && alpha.r0_ladder[k] <= 1.0, "r0_ladder entries must lie in (0, 1]");
        if (k > 0) require(alpha.r0_ladder[k] < alpha.r0_ladder[k - 1], "r0_ladder must be decreasing");
    }
    require(alpha.interior_probes >= 4 && alpha.interior_probes <= 64, "probes.interior must lie in [4, 64]");
    require(alpha.strip_l >= 4 && alpha.strip_l <= 256 && alpha.strip_r >= 1 && alpha.strip_r <= 32, "probes.strip out of range");
    require(alpha.blend_l >= 4 && alpha.blend_l <= 256 && alpha.blend_r >= 1 && alpha.blend_r <= 32, "probes.ring out of range");
    require(alpha.overlap_probes >= 0 && alpha.overlap_probes <= 10000, "probes.overlap out of range");
    require(model.n_charts >= 8 && model.n_charts <= 64, "charts.count must lie in [8, 64]");
    require(model.cheb1 >= 8 && model.cheb1 <= 48 && model.cheb2 >= 8 && model.cheb2 <= 48, "charts.chebyshev out of range");
    require(alpha.glue_tol > 0.0 && alpha.glue_tol <= 1e-2, "tolerances.glue must lie in (0, 1e-2]");
    require(trace_tol > 0.0 && trace_tol <= 1e-2, "tolerances.trace must lie in (0, 1e-2]");
    require(rank_tol > 0.0 && rank_tol <= 1e-2, "tolerances.rank must lie in (0, 1e-2]");
    require(alpha.fd_step >= 1e-6 && alpha.fd_step <= 1e-2, "tolerances.fd_step must lie in [1e-6, 1e-2]");
    for (const std::string& name : {csv_name, plot_name})
        require(!name.empty() && name.find('/') == std::string::npos, "output names must be plain file names");
}

int worker_count(int jobs) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("TEICHSTAB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, std::min(n, jobs));
}

std::vector<ExperimentRow> run_stability(const ExperimentConfig& config) {
    config.validate();
    const BoundaryGrid grid = config.base.grid;
    const double L = grid.total_length();
    const SurfaceSpec base = normalize_length(config.base, L);
    validate_surface(base);
    auto lam = std::make_shared<const DnMap>(pushforward_dn(base));
    Embedding E({{boundary_trace(base, [&](cplx z) { return base.F(z); }), lam}}, lam);
    auto M = std::make_shared<const SurfaceModel>(E, config.model);

    std::vector<ExperimentRow> rows(config.epsilons.size());
    auto work = [&](std::size_t k) {
        ExperimentRow& row = rows[k];
        row.epsilon = config.epsilons[k];
        row.t = std::nan("");
        const auto t0 = std::chrono::steady_clock::now();
        try {
            SurfaceSpec s = base;
            if (s.series.size() < config.direction.size()) s.series.resize(config.direction.size(), 0.0);
            for (std::size_t i = 0; i < config.direction.size(); ++i) s.series[i] += row.epsilon * config.direction[i];
            s = normalize_length(s, L);
            validate_surface(s);
            auto lp = row.epsilon == 0.0 ? lam : std::make_shared<const DnMap>(pushforward_dn(s));
            row.t = dn_distance(*lam, *lp);
            const TraceProjector Pp = projector_P(*lp, config.rank_tol);
            Embedding Ep = induced_embedding(E, lp, Pp, config.trace_tol, 0, {base.F(0.0)});
            for (int i = 0; i < E.size(); ++i) row.beta_c1 = std::max(row.beta_c1, (Ep.eta(i) - E.eta(i)).cm_norm(1));
            auto Mp = std::make_shared<const SurfaceModel>(std::move(Ep), config.model);
            const AlphaBuild b = build_alpha(M, Mp, config.alpha);
            row.report = b.report;
            row.K_minus_1 = b.report.K - 1.0;
            row.teich_upper = b.report.teich_upper;
            row.displacement = b.report.displacement;
            row.hausdorff = b.report.hausdorff;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        if (config.record_timing) row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const int n_workers = worker_count(static_cast<int>(rows.size()));
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) work(k);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(loop);
    loop();
    for (auto& th : pool) th.join();
    return rows;
}

const char* const kCsvHeader = "epsilon,t,K_minus_1,teich_upper,displacement,hausdorff,seconds";

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + p.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + p.string());
}

}  // namespace

std::string format_csv(const std::vector<ExperimentRow>& rows) {
    std::string s = std::string(kCsvHeader) + "\n";
    const double nan = std::nan("");
    for (const auto& r : rows) {
        const bool f = r.failed;
        s += num(r.epsilon) + "," + num(r.t) + "," + num(f ? nan : r.K_minus_1) + "," + num(f ? nan : r.teich_upper) + "," +
             num(f ? nan : r.displacement) + "," + num(f ? nan : r.hausdorff) + "," + num(r.seconds) + "\n";
    }
    return s;
}

std::vector<ExperimentRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorKind::InvalidArgument, "unexpected CSV header");
    std::vector<ExperimentRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
        if (v.size() != 7) throw Error(ErrorKind::InvalidArgument, "CSV row with " + std::to_string(v.size()) + " fields");
        ExperimentRow r;
        r.epsilon = v[0];
        r.t = v[1];
        r.K_minus_1 = v[2];
        r.teich_upper = v[3];
        r.displacement = v[4];
        r.hausdorff = v[5];
        r.seconds = v[6];
        r.failed = std::isnan(v[2]);
        rows.push_back(r);
    }
    return rows;
}

int emit_report(const std::vector<ExperimentRow>& rows, const std::filesystem::path& dir, const ExperimentConfig& config) {
    if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "no rows to report");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / config.csv_name, format_csv(rows));

    std::string plot = "# t teich_upper\n";
    for (const auto& r : rows)
        if (!r.failed) plot += num(r.t) + " " + num(r.teich_upper) + "\n";
    write_file(dir / config.plot_name, plot);

    json summary = json::array();
    int failed = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        json j;
        j["epsilon"] = r.epsilon;
        j["failed"] = r.failed;
        if (r.failed) {
            ++failed;
            j["error"] = r.error;
        } else {
            j["t"] = r.t;
            j["beta_c1"] = r.beta_c1;
            j["report"] = json::parse(r.report.to_json());
        }
        summary.push_back(j);
    }
    write_file(dir / "rows.json", summary.dump(2) + "\n");
    return failed == 0 ? 0 : 2;
}

}  // namespace teichstab
