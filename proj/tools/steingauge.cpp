// Command-line front end: density specs in, deterministic JSON/CSV reports out.
//
// Exit codes: 0 success (and, for verify/zoo, every non-skipped check passed),
// 1 failed checks or a computation error, 2 usage or spec error, 3 violated
// support precondition (dist) or a Stein solution outside a required boundary
// class when a comparison density was given (solve).

#include "steingauge/steingauge.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sg = steingauge;

namespace {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

std::string num_fmt(double v) { return sg::Json(v).dump(); }

std::optional<double> env_tail_mass() {
    const char* v = std::getenv("STEIN_GAUGE_TAIL_MASS");
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    double d = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(d > 0.0) || d >= 1.0)
        throw UsageError("STEIN_GAUGE_TAIL_MASS must be a number in (0, 1)");
    return d;
}

// Loads a spec file; when the environment overrides the default tail mass and
// the file does not pin one itself, the override wins.
sg::DensitySpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sg::SpecError("cannot open density spec '" + path + "'");
    sg::Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw sg::SpecError("cannot parse '" + path + "': " + e.what());
    }
    if (auto tm = env_tail_mass()) {
        bool pinned = j.contains("truncation") && j["truncation"].contains("tail_mass");
        if (!pinned) j["truncation"]["tail_mass"] = *tm;
    }
    return sg::density_spec_from_json(j);
}

void check_backend(const std::string& b) {
    if (b != "rational" && b != "float") throw UsageError("unknown backend '" + b + "'");
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": cannot parse '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

std::vector<int64_t> parse_int_list(const std::string& s, const char* what) {
    std::vector<int64_t> out;
    for (double v : parse_double_list(s, what)) {
        auto i = static_cast<int64_t>(v);
        if (static_cast<double>(i) != v) throw UsageError(std::string(what) + ": expected integers");
        out.push_back(i);
    }
    return out;
}

// "3..8" or a single "8" (meaning 1..8)
std::pair<int64_t, int64_t> parse_range(const std::string& s, const char* what) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int64_t hi = std::stoll(s);
            return {1, hi};
        }
        int64_t lo = std::stoll(s.substr(0, dots));
        int64_t hi = std::stoll(s.substr(dots + 2));
        if (lo < 1 || hi < lo) throw std::invalid_argument(s);
        return {lo, hi};
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": cannot parse range '" + s + "'");
    }
}

const char* inf_report_reason(sg::InfReason r) {
    switch (r) {
        case sg::InfReason::support_mismatch: return "support";
        case sg::InfReason::divergent_sum: return "divergent";
        default: return "";
    }
}

// ---------------------------------------------------------------------------
// dist

struct DistOpts {
    std::string p_path, q_path, metrics, backend = "rational", out = "-";
    bool csv = false;
};

template <class S>
int run_dist(const DistOpts& o) {
    sg::DensitySpec ps = load_spec(o.p_path);
    sg::DensitySpec qs = load_spec(o.q_path);
    auto p = sg::build_density<S>(ps);
    auto q = sg::build_density<S>(qs);

    std::vector<sg::MetricKind> wanted;
    if (o.metrics.empty()) {
        // the pairwise distances; the standalone information functional of q
        // only appears when asked for
        wanted = sg::all_metrics();
        std::erase(wanted, sg::MetricKind::i_functional);
    } else {
        std::stringstream ss(o.metrics);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto m = sg::parse_metric(tok);
            if (!m) throw UsageError("unknown metric '" + tok + "'");
            wanted.push_back(*m);
        }
    }

    // scale for the Poisson-referenced metrics: the target's own rate when p
    // is Poisson, otherwise the mean of p
    double lam = ps.family == sg::Family::poisson ? ps.lambda
                                                  : sg::ScalarTraits<S>::to_double(sg::moments(p).mean);
    S lamS = sg::ScalarTraits<S>::from_double(lam);

    sg::Json metrics;
    bool scaled_used = false;
    for (sg::MetricKind m : wanted) {
        const char* name = sg::metric_name(m);
        switch (m) {
            case sg::MetricKind::total_variation:
                metrics[name] = sg::ScalarTraits<S>::to_double(sg::total_variation(p, q));
                break;
            case sg::MetricKind::kolmogorov:
                metrics[name] = sg::ScalarTraits<S>::to_double(sg::kolmogorov(p, q));
                break;
            case sg::MetricKind::kullback_leibler: {
                auto v = sg::kl_divergence(q, p);
                metrics[name] = v.is_inf ? sg::json_number(HUGE_VAL, inf_report_reason(v.reason))
                                         : sg::Json(v.value);
                break;
            }
            case sg::MetricKind::j_gen: {
                auto v = sg::j_gen(p, q);
                metrics[name] = v.is_inf ? sg::json_number(HUGE_VAL, inf_report_reason(v.reason))
                                         : sg::Json(sg::ScalarTraits<S>::to_double(v.value));
                break;
            }
            case sg::MetricKind::k_gen:
                metrics[name] = sg::ScalarTraits<S>::to_double(sg::k_gen(p, q));
                break;
            case sg::MetricKind::k_scaled:
                scaled_used = true;
                metrics[name] = sg::ScalarTraits<S>::to_double(sg::k_scaled(lamS, q, qs.truncation));
                break;
            case sg::MetricKind::j_poisson: {
                scaled_used = true;
                auto v = sg::j_poisson(lamS, q, qs.truncation);
                metrics[name] = v.is_inf ? sg::json_number(HUGE_VAL, inf_report_reason(v.reason))
                                         : sg::Json(sg::ScalarTraits<S>::to_double(v.value));
                break;
            }
            case sg::MetricKind::i_functional: {
                auto v = sg::i_functional(q);
                metrics[name] = v.is_inf ? sg::json_number(HUGE_VAL, inf_report_reason(v.reason))
                                         : sg::Json(sg::ScalarTraits<S>::to_double(v.value));
                break;
            }
        }
    }

    sg::Json out;
    out["report"] = "dist";
    out["backend"] = o.backend;
    out["p"] = sg::density_spec_to_json(ps);
    out["q"] = sg::density_spec_to_json(qs);
    if (scaled_used) out["scale_lambda"] = lam;
    out["metrics"] = std::move(metrics);
    out["truncation"] = {{"p_dropped", p.dropped_tail()}, {"q_dropped", q.dropped_tail()}};

    if (o.csv) {
        std::ostringstream csv;
        csv << "metric,value,reason\n";
        for (auto& [k, v] : out["metrics"].items()) {
            if (v.is_object())
                csv << k << ',' << v["value"].template get<std::string>() << ','
                    << v["reason"].template get<std::string>() << '\n';
            else
                csv << k << ',' << num_fmt(v.template get<double>()) << ",\n";
        }
        sg::write_text(csv.str(), o.out);
    } else {
        sg::write_json(out, o.out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify / zoo

struct VerifyOpts {
    std::string suite, backend = "rational", out = "-";
    int pairs = 200;
    int64_t max_atoms = 12;
    std::uint64_t seed = 0x5ba1ced1;
    std::string lambdas, thetas, n_range;
    int64_t samples = 0, mc_n = 2;
    bool csv = false;
};

std::string grid_string(sg::SuiteName which, const sg::SuiteConfig& cfg) {
    std::ostringstream g;
    switch (which) {
        case sg::SuiteName::classic_pinsker:
        case sg::SuiteName::backward:
        case sg::SuiteName::forward:
        case sg::SuiteName::characterization:
            g << "pairs=" << cfg.pairs << " max_atoms=" << cfg.max_atoms;
            break;
        case sg::SuiteName::poisson: {
            g << "lambdas=";
            for (size_t i = 0; i < cfg.lambdas.size(); ++i)
                g << (i ? "," : "") << num_fmt(cfg.lambdas[i]);
            break;
        }
        case sg::SuiteName::rank: {
            g << "theta=";
            for (size_t i = 0; i < cfg.thetas.size(); ++i) g << (i ? "," : "") << cfg.thetas[i];
            g << " n=" << cfg.rank_n_lo << ".." << cfg.rank_n_max;
            if (cfg.mc_samples > 0)
                g << " mc_n=" << cfg.mc_n << " samples=" << cfg.mc_samples;
            break;
        }
        case sg::SuiteName::zoo:
            g << "operators=9";
            break;
    }
    return g.str();
}

template <class S>
int run_verify(const VerifyOpts& o, sg::SuiteName which) {
    sg::SuiteConfig cfg;
    cfg.pairs = o.pairs;
    cfg.max_atoms = o.max_atoms;
    cfg.seed = o.seed;
    cfg.mc_samples = o.samples;
    cfg.mc_n = o.mc_n;
    if (!o.lambdas.empty()) cfg.lambdas = parse_double_list(o.lambdas, "--lambdas");
    if (!o.thetas.empty()) cfg.thetas = parse_int_list(o.thetas, "--theta");
    if (!o.n_range.empty()) {
        auto [lo, hi] = parse_range(o.n_range, "--n");
        cfg.rank_n_lo = lo;
        cfg.rank_n_max = hi;
    }
    if (auto tm = env_tail_mass()) cfg.truncation.tail_mass = *tm;

    sg::SuiteReport r = sg::run_suite<S>(which, cfg);
    if (o.csv) {
        std::ostringstream csv;
        sg::write_report_csv(r, csv);
        sg::write_text(csv.str(), o.out);
    } else {
        sg::write_json(sg::report_to_json(r, grid_string(which, cfg)), o.out);
    }
    return r.failed > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// rank-experiment

struct RankOpts {
    int64_t theta = 2;
    std::string n_range = "1..8";
    int64_t samples = 0, mc_n = 2;
    std::uint64_t seed = 0x5ba1ced1;
    std::string backend = "rational", out = "-";
    bool csv = false;
};

template <class S>
int run_rank(const RankOpts& o) {
    auto [n_lo, n_max] = parse_range(o.n_range, "--n");
    sg::TruncationPolicy pol;
    if (auto tm = env_tail_mass()) pol.tail_mass = *tm;
    sg::RankExperiment ex =
        sg::run_rank_experiment<S>(o.theta, n_max, o.mc_n, o.samples, o.seed, pol);
    ex.links.erase(std::remove_if(ex.links.begin(), ex.links.end(),
                                  [&](const sg::RankLink& l) { return l.n < n_lo; }),
                   ex.links.end());
    bool ok = true;
    for (const auto& l : ex.links) ok = ok && l.links_hold();
    if (o.samples > 0) ok = ok && ex.mc_tv <= 0.02;

    if (o.csv) {
        std::ostringstream csv;
        csv << "theta,n,tv,weighted,lemma,cap,bound,quadratic,moment,moment_claim,chain_holds\n";
        for (const auto& l : ex.links)
            csv << o.theta << ',' << l.n << ',' << num_fmt(l.tv) << ',' << num_fmt(l.weighted)
                << ',' << num_fmt(l.lemma) << ',' << num_fmt(l.cap) << ',' << num_fmt(l.bound)
                << ',' << num_fmt(l.quadratic) << ',' << num_fmt(l.moment) << ','
                << num_fmt(l.moment_claim) << ',' << (l.links_hold() ? "true" : "false") << '\n';
        sg::write_text(csv.str(), o.out);
    } else {
        sg::write_json(sg::rank_to_json(ex, o.backend), o.out);
    }
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// solve

struct SolveOpts {
    std::string p_path, q_path, l_table, backend = "rational", out = "-";
    std::string eta = "+1";
    std::optional<int64_t> indicator;
};

sg::Direction parse_eta(const std::string& s) {
    if (s == "+1" || s == "1" || s == "forward") return sg::Direction::forward;
    if (s == "-1" || s == "backward") return sg::Direction::backward;
    throw UsageError("--eta must be +1 or -1");
}

template <class S>
sg::TestFunction<S> load_table(const std::string& path, int64_t default_lo) {
    std::ifstream in(path);
    if (!in) throw sg::SpecError("cannot open test-function table '" + path + "'");
    sg::Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw sg::SpecError("cannot parse '" + path + "': " + e.what());
    }
    int64_t lo = default_lo;
    const sg::Json* vals = &j;
    if (j.is_object()) {
        if (j.contains("lo")) lo = j["lo"].get<int64_t>();
        if (!j.contains("values")) throw sg::SpecError("table object needs a 'values' array");
        vals = &j["values"];
    }
    if (!vals->is_array() || vals->empty())
        throw sg::SpecError("test-function table must be a nonempty array");
    std::vector<S> v;
    for (const auto& e : *vals) v.push_back(sg::ScalarTraits<S>::from_double(e.get<double>()));
    return sg::TestFunction<S>(lo, std::move(v));
}

template <class S>
int run_solve(const SolveOpts& o) {
    sg::DensitySpec ps = load_spec(o.p_path);
    auto p = sg::build_density<S>(ps);
    sg::Direction dir = parse_eta(o.eta);

    sg::Json test_desc;
    sg::TestFunction<S> l = [&]() {
        if (o.indicator) {
            test_desc = {{"kind", "indicator"}, {"z", *o.indicator}};
            return sg::TestFunction<S>::indicator_upto(p.lo(), *o.indicator);
        }
        test_desc = {{"kind", "table"}, {"path", o.l_table}};
        return load_table<S>(o.l_table, p.lo());
    }();

    sg::SteinSolution<S> sol = sg::solve_stein(p, dir, l);
    bool member_p = sg::class_membership(p, dir, sol.f);

    sg::Json out;
    out["report"] = "solve";
    out["backend"] = o.backend;
    out["direction"] = sg::direction_name(dir);
    out["p"] = sg::density_spec_to_json(ps);
    out["test_function"] = std::move(test_desc);
    sg::Json values = sg::Json::array();
    for (int64_t x = sol.f.lo(); x <= sol.f.hi(); ++x)
        values.push_back(sg::ScalarTraits<S>::to_double(sol.f(x)));
    out["solution"] = {{"lo", sol.f.lo()}, {"values", std::move(values)}};
    out["sup_abs"] = sg::ScalarTraits<S>::to_double(sol.sup_abs);
    out["kappa_weight_sup"] = sg::ScalarTraits<S>::to_double(sol.kappa_weight_sup);
    out["centered_expectation"] = sg::ScalarTraits<S>::to_double(sol.centered_expectation);
    out["truncation_error"] = p.dropped_tail();

    sg::Json membership;
    membership["p"] = member_p;
    bool assumption_ok = true;
    if (!o.q_path.empty()) {
        sg::DensitySpec qs = load_spec(o.q_path);
        auto q = sg::build_density<S>(qs);
        bool member_q = sg::class_membership(q, dir, sol.f);
        membership["q"] = member_q;
        assumption_ok = member_p && member_q;
        out["q"] = sg::density_spec_to_json(qs);
    }
    out["membership"] = std::move(membership);
    if (!o.q_path.empty()) out["assumption_holds"] = assumption_ok;

    sg::write_json(out, o.out);
    if (!o.q_path.empty() && !assumption_ok) {
        std::cerr << "solve: solution leaves a required boundary class (see membership)\n";
        return 3;
    }
    return 0;
}

template <class F>
int with_backend(const std::string& b, F&& f) {
    check_backend(b);
    if (b == "rational") return f.template operator()<sg::Rational>();
    return f.template operator()<double>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete Stein operators, solvers, and local Pinsker reports"};
    app.require_subcommand(1);

    DistOpts d;
    auto* dist = app.add_subcommand("dist", "distances and information functionals between p and q");
    dist->add_option("--p", d.p_path, "density spec JSON for the target p")->required();
    dist->add_option("--q", d.q_path, "density spec JSON for the comparison q")->required();
    dist->add_option("--metrics", d.metrics,
                     "comma list: tv,kolmogorov,kl,j_gen,k_gen,k_scaled,j_poisson,i_functional");
    dist->add_option("--backend", d.backend, "rational|float (default rational)");
    dist->add_option("--out", d.out, "output path, - for stdout");
    dist->add_flag("--csv", d.csv, "flatten to CSV");

    VerifyOpts v;
    auto* verify = app.add_subcommand("verify", "run a named check suite");
    verify->add_option("--suite", v.suite, "classic_pinsker|backward|forward|poisson|rank|zoo|characterization")
        ->required();
    verify->add_option("--pairs", v.pairs, "random pairs for the pair suites");
    verify->add_option("--max-atoms", v.max_atoms, "largest random support size");
    verify->add_option("--seed", v.seed, "rng seed");
    verify->add_option("--lambdas", v.lambdas, "comma list of Poisson rates");
    verify->add_option("--theta", v.thetas, "comma list of field sizes");
    verify->add_option("--n", v.n_range, "rank n range, e.g. 1..6");
    verify->add_option("--samples", v.samples, "Monte-Carlo sample count (0 disables)");
    verify->add_option("--mc-n", v.mc_n, "matrix size for the Monte-Carlo rows");
    verify->add_option("--backend", v.backend, "rational|float (default rational)");
    verify->add_option("--out", v.out, "output path, - for stdout");
    verify->add_flag("--csv", v.csv, "flatten to CSV");

    RankOpts r;
    auto* rank = app.add_subcommand("rank-experiment", "matrix-rank chain, link by link");
    rank->add_option("--theta", r.theta, "field size (prime when sampling)")->required();
    rank->add_option("--n", r.n_range, "n range, e.g. 1..8");
    rank->add_option("--samples", r.samples, "Monte-Carlo sample count (0 disables)");
    rank->add_option("--mc-n", r.mc_n, "matrix size for the Monte-Carlo pass");
    rank->add_option("--seed", r.seed, "rng seed");
    rank->add_option("--backend", r.backend, "rational|float (default rational)");
    rank->add_option("--out", r.out, "output path, - for stdout");
    rank->add_flag("--csv", r.csv, "flatten to CSV");

    VerifyOpts z;
    auto* zoo = app.add_subcommand("zoo", "operator catalog equivalence checks");
    zoo->add_option("--seed", z.seed, "rng seed");
    zoo->add_option("--backend", z.backend, "rational|float (default rational)");
    zoo->add_option("--out", z.out, "output path, - for stdout");
    zoo->add_flag("--csv", z.csv, "flatten to CSV");

    SolveOpts s;
    auto* solve = app.add_subcommand("solve", "solve the Stein equation for a test function");
    solve->add_option("--p", s.p_path, "density spec JSON for the target p")->required();
    solve->add_option("--eta", s.eta, "+1 (forward) or -1 (backward)");
    auto* ind = solve->add_option("--indicator", s.indicator, "l = 1{x <= z}");
    solve->add_option("--l-table", s.l_table, "JSON table for l")->excludes(ind);
    solve->add_option("--q", s.q_path, "comparison density; failing its boundary class exits 3");
    solve->add_option("--backend", s.backend, "rational|float (default rational)");
    solve->add_option("--out", s.out, "output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dist->parsed()) return with_backend(d.backend, [&]<class S>() { return run_dist<S>(d); });
        if (verify->parsed()) {
            auto which = sg::parse_suite(v.suite);
            if (!which) {
                std::cerr << "verify: unknown suite '" << v.suite << "'\n";
                return 2;
            }
            return with_backend(v.backend, [&]<class S>() { return run_verify<S>(v, *which); });
        }
        if (rank->parsed())
            return with_backend(r.backend, [&]<class S>() { return run_rank<S>(r); });
        if (zoo->parsed())
            return with_backend(z.backend,
                                [&]<class S>() { return run_verify<S>(z, sg::SuiteName::zoo); });
        if (solve->parsed()) {
            if (!s.indicator && s.l_table.empty()) {
                std::cerr << "solve: need --indicator or --l-table\n";
                return 2;
            }
            return with_backend(s.backend, [&]<class S>() { return run_solve<S>(s); });
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const sg::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const sg::SupportError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const sg::AssumptionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
