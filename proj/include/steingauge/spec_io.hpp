#pragma once

// JSON density specifications.
//
//   {"family":"poisson","params":{"lambda":2.0},"truncation":{"tail_mass":1e-14}}
//   {"family":"rank_finite","params":{"theta":2,"n":5}}
//   {"family":"explicit","support":[0,10],"pmf":[...]}
//
// The explicit family carries its pmf at the top level, indexed from the
// support lower bound; every other family parameterizes under "params".
// Truncation is optional and only meaningful for infinite supports.

#include "steingauge/families.hpp"

#include "json.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace steingauge {

using Json = nlohmann::ordered_json;

struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

inline const Json& need(const Json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw SpecError(std::string(ctx) + ": missing field '" + key + "'");
    return *it;
}

inline double num(const Json& j, const char* ctx) {
    if (!j.is_number()) throw SpecError(std::string(ctx) + ": expected a number");
    return j.get<double>();
}

inline int64_t integer(const Json& j, const char* ctx) {
    if (!j.is_number_integer()) throw SpecError(std::string(ctx) + ": expected an integer");
    return j.get<int64_t>();
}

inline std::vector<double> num_array(const Json& j, const char* ctx) {
    if (!j.is_array()) throw SpecError(std::string(ctx) + ": expected an array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(num(e, ctx));
    return v;
}

}  // namespace detail

inline DensitySpec density_spec_from_json(const Json& j) {
    if (!j.is_object()) throw SpecError("density spec: expected a JSON object");
    std::string fam = detail::need(j, "family", "density spec").get<std::string>();

    DensitySpec spec;
    if (auto it = j.find("truncation"); it != j.end()) {
        const Json& t = *it;
        if (auto f = t.find("tail_mass"); f != t.end())
            spec.truncation.tail_mass = detail::num(*f, "truncation.tail_mass");
        if (auto f = t.find("window"); f != t.end()) {
            auto w = detail::num_array(*f, "truncation.window");
            if (w.size() != 2) throw SpecError("truncation.window: expected [lo, hi]");
            spec.truncation.window =
                std::pair<int64_t, int64_t>{static_cast<int64_t>(w[0]), static_cast<int64_t>(w[1])};
        }
        if (auto f = t.find("renormalize"); f != t.end()) spec.truncation.renormalize = f->get<bool>();
    }

    auto params = [&]() -> const Json& { return detail::need(j, "params", fam.c_str()); };

    if (fam == "poisson") {
        spec.family = Family::poisson;
        spec.lambda = detail::num(detail::need(params(), "lambda", "poisson"), "poisson.lambda");
    } else if (fam == "binomial") {
        spec.family = Family::binomial;
        spec.n = detail::integer(detail::need(params(), "n", "binomial"), "binomial.n");
        spec.p = detail::num(detail::need(params(), "p", "binomial"), "binomial.p");
    } else if (fam == "polya_urn") {
        spec.family = Family::polya_urn;
        spec.n = detail::integer(detail::need(params(), "n", "polya_urn"), "polya_urn.n");
        spec.alpha = detail::num(detail::need(params(), "alpha", "polya_urn"), "polya_urn.alpha");
        spec.beta = detail::num(detail::need(params(), "beta", "polya_urn"), "polya_urn.beta");
    } else if (fam == "ord") {
        spec.family = Family::ord;
        spec.support_lo = detail::integer(detail::need(params(), "a", "ord"), "ord.a");
        spec.s = detail::num_array(detail::need(params(), "s", "ord"), "ord.s");
        spec.tau = detail::num_array(detail::need(params(), "tau", "ord"), "ord.tau");
    } else if (fam == "gibbs") {
        spec.family = Family::gibbs;
        spec.omega = detail::num(detail::need(params(), "omega", "gibbs"), "gibbs.omega");
        if (auto f = params().find("N"); f != params().end())
            spec.gibbs_N = detail::integer(*f, "gibbs.N");
        if (auto f = params().find("V"); f != params().end())
            spec.V = detail::num_array(*f, "gibbs.V");
    } else if (fam == "rank_limit") {
        spec.family = Family::rank_limit;
        spec.theta = detail::integer(detail::need(params(), "theta", "rank_limit"), "rank_limit.theta");
    } else if (fam == "rank_finite") {
        spec.family = Family::rank_finite;
        spec.theta = detail::integer(detail::need(params(), "theta", "rank_finite"), "rank_finite.theta");
        spec.n = detail::integer(detail::need(params(), "n", "rank_finite"), "rank_finite.n");
    } else if (fam == "explicit") {
        spec.family = Family::explicit_pmf;
        auto sup = detail::num_array(detail::need(j, "support", "explicit"), "explicit.support");
        if (sup.size() != 2) throw SpecError("explicit.support: expected [lo, hi]");
        spec.support_lo = static_cast<int64_t>(sup[0]);
        spec.support_hi = static_cast<int64_t>(sup[1]);
        spec.pmf = detail::num_array(detail::need(j, "pmf", "explicit"), "explicit.pmf");
    } else {
        throw SpecError("density spec: unknown family '" + fam + "'");
    }
    return spec;
}

inline Json density_spec_to_json(const DensitySpec& spec) {
    Json j;
    j["family"] = family_name(spec.family);
    switch (spec.family) {
        case Family::poisson: j["params"] = {{"lambda", spec.lambda}}; break;
        case Family::binomial: j["params"] = {{"n", spec.n}, {"p", spec.p}}; break;
        case Family::polya_urn:
            j["params"] = {{"n", spec.n}, {"alpha", spec.alpha}, {"beta", spec.beta}};
            break;
        case Family::ord: j["params"] = {{"a", spec.support_lo}, {"s", spec.s}, {"tau", spec.tau}}; break;
        case Family::gibbs: {
            Json p = {{"omega", spec.omega}};
            if (spec.gibbs_N) p["N"] = *spec.gibbs_N;
            if (!spec.V.empty()) p["V"] = spec.V;
            j["params"] = std::move(p);
            break;
        }
        case Family::rank_limit: j["params"] = {{"theta", spec.theta}}; break;
        case Family::rank_finite: j["params"] = {{"theta", spec.theta}, {"n", spec.n}}; break;
        case Family::explicit_pmf:
            j["support"] = {spec.support_lo, spec.support_hi};
            j["pmf"] = spec.pmf;
            break;
    }
    bool infinite = spec.family == Family::poisson || spec.family == Family::rank_limit ||
                    (spec.family == Family::gibbs && !spec.gibbs_N);
    if (infinite) {
        Json t = {{"tail_mass", spec.truncation.tail_mass}};
        if (spec.truncation.window)
            t["window"] = {spec.truncation.window->first, spec.truncation.window->second};
        if (!spec.truncation.renormalize) t["renormalize"] = false;
        j["truncation"] = std::move(t);
    }
    return j;
}

inline DensitySpec load_density_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open density spec '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SpecError("cannot parse '" + path + "': " + e.what());
    }
    return density_spec_from_json(j);
}

}  // namespace steingauge
