#pragma once

// Report serialization. One JSON shape for every suite:
//
//   {"suite":..., "grid":..., "checks":[{...}], "summary":{...}}
//
// Reports are deterministic: field order is fixed, there are no timestamps,
// and doubles use the shortest round-trip representation. Non-finite values
// never appear as bare JSON numbers; they serialize as {"value":"inf",
// "reason":...} so a reader can tell a divergent quantity from a failure.

#include "steingauge/bench.hpp"
#include "steingauge/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>

namespace steingauge {

inline Json json_number(double v, const std::string& reason = "") {
    if (std::isfinite(v)) return v;
    Json j;
    j["value"] = std::signbit(v) ? "-inf" : "inf";
    j["reason"] = reason.empty() ? "divergent" : reason;
    return j;
}

inline Json check_to_json(const BoundCheck& c, const std::string& provenance) {
    Json j;
    j["name"] = c.name;
    j["params"] = c.params;
    j["lhs"] = json_number(c.lhs, c.reason);
    j["rhs"] = json_number(c.rhs, c.reason);
    j["slack"] = json_number(c.slack, c.reason);
    j["passed"] = c.passed;
    j["truncation_error"] = c.truncation_error;
    j["provenance"] = provenance;
    if (c.skipped) j["skipped"] = true;
    if (!c.reason.empty()) j["reason"] = c.reason;
    return j;
}

inline std::string backend_provenance(const std::string& backend) {
    if (backend == "rational") return "rational arithmetic, exact comparisons";
    return "double arithmetic, tolerance-padded comparisons";
}

inline Json report_to_json(const SuiteReport& r, const std::string& grid) {
    Json j;
    j["suite"] = r.suite;
    j["grid"] = grid;
    j["backend"] = r.backend;
    j["seed"] = r.seed;
    std::string prov = backend_provenance(r.backend);
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(check_to_json(c, prov));
    j["checks"] = std::move(checks);
    j["summary"] = {{"total", r.total},
                    {"passed", r.passed},
                    {"failed", r.failed},
                    {"skipped", r.skipped}};
    return j;
}

inline Json rank_link_to_json(int64_t theta, const RankLink& l) {
    Json j;
    j["theta"] = theta;
    j["n"] = l.n;
    j["tv"] = json_number(l.tv);
    j["weighted_route"] = json_number(l.weighted);
    j["lemma_route"] = json_number(l.lemma);
    j["cap"] = json_number(l.cap);
    j["bound"] = json_number(l.bound);
    j["quadratic_route"] = json_number(l.quadratic);
    j["moment"] = json_number(l.moment);
    j["moment_claim"] = json_number(l.moment_claim);
    j["links"] = {{"moment_exact", l.moment_exact},
                  {"tv_le_weighted", l.tv_le_weighted},
                  {"weighted_le_lemma", l.weighted_le_lemma},
                  {"lemma_le_cap", l.lemma_le_cap},
                  {"cap_le_bound", l.cap_le_bound},
                  {"tv_le_quadratic", l.tv_le_quadratic},
                  {"tv_le_bound", l.tv_le_bound}};
    j["chain_holds"] = l.links_hold();
    return j;
}

inline Json rank_to_json(const RankExperiment& e, const std::string& backend) {
    Json j;
    j["experiment"] = "rank";
    j["theta"] = e.theta;
    j["backend"] = backend;
    Json links = Json::array();
    bool all = true;
    for (const auto& l : e.links) {
        links.push_back(rank_link_to_json(e.theta, l));
        all = all && l.links_hold();
    }
    j["links"] = std::move(links);
    if (e.mc_samples > 0) {
        j["monte_carlo"] = {{"n", e.mc_n},
                            {"samples", e.mc_samples},
                            {"seed", e.mc_seed},
                            {"empirical_tv_gap", e.mc_tv}};
    }
    j["all_chains_hold"] = all;
    return j;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += "\"";
    return out;
}

inline std::string csv_number(double v) {
    if (std::isfinite(v)) return Json(v).dump();
    return std::signbit(v) ? "-inf" : "inf";
}

}  // namespace detail

// Flat form of the same report. Column order is part of the interface:
//   name,params,lhs,rhs,slack,passed,skipped,truncation_error,reason
inline void write_report_csv(const SuiteReport& r, std::ostream& os) {
    os << "name,params,lhs,rhs,slack,passed,skipped,truncation_error,reason\n";
    for (const auto& c : r.checks) {
        os << detail::csv_quote(c.name) << ',' << detail::csv_quote(c.params) << ','
           << detail::csv_number(c.lhs) << ',' << detail::csv_number(c.rhs) << ','
           << detail::csv_number(c.slack) << ',' << (c.passed ? "true" : "false") << ','
           << (c.skipped ? "true" : "false") << ',' << detail::csv_number(c.truncation_error)
           << ',' << detail::csv_quote(c.reason) << '\n';
    }
}

inline void write_text(const std::string& text, const std::string& path) {
    if (path == "-" || path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

inline void write_json(const Json& j, const std::string& path) { write_text(j.dump(2) + "\n", path); }

}  // namespace steingauge
