#ifndef LLINBO_BENCHLAB_TRACE_HPP
#define LLINBO_BENCHLAB_TRACE_HPP

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include <llinbo/core/design.hpp>
#include <llinbo/mechanisms/mechanisms.hpp>

namespace llinbo::bench {

struct TraceRecord {
    int t = 0;
    DecisionSource source = DecisionSource::FromGP;
    std::vector<double> chosen;
    double y = 0.0;
    double best = 0.0;
    double regret = 0.0;
    std::map<std::string, double> diagnostics;
};

/// One replication. The header carries the config snapshot; records hold one entry per iteration.
struct RegretTrace {
    nlohmann::json config;
    int replication = 0;
    double known_max = 0.0;
    std::vector<Observation> warmstart;
    std::vector<TraceRecord> records;
    std::vector<std::string> warnings;
    int agent_fallbacks = 0;

    /// Instantaneous regret f(x*) - y_t summed over iterations 1..t.
    double cumulative_regret(int t) const
    {
        double r = 0.0;
        for (int i = 0; i < t && i < static_cast<int>(records.size()); ++i)
            r += known_max - records[static_cast<std::size_t>(i)].y;
        return r;
    }
};

// ---- JSON lines ------------------------------------------------------------

inline nlohmann::json record_to_json(const TraceRecord& r)
{
    return {{"type", "iteration"}, {"t", r.t},           {"source", std::string(to_string(r.source))},
            {"chosen", r.chosen},  {"y", r.y},           {"best", r.best},
            {"regret", r.regret},  {"diagnostics", r.diagnostics}};
}

inline TraceRecord record_from_json(const nlohmann::json& j)
{
    TraceRecord r;
    r.t = j.at("t").get<int>();
    r.source = parse_decision_source(j.at("source").get<std::string>());
    r.chosen = j.at("chosen").get<std::vector<double>>();
    r.y = j.at("y").get<double>();
    r.best = j.at("best").get<double>();
    r.regret = j.at("regret").get<double>();
    if (j.contains("diagnostics"))
        r.diagnostics = j["diagnostics"].get<std::map<std::string, double>>();
    return r;
}

inline nlohmann::json header_to_json(const RegretTrace& tr)
{
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& o : tr.warmstart)
        ws.push_back({{"x", o.design.values()}, {"y", o.outcome}});
    return {{"type", "header"},       {"replication", tr.replication}, {"known_max", tr.known_max},
            {"config", tr.config},    {"warmstart", ws},               {"warnings", tr.warnings},
            {"agent_fallbacks", tr.agent_fallbacks}};
}

inline void write_trace(std::ostream& out, const RegretTrace& tr)
{
    out << header_to_json(tr).dump() << '\n';
    for (const auto& r : tr.records)
        out << record_to_json(r).dump() << '\n';
}

inline void write_trace_file(const std::string& path, const RegretTrace& tr)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write trace file " + path);
    write_trace(out, tr);
}

inline RegretTrace read_trace(std::istream& in)
{
    RegretTrace tr;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto j = nlohmann::json::parse(line);
        const std::string type = j.value("type", "iteration");
        if (type == "header") {
            have_header = true;
            tr.replication = j.value("replication", 0);
            tr.known_max = j.at("known_max").get<double>();
            tr.config = j.value("config", nlohmann::json::object());
            tr.warnings = j.value("warnings", std::vector<std::string>{});
            tr.agent_fallbacks = j.value("agent_fallbacks", 0);
            for (const auto& o : j.value("warmstart", nlohmann::json::array()))
                tr.warmstart.push_back({Design(o.at("x").get<std::vector<double>>()), o.at("y").get<double>()});
        } else {
            tr.records.push_back(record_from_json(j));
        }
    }
    if (!have_header)
        throw std::runtime_error("trace has no header line");
    return tr;
}

inline RegretTrace read_trace_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open trace file " + path);
    return read_trace(in);
}

// ---- aggregation -----------------------------------------------------------

struct AggregateRow {
    int t;
    double mean_G;
    double ci_low;
    double ci_high;
    int n;
};

/// Mean regret per iteration with a 95% t-interval across replications.
/// A single replication gives a zero-width band.
inline std::vector<AggregateRow> aggregate(const std::vector<RegretTrace>& traces, double level = 0.95)
{
    std::size_t T = 0;
    for (const auto& tr : traces)
        T = std::max(T, tr.records.size());
    std::vector<AggregateRow> rows;
    rows.reserve(T);
    for (std::size_t i = 0; i < T; ++i) {
        std::vector<double> g;
        for (const auto& tr : traces)
            if (i < tr.records.size())
                g.push_back(tr.records[i].regret);
        const auto n = static_cast<int>(g.size());
        double mean = 0.0;
        for (double v : g)
            mean += v;
        mean /= n;
        double half = 0.0;
        if (n > 1) {
            double ss = 0.0;
            for (double v : g)
                ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / (n - 1));
            boost::math::students_t dist(n - 1);
            half = boost::math::quantile(dist, 0.5 + level / 2.0) * sd / std::sqrt(static_cast<double>(n));
        }
        rows.push_back({static_cast<int>(i) + 1, mean, mean - half, mean + half, n});
    }
    return rows;
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows)
{
    out << "t,mean_G,ci_low,ci_high\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.t, r.mean_G, r.ci_low, r.ci_high);
        out << buf;
    }
}

} // namespace llinbo::bench

#endif
