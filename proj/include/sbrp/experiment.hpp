#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sbrp/feasibility.hpp"
#include "sbrp/ils.hpp"
#include "sbrp/instance.hpp"
#include "sbrp/solution.hpp"

namespace sbrp {

using Rational = boost::multiprecision::cpp_rational;

enum class InstanceFormat { Canonical, Legacy };

/// Reference bounds for one instance. Either value may be missing.
struct Bounds {
    std::optional<Cost> lower;
    std::optional<Cost> upper;
};

/// Lines "instance LB [UB]"; '#' starts a comment, "-" marks a missing value.
inline std::map<std::string, Bounds> parse_bounds(std::string_view text) {
    std::map<std::string, Bounds> table;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto tok = detail::split_ws(line);
        if (tok.empty()) continue;
        if (tok.size() > 3) throw InstanceError(line_no, "bounds line has more than three fields");
        const auto value = [&](std::size_t k) -> std::optional<Cost> {
            if (k >= tok.size() || tok[k] == "-") return std::nullopt;
            Cost v = 0;
            if (!detail::parse_number(tok[k], v)) throw InstanceError(line_no, "malformed bound '" + tok[k] + "'");
            return v;
        };
        table[tok[0]] = Bounds{value(1), value(2)};
    }
    return table;
}

/// (ub - lb) / lb as a fraction (not yet in percent).
inline Rational gap_ratio(Cost ub, Cost lb) {
    if (lb <= 0) throw std::invalid_argument("gap needs a positive lower bound");
    return Rational(ub - lb, lb);
}

/// Percent with two decimals, rounded half to even.
inline std::string format_percent(const Rational& ratio) {
    using boost::multiprecision::cpp_int;
    const Rational scaled = ratio * 10000;  // hundredths of a percent
    const bool negative = scaled < 0;
    const Rational mag = negative ? Rational(-scaled) : scaled;
    const cpp_int num = boost::multiprecision::numerator(mag), den = boost::multiprecision::denominator(mag);
    cpp_int q = num / den;
    const cpp_int twice_rem = 2 * (num % den);
    if (twice_rem > den || (twice_rem == den && (q & 1) != 0)) ++q;
    std::string digits = q.str();
    if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
    std::string out = (negative && q != 0 ? "-" : "") + digits.substr(0, digits.size() - 2) + "." +
                      digits.substr(digits.size() - 2);
    return out;
}

inline std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

struct ExperimentConfig {
    std::vector<std::string> instance_paths;
    InstanceFormat format = InstanceFormat::Canonical;
    int alpha = 1;
    int runs = 10;
    SearchParams params;  // run r uses seed params.seed + r
    std::optional<std::string> bounds_path;
    std::string out_dir = "results";
    bool emit_solutions = false;
    bool plot_data = false;
};

struct RunRow {
    std::string instance;
    int alpha = 1;
    int run = 0;
    std::uint64_t seed = 0;
    Cost cost = kInfeasibleCost;
    bool feasible = false;
    double time_s = 0.0;
    std::optional<double> tt_target_s;
    int visits = 0;
};

inline const char* kCsvHeader = "instance,alpha,run,seed,cost,feasible,time_s,tt_target_s,visits";

inline std::string to_csv(const RunRow& r) {
    std::ostringstream out;
    out << r.instance << ',' << r.alpha << ',' << r.run << ',' << r.seed << ',';
    if (r.feasible) out << r.cost;
    out << ',' << (r.feasible ? 1 : 0) << ',' << format_seconds(r.time_s) << ',';
    if (r.tt_target_s) out << format_seconds(*r.tt_target_s);
    out << ',' << r.visits;
    return out.str();
}

/// Per-instance summary row of the results table.
struct AggregateRow {
    std::string group;  // instance id
    int n = 0;
    int vehicle_capacity = 0;
    int alpha = 1;
    int runs = 0;
    std::optional<Cost> best_cost;
    std::optional<Rational> avg_gap;   // fractions, not percent
    std::optional<Rational> best_gap;
    Rational avg_time;                 // mean of the printed per-run seconds
    std::optional<Rational> avg_time_to_target;  // over runs that reached the target
    Rational avg_visits;
};

namespace detail {

/// Exact value of a printed decimal such as "12.345".
inline Rational parse_decimal(const std::string& s) {
    using boost::multiprecision::cpp_int;
    // digit by digit: the cpp_int string constructor reads a leading 0 as octal
    cpp_int digits = 0, scale = 1;
    bool after_dot = false;
    for (const char ch : s) {
        if (ch == '-' || ch == '+') continue;
        if (ch == '.') {
            after_dot = true;
            continue;
        }
        if (ch < '0' || ch > '9') throw std::invalid_argument("malformed decimal '" + s + "'");
        digits = digits * 10 + (ch - '0');
        if (after_dot) scale *= 10;
    }
    const Rational v(digits, scale);
    return !s.empty() && s[0] == '-' ? Rational(-v) : v;
}

}  // namespace detail

/// Means are taken over the values exactly as they appear in the CSV rows.
inline AggregateRow aggregate(const std::string& group, const Instance& inst, const std::vector<RunRow>& rows,
                              const Bounds& bounds) {
    AggregateRow a;
    a.group = group;
    a.n = inst.n;
    a.vehicle_capacity = inst.vehicle_capacity;
    a.alpha = inst.alpha;
    a.runs = static_cast<int>(rows.size());
    bool all_feasible = !rows.empty();
    int reached = 0;
    Rational tt_sum = 0, gap_sum = 0;
    for (const RunRow& r : rows) {
        a.avg_time += detail::parse_decimal(format_seconds(r.time_s));
        a.avg_visits += r.visits;
        if (!r.feasible) {
            all_feasible = false;
            continue;
        }
        if (!a.best_cost || r.cost < *a.best_cost) a.best_cost = r.cost;
        if (r.tt_target_s) {
            ++reached;
            tt_sum += detail::parse_decimal(format_seconds(*r.tt_target_s));
        }
        if (bounds.lower) gap_sum += gap_ratio(r.cost, *bounds.lower);
    }
    if (!rows.empty()) {
        a.avg_time /= static_cast<int>(rows.size());
        a.avg_visits /= static_cast<int>(rows.size());
    }
    if (reached > 0) a.avg_time_to_target = tt_sum / reached;
    if (bounds.lower && all_feasible) {
        a.avg_gap = gap_sum / static_cast<int>(rows.size());
        a.best_gap = gap_ratio(*a.best_cost, *bounds.lower);
    }
    return a;
}

inline const char* kAggregateHeader = "instance,n,Q,alpha,runs,best_cost,avg_gap,best_gap,avg_time_s,avg_tt_s,avg_visits";

inline std::string to_csv(const AggregateRow& a) {
    const auto dec = [](const Rational& r) {
        // two decimals, half-even; reuses the percent formatter on r / 100
        return format_percent(r / 100);
    };
    std::ostringstream out;
    out << a.group << ',' << a.n << ',' << a.vehicle_capacity << ',' << a.alpha << ',' << a.runs << ',';
    if (a.best_cost) out << *a.best_cost;
    out << ',' << (a.avg_gap ? format_percent(*a.avg_gap) : "") << ','
        << (a.best_gap ? format_percent(*a.best_gap) : "") << ',' << dec(a.avg_time) << ','
        << (a.avg_time_to_target ? dec(*a.avg_time_to_target) : "") << ',' << dec(a.avg_visits);
    return out.str();
}

enum class PlotKey { VehicleCapacity, Stations };
enum class PlotMetric { AvgGap, AvgTime };

/// "key value" rows sorted by key; rows sharing a key are averaged. Rows
/// without the metric (no lower bound) are left out.
inline std::string emit_plot_data(const std::vector<AggregateRow>& rows, PlotKey key, PlotMetric metric) {
    std::map<int, std::pair<Rational, int>> groups;
    for (const AggregateRow& a : rows) {
        const int k = key == PlotKey::VehicleCapacity ? a.vehicle_capacity : a.n;
        std::optional<Rational> v;
        if (metric == PlotMetric::AvgGap && a.avg_gap) v = *a.avg_gap * 100;
        if (metric == PlotMetric::AvgTime) v = a.avg_time;
        if (!v) continue;
        auto& [sum, count] = groups[k];
        sum += *v;
        ++count;
    }
    std::ostringstream out;
    out << "# " << (key == PlotKey::VehicleCapacity ? "Q" : "n") << ' '
        << (metric == PlotMetric::AvgGap ? "avg_gap_percent" : "avg_time_s") << '\n';
    for (const auto& [k, acc] : groups) out << k << ' ' << format_percent(acc.first / acc.second / 100) << '\n';
    return out.str();
}

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Re-checks a serialized solution: stated cost and feasibility against the
/// route, and the stated schedule against load, inventory and target limits.
inline VerifyReport verify_solution(const Instance& inst, const SolutionRecord& rec) {
    VerifyReport rep;
    const auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.problems.push_back(std::move(msg));
    };
    try {
        require_depot_terminated(rec.route, inst);
    } catch (const std::exception& e) {
        fail(e.what());
        return rep;
    }
    const Cost cost = route_cost(rec.route, inst);
    if (cost != rec.cost) fail("stated cost " + std::to_string(rec.cost) + ", route costs " + std::to_string(cost));
    const FeasibilityResult fr = check(rec.route, inst);
    if (fr.feasible != rec.feasible)
        fail(std::string("stated ") + (rec.feasible ? "feasible" : "infeasible") + ", route is " +
             (fr.feasible ? "feasible" : "infeasible"));
    if (!rec.feasible) return rep;
    if (rec.operations.size() != rec.route.size() || rec.loads_after.size() != rec.route.size()) {
        fail("schedule length differs from route length");
        return rep;
    }

    // the stated schedule must itself be executable
    const int k = static_cast<int>(rec.route.size());
    std::vector<int> inventory(inst.n + 1, 0), remaining(inst.n + 1, 0);
    for (int i = 1; i <= inst.n; ++i) inventory[i] = inst.station(i).initial;
    for (int j = 1; j + 1 < k; ++j) ++remaining[rec.route[j]];
    int load = 0;
    for (int j = 0; j < k; ++j) {
        const StationId st = rec.route[j];
        const int op = rec.operations[j];
        const std::string where = "visit " + std::to_string(j) + " (station " + std::to_string(st) + ")";
        const int found = rec.loads_after[j];
        if (found < 0 || found > inst.vehicle_capacity) {
            fail(where + ": load " + std::to_string(found) + " outside [0, " + std::to_string(inst.vehicle_capacity) +
                 "] on the leg leaving it");
            return rep;
        }
        if (load + op != found) {
            fail(where + ": expected load " + std::to_string(load + op) + ", found " + std::to_string(found));
            return rep;
        }
        load = found;
        if (st == kDepot) {
            if (op != 0) {
                fail(where + ": nonzero operation at the depot");
                return rep;
            }
            continue;
        }
        const Station& s = inst.station(st);
        inventory[st] -= op;
        if (inventory[st] < 0 || inventory[st] > s.capacity) {
            fail(where + ": station inventory " + std::to_string(inventory[st]) + " outside [0, " +
                 std::to_string(s.capacity) + "]");
            return rep;
        }
        if (--remaining[st] == 0 && inventory[st] != s.target) {
            fail(where + ": final inventory " + std::to_string(inventory[st]) + ", target " +
                 std::to_string(s.target));
            return rep;
        }
    }
    if (load != 0) fail("vehicle returns to the depot with " + std::to_string(load) + " bikes");
    return rep;
}

inline Instance load_instance(const std::string& path, InstanceFormat format, int alpha) {
    const std::string name = std::filesystem::path(path).stem().string();
    const std::string text = read_file(path);
    return format == InstanceFormat::Legacy ? parse_legacy_instance(text, alpha, name)
                                            : parse_instance(text, alpha, name);
}

struct ExperimentOutcome {
    std::vector<RunRow> rows;
    std::vector<AggregateRow> aggregates;
    int skipped = 0;
    int exit_code = 0;  // 0 all processed, 2 some skipped
};

/// Runs every instance `runs` times and writes results.csv, aggregates.csv,
/// optional solution files and optional plot-data files under `out_dir`.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    if (cfg.runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (cfg.alpha < 1) throw std::invalid_argument("alpha must be at least 1");
    std::map<std::string, Bounds> bounds;
    if (cfg.bounds_path) bounds = parse_bounds(read_file(*cfg.bounds_path));

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    if (cfg.emit_solutions) fs::create_directories(fs::path(cfg.out_dir) / "solutions");
    std::ofstream csv(fs::path(cfg.out_dir) / "results.csv");
    csv << kCsvHeader << '\n';

    ExperimentOutcome out;
    for (const std::string& path : cfg.instance_paths) {
        Instance inst;
        try {
            inst = load_instance(path, cfg.format, cfg.alpha);
        } catch (const std::exception& e) {
            log << "skipping " << path << ": " << e.what() << '\n';
            ++out.skipped;
            continue;
        }
        const auto bit = bounds.find(inst.name);
        const Bounds b = bit == bounds.end() ? Bounds{} : bit->second;
        if (!b.lower) log << inst.name << ": no lower bound, gaps omitted\n";

        std::vector<RunRow> rows;
        for (int r = 0; r < cfg.runs; ++r) {
            SearchParams p = cfg.params;
            p.seed = cfg.params.seed + static_cast<std::uint64_t>(r);
            const RunReport rep = solve(inst, p);
            RunRow row{inst.name, cfg.alpha, r, p.seed, rep.best_cost, rep.best_solution.feasible,
                       rep.wall_seconds, std::nullopt, rep.visits()};
            if (b.upper) row.tt_target_s = time_to_target(rep, *b.upper);
            csv << to_csv(row) << '\n';
            csv.flush();
            log << inst.name << " run " << r << ": cost " << (row.feasible ? std::to_string(row.cost) : "-")
                << " in " << format_seconds(row.time_s) << " s\n";
            if (cfg.emit_solutions) {
                std::ofstream sol(fs::path(cfg.out_dir) / "solutions" /
                                  (inst.name + "_a" + std::to_string(cfg.alpha) + "_run" + std::to_string(r) + ".sol"));
                sol << serialize_solution(rep.best_solution);
            }
            rows.push_back(row);
        }
        out.aggregates.push_back(aggregate(inst.name, inst, rows, b));
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }

    std::ofstream agg(fs::path(cfg.out_dir) / "aggregates.csv");
    agg << kAggregateHeader << '\n';
    for (const AggregateRow& a : out.aggregates) agg << to_csv(a) << '\n';

    if (cfg.plot_data && !out.aggregates.empty()) {
        const std::pair<PlotKey, const char*> keys[] = {{PlotKey::VehicleCapacity, "Q"}, {PlotKey::Stations, "n"}};
        const std::pair<PlotMetric, const char*> metrics[] = {{PlotMetric::AvgGap, "gap"}, {PlotMetric::AvgTime, "time"}};
        for (const auto& [key, key_name] : keys)
            for (const auto& [metric, metric_name] : metrics) {
                std::ofstream f(fs::path(cfg.out_dir) / (std::string(metric_name) + "_by_" + key_name + ".dat"));
                f << emit_plot_data(out.aggregates, key, metric);
            }
    }
    out.exit_code = out.skipped > 0 ? 2 : 0;
    return out;
}

}  // namespace sbrp
