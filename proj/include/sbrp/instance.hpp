#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sbrp {

using Cost = std::int64_t;
using StationId = int;

inline constexpr StationId kDepot = 0;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// One bike station. `demand = target - initial`: positive means the station
/// needs bikes delivered, negative means bikes must be picked up.
struct Station {
    StationId id = 0;
    double x = 0.0;
    double y = 0.0;
    int demand = 0;
    int initial = 0;
    int target = 0;
    int capacity = 0;
};

struct Instance {
    std::string name;
    int n = 0;                  // stations, depot excluded
    int vehicle_capacity = 0;   // Q
    int alpha = 1;
    std::vector<Station> stations;  // size n + 1, index == id
    std::vector<std::vector<Cost>> cost;

    [[nodiscard]] Cost c(StationId i, StationId j) const { return cost[i][j]; }
    [[nodiscard]] const Station& station(StationId i) const { return stations[i]; }
};

class InstanceError : public std::runtime_error {
public:
    InstanceError(int line, const std::string& rule)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + rule : rule),
          line_(line), rule_(rule) {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& rule() const noexcept { return rule_; }

private:
    int line_;
    std::string rule_;
};

struct InventoryLevels {
    int initial = 0;
    int target = 0;
    int capacity = 0;

    friend bool operator==(const InventoryLevels&, const InventoryLevels&) = default;
};

/// Standard benchmark scaling: p = 10a, p' = a(10 + d), q = 20a.
/// Entry 0 is the depot and always maps to (0, 0, 0); its raw demand is ignored.
inline std::vector<InventoryLevels> apply_alpha(const std::vector<int>& raw_demands, int alpha) {
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    std::vector<InventoryLevels> out;
    out.reserve(raw_demands.size());
    for (std::size_t i = 0; i < raw_demands.size(); ++i) {
        if (i == 0) {
            out.push_back({});
            continue;
        }
        const int d = raw_demands[i];
        if (d < -10 || d > 10)
            throw std::out_of_range("raw demand " + std::to_string(d) + " of station " + std::to_string(i) +
                                    " outside [-10, 10]");
        out.push_back({alpha * 10, alpha * (10 + d), alpha * 20});
    }
    return out;
}

namespace detail {

inline bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 1e9; }

inline std::int64_t isqrt(std::int64_t v) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

inline Cost floored_distance(const Point& a, const Point& b) {
    if (is_integral(a.x) && is_integral(a.y) && is_integral(b.x) && is_integral(b.y)) {
        const auto dx = static_cast<std::int64_t>(a.x) - static_cast<std::int64_t>(b.x);
        const auto dy = static_cast<std::int64_t>(a.y) - static_cast<std::int64_t>(b.y);
        return isqrt(dx * dx + dy * dy);
    }
    const long double dx = static_cast<long double>(a.x) - b.x;
    const long double dy = static_cast<long double>(a.y) - b.y;
    const long double sq = dx * dx + dy * dy;
    auto f = static_cast<Cost>(std::floor(std::sqrt(sq)));
    while (f > 0 && static_cast<long double>(f) * f > sq) --f;
    while (static_cast<long double>(f + 1) * (f + 1) <= sq) ++f;
    return f;
}

inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format coordinate");
    return {buf, end};
}

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
bool parse_number(const std::string& tok, T& out) {
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars rejects a leading '+', which some generators emit
        std::string_view sv = tok;
        if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
        auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
        return ec == std::errc{} && p == sv.data() + sv.size() && std::isfinite(out);
    } else {
        std::string_view sv = tok;
        if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
        auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
        return ec == std::errc{} && p == sv.data() + sv.size();
    }
}

}  // namespace detail

/// c[i][j] = floor(euclidean distance). Symmetric, zero diagonal; the triangle
/// inequality may be violated by flooring.
inline std::vector<std::vector<Cost>> build_cost_matrix(const std::vector<Point>& coords) {
    if (coords.size() < 2) throw std::invalid_argument("cost matrix needs at least two points");
    const std::size_t m = coords.size();
    std::vector<std::vector<Cost>> c(m, std::vector<Cost>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) c[i][j] = c[j][i] = detail::floored_distance(coords[i], coords[j]);
    return c;
}

namespace detail {
inline std::vector<std::vector<Cost>> costs_for(const std::vector<Point>& coords) {
    if (coords.size() < 2) return {std::vector<Cost>(coords.size(), 0)};
    return build_cost_matrix(coords);
}
}  // namespace detail

/// Every violated invariant, in station order. Empty means valid.
inline std::vector<std::string> validate(const Instance& inst) {
    std::vector<std::string> v;
    const auto where = [](const Station& s) { return "station " + std::to_string(s.id) + ": "; };
    if (inst.n < 0) v.push_back("negative station count");
    if (inst.vehicle_capacity < 1) v.push_back("vehicle capacity must be positive");
    if (static_cast<int>(inst.stations.size()) != inst.n + 1) {
        v.push_back("expected " + std::to_string(inst.n + 1) + " stations including depot");
        return v;
    }
    long long sum = 0;
    for (std::size_t i = 0; i < inst.stations.size(); ++i) {
        const Station& s = inst.stations[i];
        if (s.id != static_cast<int>(i)) v.push_back(where(s) + "id out of order");
        if (i == 0) {
            if (s.initial != 0 || s.target != 0 || s.capacity != 0 || s.demand != 0)
                v.push_back("depot fields nonzero");
            continue;
        }
        if (s.target - s.initial != s.demand) v.push_back(where(s) + "demand differs from target - initial");
        if (s.initial < 0) v.push_back(where(s) + "negative initial level");
        if (s.target < 0) v.push_back(where(s) + "negative target level");
        if (s.initial > s.capacity) v.push_back(where(s) + "initial exceeds capacity");
        if (s.target > s.capacity) v.push_back(where(s) + "target exceeds capacity");
        if (std::abs(s.demand) > s.capacity) v.push_back(where(s) + "demand exceeds station capacity");
        sum += s.demand;
    }
    if (sum != 0) v.push_back("demand sum nonzero");
    const std::size_t m = inst.stations.size();
    if (inst.cost.size() != m) {
        v.push_back("cost matrix has wrong dimension");
    } else {
        bool bad_shape = false, negative = false, diagonal = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (inst.cost[i].size() != m) {
                bad_shape = true;
                continue;
            }
            if (inst.cost[i][i] != 0) diagonal = true;
            for (Cost x : inst.cost[i]) negative |= x < 0;
        }
        if (bad_shape) v.push_back("cost matrix has wrong dimension");
        if (negative) v.push_back("negative arc cost");
        if (diagonal) v.push_back("nonzero cost diagonal");
    }
    return v;
}

/// Assembles stations from raw demands, applies scaling and builds costs.
inline Instance make_instance(std::string name, int vehicle_capacity, const std::vector<Point>& coords,
                              const std::vector<int>& raw_demands, int alpha) {
    Instance inst;
    inst.name = std::move(name);
    inst.n = static_cast<int>(coords.size()) - 1;
    inst.vehicle_capacity = vehicle_capacity;
    inst.alpha = alpha;
    const auto levels = apply_alpha(raw_demands, alpha);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        Station s;
        s.id = static_cast<int>(i);
        s.x = coords[i].x;
        s.y = coords[i].y;
        s.initial = levels[i].initial;
        s.target = levels[i].target;
        s.capacity = levels[i].capacity;
        s.demand = s.target - s.initial;
        inst.stations.push_back(s);
    }
    inst.cost = detail::costs_for(coords);
    return inst;
}

/// Builds an instance from explicit inventory levels (no scaling).
inline Instance make_instance_from_levels(std::string name, int vehicle_capacity, const std::vector<Point>& coords,
                                          const std::vector<InventoryLevels>& levels) {
    Instance inst;
    inst.name = std::move(name);
    inst.n = static_cast<int>(coords.size()) - 1;
    inst.vehicle_capacity = vehicle_capacity;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        Station s;
        s.id = static_cast<int>(i);
        s.x = coords[i].x;
        s.y = coords[i].y;
        s.initial = levels[i].initial;
        s.target = levels[i].target;
        s.capacity = levels[i].capacity;
        s.demand = s.target - s.initial;
        inst.stations.push_back(s);
    }
    inst.cost = detail::costs_for(coords);
    return inst;
}

/// Raw canonical document before scaling.
struct InstanceDocument {
    int n = 0;
    int vehicle_capacity = 0;
    std::vector<Point> coords;
    std::vector<int> demands;
};

/// Canonical text: "n Q" then n+1 lines "id x y d", depot first. Lines starting
/// with '#' and blank lines are ignored.
inline InstanceDocument parse_document(std::string_view text) {
    InstanceDocument doc;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool header = false;
    int next_id = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = detail::split_ws(line);
        if (tok.empty() || tok[0].front() == '#') continue;
        if (!header) {
            if (tok.size() != 2 || !detail::parse_number(tok[0], doc.n) ||
                !detail::parse_number(tok[1], doc.vehicle_capacity))
                throw InstanceError(lineno, "malformed header, expected \"n Q\"");
            if (doc.n < 0) throw InstanceError(lineno, "negative station count");
            if (doc.vehicle_capacity < 1) throw InstanceError(lineno, "vehicle capacity must be positive");
            header = true;
            continue;
        }
        int id = 0, d = 0;
        Point p;
        if (tok.size() != 4 || !detail::parse_number(tok[0], id) || !detail::parse_number(tok[1], p.x) ||
            !detail::parse_number(tok[2], p.y) || !detail::parse_number(tok[3], d))
            throw InstanceError(lineno, "malformed station line, expected \"id x y d\"");
        if (id < next_id) throw InstanceError(lineno, "duplicate id " + std::to_string(id));
        if (id != next_id) throw InstanceError(lineno, "id " + std::to_string(id) + " out of order");
        if (id > doc.n) throw InstanceError(lineno, "more than n + 1 station lines");
        if (id == 0 && d != 0) throw InstanceError(lineno, "depot fields nonzero");
        if (d < -10 || d > 10) throw InstanceError(lineno, "demand outside [-10, 10]");
        doc.coords.push_back(p);
        doc.demands.push_back(d);
        ++next_id;
    }
    if (!header) throw InstanceError(0, "empty document");
    if (next_id != doc.n + 1)
        throw InstanceError(lineno, "expected " + std::to_string(doc.n + 1) + " station lines, found " +
                                        std::to_string(next_id));
    long long sum = 0;
    for (int d : doc.demands) sum += d;
    if (sum != 0) throw InstanceError(0, "demand sum nonzero");
    return doc;
}

inline Instance parse_instance(std::string_view text, int alpha = 1, std::string name = {}) {
    const InstanceDocument doc = parse_document(text);
    Instance inst = make_instance(std::move(name), doc.vehicle_capacity, doc.coords, doc.demands, alpha);
    if (auto v = validate(inst); !v.empty()) throw InstanceError(0, v.front());
    return inst;
}

/// Writes the canonical document. Raw demands are recovered by undoing the scaling.
inline std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << inst.n << ' ' << inst.vehicle_capacity << '\n';
    for (const Station& s : inst.stations) {
        const int raw = inst.alpha > 0 ? s.demand / inst.alpha : s.demand;
        out << s.id << ' ' << detail::format_double(s.x) << ' ' << detail::format_double(s.y) << ' ' << raw << '\n';
    }
    return out.str();
}

/// Best-effort loader for the TSPLIB-style 1-PDTSP layout (DIMENSION, CAPACITY,
/// NODE_COORD_SECTION, DEMAND_SECTION). The first node is the depot; its demand is
/// dropped. Node demands use the pickup-positive convention and are negated.
inline Instance parse_legacy_instance(std::string_view text, int alpha = 1, std::string name = {}) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0, dimension = -1, capacity = -1;
    enum class Section { Header, Coords, Demands } section = Section::Header;
    std::vector<Point> coords;
    std::vector<int> demands;
    while (std::getline(in, line)) {
        ++lineno;
        std::string flat = line;
        std::replace(flat.begin(), flat.end(), ':', ' ');
        const auto tok = detail::split_ws(flat);
        if (tok.empty()) continue;
        const std::string& key = tok[0];
        if (key == "EOF" || key == "END") break;
        if (key == "NODE_COORD_SECTION") {
            section = Section::Coords;
            continue;
        }
        if (key == "DEMAND_SECTION") {
            section = Section::Demands;
            continue;
        }
        if (key == "NAME" && tok.size() >= 2) {
            if (name.empty()) name = tok[1];
            continue;
        }
        if (key == "DIMENSION" && tok.size() >= 2) {
            if (!detail::parse_number(tok[1], dimension)) throw InstanceError(lineno, "malformed DIMENSION");
            continue;
        }
        if (key == "CAPACITY" && tok.size() >= 2) {
            if (!detail::parse_number(tok[1], capacity)) throw InstanceError(lineno, "malformed CAPACITY");
            continue;
        }
        if (section == Section::Coords) {
            Point p;
            int id = 0;
            if (tok.size() < 3 || !detail::parse_number(tok[0], id) || !detail::parse_number(tok[1], p.x) ||
                !detail::parse_number(tok[2], p.y))
                throw InstanceError(lineno, "malformed coordinate line");
            coords.push_back(p);
        } else if (section == Section::Demands) {
            int id = 0, d = 0;
            if (tok.size() < 2 || !detail::parse_number(tok[0], id) || !detail::parse_number(tok[1], d))
                throw InstanceError(lineno, "malformed demand line");
            demands.push_back(id == 1 && demands.empty() ? 0 : -d);
        }
    }
    if (capacity < 1) throw InstanceError(0, "missing CAPACITY");
    if (dimension >= 0 && static_cast<int>(coords.size()) != dimension)
        throw InstanceError(0, "coordinate count differs from DIMENSION");
    if (coords.size() != demands.size()) throw InstanceError(0, "coordinate and demand counts differ");
    if (coords.size() < 2) throw InstanceError(0, "need at least one station besides the depot");
    Instance inst = make_instance(std::move(name), capacity, coords, demands, alpha);
    if (auto v = validate(inst); !v.empty()) throw InstanceError(0, v.front());
    return inst;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace sbrp
