#include "qvar/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

#include "qvar/random.hpp"

namespace qvar::ingest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::optional<int> to_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

std::optional<std::int64_t> civil_day(int y, int m, int d) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd}.time_since_epoch().count();
}

}  // namespace

std::string_view to_string(OrgType t) noexcept {
    switch (t) {
    case OrgType::BSF: return "BSF";
    case OrgType::BSR: return "BSR";
    case OrgType::BSO: return "BSO";
    case OrgType::EDU: return "EDU";
    case OrgType::GOV: return "GOV";
    case OrgType::MED: return "MED";
    case OrgType::NGO: return "NGO";
    }
    return "BSO";
}

std::optional<OrgType> parse_org_type(std::string_view s) {
    s = trim(s);
    for (OrgType t : kAllOrgTypes) {
        if (s == to_string(t)) return t;
    }
    return std::nullopt;
}

ColumnMap ColumnMap::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory),
                                "cannot open column map '" + path.string() + "'");
    }
    const nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::invalid_argument("column map must be a JSON object");
    ColumnMap m;
    for (const auto& [key, value] : j.items()) {
        const std::string v = value.get<std::string>();
        if (key == "date") m.date = v;
        else if (key == "breach_type") m.breach_type = v;
        else if (key == "records") m.records = v;
        else if (key == "org_type") m.org_type = v;
        else if (key == "hacking_code") m.hacking_code = v;
        else throw std::invalid_argument("unknown column map key '" + key + "'");
    }
    return m;
}

std::optional<std::int64_t> parse_date(std::string_view s) {
    s = trim(s);
    // Drop a trailing time-of-day component.
    if (const auto sp = s.find(' '); sp != std::string_view::npos) s = s.substr(0, sp);
    if (const auto tpos = s.find('T'); tpos != std::string_view::npos) s = s.substr(0, tpos);
    const char sep = s.find('-') != std::string_view::npos ? '-' : '/';
    const auto parts = split_on(s, sep);
    if (parts.size() != 3) return std::nullopt;
    const auto a = to_int(parts[0]);
    const auto b = to_int(parts[1]);
    const auto c = to_int(parts[2]);
    if (!a || !b || !c) return std::nullopt;
    if (parts[0].size() == 4) return civil_day(*a, *b, *c);  // Y-M-D
    if (parts[2].size() == 4) return civil_day(*c, *a, *b);  // M/D/Y
    return std::nullopt;
}

std::optional<std::uint64_t> parse_records(std::string_view s) {
    s = trim(s);
    std::string digits;
    for (char c : s) {
        if (c != ',' && c != ' ') digits.push_back(c);
    }
    if (digits.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    if (!std::isfinite(v) || v < 1.0 || v != std::floor(v) || v > 1e18) return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

PrcParse parse_prc(const csv::Table& table, const ColumnMap& columns) {
    const std::size_t c_date = table.column(columns.date);
    const std::size_t c_type = table.column(columns.breach_type);
    const std::size_t c_records = table.column(columns.records);
    const std::size_t c_org = table.column(columns.org_type);

    PrcParse out;
    for (const auto& row : table.rows) {
        auto field = [&](std::size_t c) -> std::string_view {
            return c < row.size() ? std::string_view(row[c]) : std::string_view();
        };
        const std::string_view type = trim(field(c_type));
        if (type != columns.hacking_code) {
            ++out.non_hacking;
            continue;
        }
        const auto day = parse_date(field(c_date));
        const auto records = parse_records(field(c_records));
        const auto org = parse_org_type(field(c_org));
        if (!day || !records || !org) {
            ++out.dropped_incomplete;
            continue;
        }
        out.events.push_back({*day, *org, std::string(type), *records});
    }
    return out;
}

PrcParse parse_prc(const std::filesystem::path& path, const ColumnMap& columns) {
    PrcParse out = parse_prc(csv::read_file(path), columns);
    if (out.events.empty()) {
        throw std::invalid_argument("no complete '" + columns.hacking_code + "' rows in '" +
                                    path.string() + "'");
    }
    return out;
}

PreparedSeries prepare(std::vector<BreachEvent> events, std::uint64_t seed) {
    if (events.empty()) throw std::invalid_argument("prepare: no events");
    std::stable_sort(events.begin(), events.end(),
                     [](const BreachEvent& a, const BreachEvent& b) { return a.day < b.day; });

    Rng rng(seed);
    std::vector<double> fraction(events.size(), 0.0);
    for (std::size_t first = 0; first < events.size();) {
        std::size_t last = first + 1;
        while (last < events.size() && events[last].day == events[first].day) ++last;
        if (last - first > 1) {
            for (std::size_t i = first; i < last; ++i) fraction[i] = rng.uniform();
            // Redraw exact collisions so every event gets a distinct time.
            for (bool clash = true; clash;) {
                clash = false;
                for (std::size_t i = first; i < last; ++i) {
                    for (std::size_t j = first; j < i; ++j) {
                        if (fraction[i] == fraction[j]) {
                            fraction[i] = rng.uniform();
                            clash = true;
                        }
                    }
                }
            }
            std::vector<std::size_t> order(last - first);
            std::iota(order.begin(), order.end(), first);
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return fraction[a] < fraction[b]; });
            std::vector<BreachEvent> ev;
            std::vector<double> fr;
            for (std::size_t i : order) {
                ev.push_back(events[i]);
                fr.push_back(fraction[i]);
            }
            std::move(ev.begin(), ev.end(), events.begin() + static_cast<std::ptrdiff_t>(first));
            std::copy(fr.begin(), fr.end(), fraction.begin() + static_cast<std::ptrdiff_t>(first));
        }
        first = last;
    }

    PreparedSeries out;
    out.event_order_seed = seed;
    out.event_times.reserve(events.size());
    std::vector<double> sizes;
    for (std::size_t i = 0; i < events.size(); ++i) {
        out.event_times.push_back(static_cast<double>(events[i].day) + fraction[i]);
        sizes.push_back(std::log(static_cast<double>(events[i].records_affected)));
    }
    std::vector<double> gaps;
    std::vector<double> gap_times;
    for (std::size_t i = 1; i < events.size(); ++i) {
        const double gap = out.event_times[i] - out.event_times[i - 1];
        if (!(gap > 0.0)) throw std::logic_error("non-positive inter-arrival after tie-breaking");
        gaps.push_back(std::log(gap));
        gap_times.push_back(out.event_times[i]);
    }
    out.log_sizes = Series(std::move(sizes), out.event_times);
    out.log_interarrivals = Series(std::move(gaps), std::move(gap_times));
    out.ordered = std::move(events);
    return out;
}

std::pair<Series, Series> split(const Series& series, double train_frac) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    }
    if (series.size() < 2) throw std::invalid_argument("split needs at least 2 points");
    const auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(series.size())));
    if (n_train == 0 || n_train == series.size()) {
        throw std::invalid_argument("split of " + std::to_string(series.size()) + " points at " +
                                    std::to_string(train_frac) + " leaves one side empty");
    }
    return {series.slice(0, n_train), series.slice(n_train, series.size())};
}

namespace {

double interpolate(const std::vector<double>& table, double u) {
    const double pos = u * static_cast<double>(table.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), table.size() - 2);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * table[i] + w * table[i + 1];
}

}  // namespace

Series generate(const SyntheticSpec& spec) {
    if (spec.n == 0) throw std::invalid_argument("generate: n must be positive");
    Rng rng(spec.seed);
    std::vector<double> out;
    out.reserve(spec.n);
    double y = 0.0;
    const std::size_t total = spec.burn_in + spec.n;

    switch (spec.process) {
    case Process::GaussianAr1: {
        if (!(std::abs(spec.phi) < 1.0)) throw std::invalid_argument("generate: |phi| must be < 1");
        if (!(spec.noise_sd > 0.0)) throw std::invalid_argument("generate: noise sd must be positive");
        y = spec.intercept / (1.0 - spec.phi);
        for (std::size_t t = 0; t < total; ++t) {
            y = spec.intercept + spec.phi * y + spec.noise_sd * rng.normal();
            if (t >= spec.burn_in) out.push_back(y);
        }
        break;
    }
    case Process::Qar1: {
        const auto& t0 = spec.theta0_table;
        const auto& t1 = spec.theta1_table;
        if (t0.size() < 2 || t1.size() < 2) {
            throw std::invalid_argument("generate: coefficient tables need at least 2 points");
        }
        if (!std::is_sorted(t0.begin(), t0.end())) {
            throw std::invalid_argument("generate: theta_0 table must be non-decreasing");
        }
        if (!std::is_sorted(t1.begin(), t1.end()) && !std::is_sorted(t1.rbegin(), t1.rend())) {
            throw std::invalid_argument("generate: theta_1 table must be monotone");
        }
        for (double v : t1) {
            if (!(std::abs(v) < 1.0)) throw std::invalid_argument("generate: |theta_1(u)| must be < 1");
        }
        for (std::size_t t = 0; t < total; ++t) {
            const double u = rng.uniform();
            y = interpolate(t0, u) + interpolate(t1, u) * y;
            if (t >= spec.burn_in) out.push_back(y);
        }
        break;
    }
    }
    return Series(std::move(out));
}

SummaryRow summarize(std::string label, std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: no values");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    SummaryRow r;
    r.label = std::move(label);
    r.count = v.size();
    r.min = v.front();
    r.max = v.back();
    const std::size_t n = v.size();
    r.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    r.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    return r;
}

OrgBreakdown org_breakdown(const PreparedSeries& prepared) {
    OrgBreakdown out;
    std::vector<double> all_sizes;
    for (OrgType t : kAllOrgTypes) {
        std::vector<double> sizes;
        std::vector<double> gaps;
        double last_time = 0.0;
        bool seen = false;
        for (std::size_t i = 0; i < prepared.ordered.size(); ++i) {
            if (prepared.ordered[i].org != t) continue;
            sizes.push_back(static_cast<double>(prepared.ordered[i].records_affected));
            if (seen) gaps.push_back(prepared.event_times[i] - last_time);
            last_time = prepared.event_times[i];
            seen = true;
        }
        if (!sizes.empty()) out.sizes.push_back(summarize(std::string(to_string(t)), sizes));
        if (!gaps.empty()) out.interarrivals.push_back(summarize(std::string(to_string(t)), gaps));
    }
    for (const auto& e : prepared.ordered) all_sizes.push_back(static_cast<double>(e.records_affected));
    out.sizes.push_back(summarize("Total", all_sizes));
    std::vector<double> all_gaps;
    for (std::size_t i = 1; i < prepared.event_times.size(); ++i) {
        all_gaps.push_back(prepared.event_times[i] - prepared.event_times[i - 1]);
    }
    if (!all_gaps.empty()) out.interarrivals.push_back(summarize("Total", all_gaps));
    return out;
}

}  // namespace qvar::ingest
