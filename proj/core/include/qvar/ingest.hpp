#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qvar/core.hpp"
#include "qvar/csv.hpp"

namespace qvar::ingest {

enum class OrgType { BSF, BSR, BSO, EDU, GOV, MED, NGO };

inline constexpr OrgType kAllOrgTypes[] = {OrgType::BSF, OrgType::BSO, OrgType::BSR, OrgType::EDU,
                                           OrgType::GOV, OrgType::MED, OrgType::NGO};

[[nodiscard]] std::string_view to_string(OrgType t) noexcept;
[[nodiscard]] std::optional<OrgType> parse_org_type(std::string_view s);

struct BreachEvent {
    /// Days since 1970-01-01.
    std::int64_t day = 0;
    OrgType org = OrgType::BSO;
    std::string breach_type;
    std::uint64_t records_affected = 1;
};

/// Column names of the PRC export. Defaults follow the chronology CSV.
struct ColumnMap {
    std::string date = "Date Made Public";
    std::string breach_type = "Type of breach";
    std::string records = "Total Records";
    std::string org_type = "Type of organization";
    /// Breach-type code retained by the filter.
    std::string hacking_code = "HACK";

    /// Overrides defaults from a JSON object with any of the keys
    /// date, breach_type, records, org_type, hacking_code.
    static ColumnMap from_json_file(const std::filesystem::path& path);
};

struct PrcParse {
    std::vector<BreachEvent> events;
    /// Hacking rows dropped for a missing, unknown or unparseable field.
    std::size_t dropped_incomplete = 0;
    /// Rows of other breach types.
    std::size_t non_hacking = 0;
};

/// Parses "M/D/YYYY", "YYYY-MM-DD" or "YYYY/MM/DD" into days since epoch.
[[nodiscard]] std::optional<std::int64_t> parse_date(std::string_view s);

/// Parses a positive record count ("1,200", "42", "3e6" are accepted).
[[nodiscard]] std::optional<std::uint64_t> parse_records(std::string_view s);

[[nodiscard]] PrcParse parse_prc(const csv::Table& table, const ColumnMap& columns = {});
/// Throws std::system_error when the file cannot be read and
/// std::invalid_argument when no hacking rows survive.
[[nodiscard]] PrcParse parse_prc(const std::filesystem::path& path, const ColumnMap& columns = {});

struct PreparedSeries {
    /// ln(records), timestamped with the tie-broken event time.
    Series log_sizes;
    /// ln(gap in days) between consecutive events; one shorter than log_sizes.
    Series log_interarrivals;
    std::uint64_t event_order_seed = 0;
    /// Events in their final order with their fractional-day times.
    std::vector<BreachEvent> ordered;
    std::vector<double> event_times;
};

/// Orders events by date; events sharing a date get i.i.d. U(0,1) day
/// fractions from `seed` and are ordered by them. Single-event days sit at
/// fraction 0.
[[nodiscard]] PreparedSeries prepare(std::vector<BreachEvent> events, std::uint64_t seed);

/// Contiguous split: train holds the first floor(train_frac * N) points.
[[nodiscard]] std::pair<Series, Series> split(const Series& series, double train_frac);

enum class Process { GaussianAr1, Qar1 };

struct SyntheticSpec {
    Process process = Process::GaussianAr1;
    double intercept = 0.0;
    double phi = 0.5;
    double noise_sd = 1.0;
    /// qar1: theta_0(u) and theta_1(u) sampled on an even grid over [0, 1],
    /// linearly interpolated.
    std::vector<double> theta0_table;
    std::vector<double> theta1_table;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::size_t burn_in = 200;
};

/// Simulates the process; the first burn_in steps are discarded.
[[nodiscard]] Series generate(const SyntheticSpec& spec);

struct SummaryRow {
    std::string label;
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// min/median/mean/sample sd/max/count of non-empty values.
[[nodiscard]] SummaryRow summarize(std::string label, std::span<const double> values);

struct OrgBreakdown {
    std::vector<SummaryRow> sizes;
    std::vector<SummaryRow> interarrivals;
};

/// Per-organisation-type statistics of raw sizes and of the gaps (days)
/// between consecutive events of the same type, plus a "Total" row.
[[nodiscard]] OrgBreakdown org_breakdown(const PreparedSeries& prepared);

}  // namespace qvar::ingest
