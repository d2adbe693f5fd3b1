#include "bsseries/bench/tables.hpp"

#include "bsseries/closed_form.hpp"
#include "bsseries/compensated_sum.hpp"
#include "bsseries/errors.hpp"
#include "bsseries/series.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace bsseries::bench {

MarketParams reference_params(double spot) {
    return MarketParams{spot, 4000.0, 0.01, 0.2, 1.0};
}

double atm_forward_spot() {
    const MarketParams p = reference_params(1.0);
    return p.strike * std::exp(-p.rate * p.tau);
}

double CellCheck::error() const {
    const double diff = std::abs(got - want);
    return relative ? diff / std::abs(want) : diff;
}

bool CellCheck::passed() const {
    return error() <= tol;
}

std::string CellCheck::describe() const {
    std::ostringstream out;
    out << "row=" << row << " col=" << column << " got=" << csv_number(got)
        << " want=" << csv_number(want) << " tol=" << csv_number(tol)
        << (relative ? " (relative)" : " (absolute)") << " err=" << csv_number(error());
    return out.str();
}

bool TableReport::passed() const {
    for (const auto& c : checks) {
        if (!c.passed()) {
            return false;
        }
    }
    return true;
}

std::vector<CellCheck> TableReport::failures() const {
    std::vector<CellCheck> out;
    for (const auto& c : checks) {
        if (!c.passed()) {
            out.push_back(c);
        }
    }
    return out;
}

namespace {

// Printed reference values, 7 decimals.
constexpr double kTable1Tol = 1e-7;

struct Table1Row {
    const char* name;
    double spot;  // 0 marks the at-the-money-forward row
    std::array<double, 4> printed;  // closed, 5/5, 10/10, 20/20
};

constexpr std::array<Table1Row, 5> kTable1 = {{
    {"deep_otm", 3000.0, {25.8385546, 14.6150001, 25.9147783, 25.8385533}},
    {"otm", 3800.0, {235.5135954, 235.5112726, 235.5135954, 235.5135954}},
    {"atm_forward", 0.0, {315.4523494, 315.4501517, 315.4523494, 315.4523494}},
    {"itm", 4200.0, {458.7930654, 458.7883563, 458.7930654, 458.7930654}},
    {"deep_itm", 5000.0, {1093.1653246, 1091.3521829, 1093.1662581, 1093.1653246}},
}};

// Printed to 3 significant digits.
constexpr double kTable2RelTol = 0.02;

struct Table2Row {
    int j;
    double bound;
    double epsilon;
    int terms;
};

constexpr std::array<Table2Row, 6> kTable2 = {{
    {2, 2.258e-4, 1e-2, 9},
    {3, 1.70e-5, 1e-3, 16},
    {4, 4.27e-7, 1e-6, 25},
    {5, 3.21e-8, 1e-7, 36},
    {6, 6.03e-10, 1e-9, 49},
    {7, 4.54e-11, 1e-10, 64},
}};

// Printed to 3 decimals.
constexpr double kTable3CellTol = 5e-4;
constexpr double kTable3PriceTol = 1e-3;
constexpr int kTable3Lines = 4;
constexpr int kTable3Columns = 8;

constexpr double kTable3Lead = 119.900;
constexpr std::array<std::array<double, kTable3Columns>, kTable3Lines> kTable3Cells = {{
    {315.978, 0, 0, 0, 0, 0, 0, 0},
    {4.213, 12.257, 5.943, 0, 0, 0, 0, 0},
    {0.034, 0.163, 0.238, 0.077, -0.019, 0, 0, 0},
    {0.000, 0.001, 0.003, 0.003, 0.001, -0.000, 0.000, 0},
}};
constexpr std::array<double, kTable3Columns + 1> kTable3Price = {
    119.900, 440.2125, 452.546, 458.73, 458.81, 458.792, 458.792, 458.792, 458.792};
constexpr double kTable3Final = 458.792;

std::string column_name(int n) {
    return "n" + std::to_string(n);
}

double round3(double x) {
    return std::round(x * 1000.0) / 1000.0;
}

} // namespace

TableReport table1() {
    TableReport report;
    report.table.header = {"config", "closed_form", "rect_5_5", "rect_10_10", "rect_20_20"};
    const std::array<const char*, 4> columns = {"closed_form", "rect_5_5", "rect_10_10", "rect_20_20"};
    for (const auto& row : kTable1) {
        const double spot = row.spot > 0.0 ? row.spot : atm_forward_spot();
        const MarketParams p = reference_params(spot);
        const DerivedQuantities d = derive(p);
        const std::array<double, 4> got = {
            call_closed_form(p),
            call_series_rect(d, 5, 5),
            call_series_rect(d, 10, 10),
            call_series_rect(d, 20, 20),
        };
        std::vector<std::string> cells{row.name};
        for (std::size_t c = 0; c < got.size(); ++c) {
            cells.push_back(csv_number(got[c]));
            report.checks.push_back({row.name, columns[c], got[c], row.printed[c], kTable1Tol, false});
        }
        report.table.rows.push_back(std::move(cells));
    }
    return report;
}

TableReport table2() {
    TableReport report;
    report.table.header = {"j_eps", "M_bound", "epsilon", "attained_precision_check", "selected_j", "total_terms"};
    const MarketParams p = reference_params(4200.0);
    const DerivedQuantities d = derive(p);
    const double a = alpha(d);
    const double Z = d.normalized_vol;
    const double closed = call_closed_form(p);
    for (const auto& row : kTable2) {
        const std::string name = "j=" + std::to_string(row.j);
        const double bound = bound_term(row.j, a, Z);
        const double series = call_series_diagonal(d, p.spot, FixedDiagonal{row.j}).price;
        const double attained = std::abs(series - closed);
        int selected = -1;
        try {
            selected = select_truncation(row.epsilon, a, Z, 64);
        } catch (const TruncationCapExceeded&) {
        }
        const int terms = (row.j + 1) * (row.j + 1);
        report.table.rows.push_back({std::to_string(row.j), csv_number(bound), csv_number(row.epsilon),
                                     csv_number(attained), std::to_string(selected), std::to_string(terms)});
        report.checks.push_back({name, "M_bound", bound, row.bound, kTable2RelTol, true});
        report.checks.push_back({name, "selected_j", static_cast<double>(selected), static_cast<double>(row.j), 0.0, false});
        report.checks.push_back({name, "total_terms", static_cast<double>(terms), static_cast<double>(row.terms), 0.0, false});
        // |series - closed| must not exceed the printed epsilon
        report.checks.push_back({name, "attained_precision_check", attained, 0.0, row.epsilon, false});
    }
    return report;
}

TableReport table3() {
    TableReport report;
    report.table.header = {"row", "lead"};
    for (int n = 0; n < kTable3Columns; ++n) {
        report.table.header.push_back(column_name(n));
    }
    const MarketParams p = reference_params(4200.0);
    const DerivedQuantities d = derive(p);
    const double lead = 0.5 * (p.spot - d.forward_strike);

    std::vector<std::string> lead_row{"lead", csv_number(lead)};
    lead_row.resize(kTable3Columns + 2);
    report.table.rows.push_back(lead_row);
    report.checks.push_back({"lead", "lead", lead, kTable3Lead, kTable3CellTol, false});

    std::array<std::array<double, kTable3Columns>, kTable3Lines> cells{};
    for (int j = 0; j < kTable3Lines; ++j) {
        std::vector<std::string> row{"j" + std::to_string(j), ""};
        for (int n = 0; n < kTable3Columns; ++n) {
            cells[j][n] = n <= 2 * j ? term({j, n}, d) : 0.0;
            row.push_back(csv_number(cells[j][n]));
            report.checks.push_back({"j" + std::to_string(j), column_name(n), cells[j][n],
                                     kTable3Cells[j][n], kTable3CellTol, false});
        }
        report.table.rows.push_back(std::move(row));
    }

    // running price: lead, then column by column over the shown lines
    CompensatedSum exact;
    double rounded = round3(lead);
    exact.add(lead);
    std::vector<std::string> price_row{"price", csv_number(exact.value())};
    std::vector<std::string> rounded_row{"price_from_rounded_cells", csv_number(rounded)};
    report.checks.push_back({"price", "lead", exact.value(), kTable3Price[0], kTable3PriceTol, false});
    for (int n = 0; n < kTable3Columns; ++n) {
        for (int j = 0; j < kTable3Lines; ++j) {
            exact.add(cells[j][n]);
            rounded += round3(cells[j][n]);
        }
        price_row.push_back(csv_number(exact.value()));
        rounded_row.push_back(csv_number(round3(rounded)));
        report.checks.push_back({"price", column_name(n), exact.value(), kTable3Price[n + 1], kTable3PriceTol, false});
    }
    report.checks.push_back({"price", "final", exact.value(), kTable3Final, kTable3PriceTol, false});
    report.table.rows.push_back(std::move(price_row));
    report.table.rows.push_back(std::move(rounded_row));
    return report;
}

SweepReport sweep(const SweepOptions& o) {
    if (!(o.s_step > 0.0) || !std::isfinite(o.s_step)) {
        throw InvalidInput("sweep step must be finite and > 0");
    }
    if (!(o.s_min > 0.0) || !(o.s_max >= o.s_min)) {
        throw InvalidInput("sweep needs 0 < s_min <= s_max");
    }
    if (o.j_list.empty()) {
        throw InvalidInput("sweep needs at least one j_max");
    }
    for (int j : o.j_list) {
        if (j < 0) {
            throw InvalidInput("sweep j_max values must be >= 0");
        }
    }

    SweepReport report;
    report.table.header = {"S", "closed"};
    for (int j : o.j_list) {
        report.table.header.push_back("series_j" + std::to_string(j));
    }
    for (int j : o.j_list) {
        report.table.header.push_back("abs_err_j" + std::to_string(j));
    }

    std::vector<double> spots;
    if (o.s_max > o.s_min) {
        const long count = std::lround(std::floor((o.s_max - o.s_min) / o.s_step + 1e-9));
        for (long i = 0; i <= count; ++i) {
            spots.push_back(o.s_min + static_cast<double>(i) * o.s_step);
        }
    }

    std::vector<std::vector<double>> errors(o.j_list.size(), std::vector<double>(spots.size()));
    for (std::size_t i = 0; i < spots.size(); ++i) {
        const MarketParams p = reference_params(spots[i]);
        const DerivedQuantities d = derive(p);
        const double closed = call_closed_form(p);
        std::vector<std::string> row{csv_number(spots[i]), csv_number(closed)};
        std::vector<std::string> err_cells;
        for (std::size_t c = 0; c < o.j_list.size(); ++c) {
            const double series = call_series_diagonal(d, p.spot, FixedDiagonal{o.j_list[c]}).price;
            errors[c][i] = std::abs(series - closed);
            row.push_back(csv_number(series));
            err_cells.push_back(csv_number(errors[c][i]));
        }
        row.insert(row.end(), err_cells.begin(), err_cells.end());
        report.table.rows.push_back(std::move(row));
    }

    const double strike = reference_params(1.0).strike;
    for (std::size_t c = 0; c < o.j_list.size(); ++c) {
        ErrorInterval interval;
        interval.j_max = o.j_list[c];
        for (double e : errors[c]) {
            interval.max_abs_error = std::max(interval.max_abs_error, e);
        }
        if (!spots.empty()) {
            std::size_t centre = 0;
            for (std::size_t i = 1; i < spots.size(); ++i) {
                if (std::abs(spots[i] - strike) < std::abs(spots[centre] - strike)) {
                    centre = i;
                }
            }
            if (errors[c][centre] <= o.threshold) {
                std::size_t lo = centre;
                std::size_t hi = centre;
                while (lo > 0 && errors[c][lo - 1] <= o.threshold) {
                    --lo;
                }
                while (hi + 1 < spots.size() && errors[c][hi + 1] <= o.threshold) {
                    ++hi;
                }
                interval.lo = spots[lo];
                interval.hi = spots[hi];
            }
        }
        report.intervals.push_back(interval);
    }
    return report;
}

} // namespace bsseries::bench
