#pragma once

#include "bsseries/bench/csv.hpp"
#include "bsseries/market.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bsseries::bench {

/// K = 4000, r = 1%, sigma = 20%, tau = 1 year, with the given spot.
MarketParams reference_params(double spot);

/// Spot equal to the forward strike K e^{-r tau} of the reference market.
double atm_forward_spot();

struct CellCheck {
    std::string row;
    std::string column;
    double got = 0.0;
    double want = 0.0;
    double tol = 0.0;
    bool relative = false;

    double error() const;
    bool passed() const;
    std::string describe() const;
};

struct TableReport {
    CsvTable table;
    std::vector<CellCheck> checks;

    bool passed() const;
    std::vector<CellCheck> failures() const;
};

/// Closed form against rectangular truncations 5/10/20 for five spots.
TableReport table1();

/// Bound decrease, selected truncation and attained precision for j = 2..7 at S = 4200.
TableReport table2();

/// The (j, n) term matrix for j <= 3 at S = 4200 with the running price row.
TableReport table3();

struct SweepOptions {
    double s_min = 2500.0;
    double s_max = 6500.0;
    double s_step = 10.0;
    std::vector<int> j_list{5, 10};
    double threshold = 0.5;
};

struct ErrorInterval {
    int j_max = 0;
    double max_abs_error = 0.0;
    /// Contiguous run of grid spots around the strike with error <= threshold.
    std::optional<double> lo;
    std::optional<double> hi;
};

struct SweepReport {
    CsvTable table;
    std::vector<ErrorInterval> intervals;
};

/// Closed form against diagonal truncations over a spot grid. Throws
/// InvalidInput for s_min > s_max or a nonpositive step; s_min == s_max gives
/// an empty grid.
SweepReport sweep(const SweepOptions& options);

} // namespace bsseries::bench
