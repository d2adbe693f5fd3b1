#include "bsseries/bench/csv.hpp"
#include "bsseries/bench/tables.hpp"
#include "bsseries/errors.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

using namespace bsseries;
using namespace bsseries::bench;

namespace {

const CellCheck* find(const TableReport& r, const std::string& row, const std::string& col) {
    for (const auto& c : r.checks) {
        if (c.row == row && c.column == col) {
            return &c;
        }
    }
    return nullptr;
}

std::size_t column_index(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == name) {
            return i;
        }
    }
    return t.header.size();
}

} // namespace

TEST_CASE("csv_number is shortest round-trip") {
    CHECK(csv_number(0.1) == "0.1");
    CHECK(csv_number(458.7930653864851) == "458.7930653864851");
    CHECK(csv_number(1e-300) == "1e-300");
    CHECK(csv_number(-2.5) == "-2.5");
    CHECK(csv_number(0.0) == "0");
    const double x = 315.45234939769193;
    CHECK(std::stod(csv_number(x)) == x);
}

TEST_CASE("CsvTable layout") {
    CsvTable t;
    t.header = {"a", "b"};
    CHECK(t.str() == "a,b\n");
    t.rows.push_back({"1", "2.5"});
    t.rows.push_back({"x", ""});
    CHECK(t.str() == "a,b\n1,2.5\nx,\n");
}

TEST_CASE("reference market") {
    const MarketParams p = reference_params(4200.0);
    CHECK(p.strike == 4000.0);
    CHECK(p.rate == 0.01);
    CHECK(p.vol == 0.2);
    CHECK(p.tau == 1.0);
    CHECK(atm_forward_spot() == doctest::Approx(3960.199334996672).epsilon(1e-15));
}

TEST_CASE("CellCheck") {
    const CellCheck abs_ok{"r", "c", 1.00000005, 1.0, 1e-7, false};
    CHECK(abs_ok.passed());
    const CellCheck rel_bad{"r", "c", 1.03, 1.0, 0.02, true};
    CHECK_FALSE(rel_bad.passed());
    CHECK(rel_bad.describe().find("row=r col=c") != std::string::npos);
}

TEST_CASE("table1 reproduces every cell") {
    const auto start = std::chrono::steady_clock::now();
    const TableReport r = table1();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.checks.size() == 20);
    for (const auto& f : r.failures()) {
        FAIL_CHECK(f.describe());
    }
    CHECK(r.passed());
    CHECK(seconds < 1.0);
    CHECK(r.table.header == std::vector<std::string>{"config", "closed_form", "rect_5_5", "rect_10_10", "rect_20_20"});
    CHECK(std::abs(find(r, "deep_itm", "rect_10_10")->got - 1093.1662581) <= 1e-7);
    CHECK(std::abs(find(r, "otm", "rect_5_5")->got - 235.5112726) <= 1e-7);
}

TEST_CASE("table2 bound values and term counts") {
    const TableReport r = table2();
    for (const char* row : {"j=2", "j=3", "j=4", "j=5", "j=6", "j=7"}) {
        CAPTURE(row);
        CHECK(find(r, row, "M_bound")->passed());
        CHECK(find(r, row, "total_terms")->passed());
    }
    CHECK(find(r, "j=3", "M_bound")->got == doctest::Approx(1.70e-5).epsilon(0.02));
    CHECK(find(r, "j=6", "M_bound")->got == doctest::Approx(6.03e-10).epsilon(0.02));
    CHECK(find(r, "j=2", "M_bound")->got == doctest::Approx(2.258e-4).epsilon(0.02));
    for (const char* row : {"j=5", "j=6", "j=7"}) {
        CAPTURE(row);
        CHECK(find(r, row, "selected_j")->passed());
        CHECK(find(r, row, "attained_precision_check")->passed());
    }
    CHECK(find(r, "j=4", "selected_j")->passed());
}

TEST_CASE("table2 passes every check" * doctest::test_suite("known_red")) {
    const TableReport r = table2();
    for (const auto& f : r.failures()) {
        FAIL_CHECK(f.describe());
    }
}

TEST_CASE("table3 term matrix") {
    const TableReport r = table3();
    CHECK(find(r, "lead", "lead")->passed());
    CHECK(find(r, "lead", "lead")->got == doctest::Approx(119.900).epsilon(5e-6));
    for (const auto& c : r.checks) {
        if (c.row.rfind("j", 0) == 0) {
            CAPTURE(c.describe());
            CHECK(c.passed());
        }
    }
    CHECK(std::abs(find(r, "j1", "n0")->got - 4.213) <= 5e-4);
    CHECK(std::abs(find(r, "j1", "n1")->got - 12.257) <= 5e-4);
    CHECK(std::abs(find(r, "j1", "n2")->got - 5.943) <= 5e-4);
    CHECK(find(r, "price", "final")->passed());
    CHECK(std::abs(find(r, "price", "final")->got - 458.792) <= 1e-3);
    // running sum of 3-decimal cells
    const auto& rounded = r.table.rows.back();
    CHECK(rounded[0] == "price_from_rounded_cells");
    CHECK(rounded[2] == "440.125");
    CHECK(rounded[3] == "452.546");
    CHECK(rounded.back() == "458.792");
}

TEST_CASE("table3 passes every check" * doctest::test_suite("known_red")) {
    const TableReport r = table3();
    for (const auto& f : r.failures()) {
        FAIL_CHECK(f.describe());
    }
}

TEST_CASE("tables are bit-stable") {
    CHECK(table1().table.str() == table1().table.str());
    CHECK(table2().table.str() == table2().table.str());
    CHECK(table3().table.str() == table3().table.str());
    SweepOptions o;
    o.s_step = 100.0;
    CHECK(sweep(o).table.str() == sweep(o).table.str());
}

TEST_CASE("sweep rows") {
    const auto start = std::chrono::steady_clock::now();
    const SweepReport r = sweep(SweepOptions{});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 2.0);
    CHECK(r.table.header ==
          std::vector<std::string>{"S", "closed", "series_j5", "series_j10", "abs_err_j5", "abs_err_j10"});
    CHECK(r.table.rows.size() == 401);
    const std::size_t e5 = column_index(r.table, "abs_err_j5");
    const std::size_t e10 = column_index(r.table, "abs_err_j10");
    const std::size_t s10 = column_index(r.table, "series_j10");
    const std::size_t closed = column_index(r.table, "closed");
    for (const auto& row : r.table.rows) {
        if (row[0] == "4000") {
            CHECK(std::abs(std::stod(row[s10]) - std::stod(row[closed])) <= 1e-6);
        }
        if (row[0] == "2500") {
            CHECK(std::stod(row[e5]) > std::stod(row[e10]));
            CHECK(std::stod(row[e10]) >= 0.0);
        }
    }
    REQUIRE(r.intervals.size() == 2);
    const ErrorInterval& j5 = r.intervals[0];
    const ErrorInterval& j10 = r.intervals[1];
    REQUIRE(j5.lo);
    REQUIRE(j10.lo);
    CHECK(*j10.lo < *j5.lo);
    CHECK(*j10.hi > *j5.hi);
}

TEST_CASE("sweep max error for j_max = 5 stays below 0.5" * doctest::test_suite("known_red")) {
    const SweepReport r = sweep(SweepOptions{});
    CHECK(r.intervals[0].max_abs_error <= 0.5);
}

TEST_CASE("sweep grid edge cases") {
    SweepOptions o;
    o.s_min = o.s_max = 4000.0;
    const SweepReport empty = sweep(o);
    CHECK(empty.table.rows.empty());
    CHECK(empty.table.str() == "S,closed,series_j5,series_j10,abs_err_j5,abs_err_j10\n");

    o.s_min = 4100.0;
    o.s_max = 4000.0;
    CHECK_THROWS_AS(sweep(o), InvalidInput);
    o = SweepOptions{};
    o.s_step = 0.0;
    CHECK_THROWS_AS(sweep(o), InvalidInput);
    o = SweepOptions{};
    o.j_list.clear();
    CHECK_THROWS_AS(sweep(o), InvalidInput);
}
