// bsseries: price, Greeks, truncation bounds and table reproduction from the
// command line.
//
// Exit codes: 0 ok, 1 table check or quadrature failure, 2 usage or invalid
// input, 3 domain error (zero volatility where it is not allowed, branch
// domain, Gamma pole), 4 truncation cap exceeded.

#include "bsseries/bench/csv.hpp"
#include "bsseries/bench/tables.hpp"
#include "bsseries/closed_form.hpp"
#include "bsseries/contour.hpp"
#include "bsseries/errors.hpp"
#include "bsseries/greeks.hpp"
#include "bsseries/market.hpp"
#include "bsseries/series.hpp"

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace bs = bsseries;
namespace bench = bsseries::bench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitCap = 4;

std::string sig10(double x) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                         std::chars_format::general, 10);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

struct Options {
    bs::MarketParams market = bench::reference_params(4200.0);
    std::string method = "series";
    double tol = 1e-10;
    int jcap = 64;
    std::optional<int> jmax;
    std::optional<int> nmax;
    std::optional<int> mmax;
    std::string csv_path;
    bool theta_calendar = false;
    bs::ContourSpec contour;
    bench::SweepOptions sweep;
    std::vector<int> sweep_j{5, 10};
};

void add_market(CLI::App* cmd, Options& o) {
    cmd->add_option("--spot", o.market.spot, "Spot S")->capture_default_str();
    cmd->add_option("--strike", o.market.strike, "Strike K")->capture_default_str();
    cmd->add_option("--rate", o.market.rate, "Risk-free rate r")->capture_default_str();
    cmd->add_option("--vol", o.market.vol, "Volatility sigma")->capture_default_str();
    cmd->add_option("--tau", o.market.tau, "Time to expiry in years")->capture_default_str();
}

void add_truncation(CLI::App* cmd, Options& o, bool with_rect) {
    auto* tol = cmd->add_option("--tol,--eps", o.tol, "Adaptive per-term tolerance")->capture_default_str();
    auto* jmax = cmd->add_option("--jmax", o.jmax, "Fixed number of diagonal lines");
    cmd->add_option("--jcap", o.jcap, "Largest line adaptive truncation may reach")->capture_default_str();
    tol->excludes(jmax);
    if (with_rect) {
        auto* nmax = cmd->add_option("--nmax", o.nmax, "Rectangular n cutoff");
        auto* mmax = cmd->add_option("--mmax", o.mmax, "Rectangular m cutoff");
        for (auto* opt : {nmax, mmax}) {
            opt->excludes(tol);
            opt->excludes(jmax);
        }
    }
}

void add_contour(CLI::App* cmd, Options& o) {
    cmd->add_option("--c1", o.contour.c1, "Contour anchor Re t1")->capture_default_str();
    cmd->add_option("--c2", o.contour.c2, "Contour anchor Re t2")->capture_default_str();
    cmd->add_option("--half-width", o.contour.half_width, "Quadrature half width")->capture_default_str();
    cmd->add_option("--step", o.contour.step, "Quadrature step")->capture_default_str();
    cmd->add_option("--bend", o.contour.bend, "Parabolic bend of the t2 contour")->capture_default_str();
}

void add_csv(CLI::App* cmd, Options& o) {
    cmd->add_option("--csv", o.csv_path, "Write CSV to PATH instead of standard output");
}

bs::TruncationConfig diagonal_config(const Options& o) {
    if (o.jmax) {
        if (*o.jmax < 0) {
            throw bs::InvalidInput("--jmax must be >= 0");
        }
        return bs::FixedDiagonal{*o.jmax};
    }
    if (!(o.tol > 0.0)) {
        throw bs::InvalidInput("--tol must be > 0");
    }
    if (o.jcap < 1) {
        throw bs::InvalidInput("--jcap must be >= 1");
    }
    return bs::Adaptive{o.tol, o.jcap};
}

void emit_csv(const Options& o, const bench::CsvTable& table) {
    if (o.csv_path.empty()) {
        return;
    }
    std::ofstream out(o.csv_path, std::ios::binary);
    if (!out) {
        throw bs::InvalidInput("cannot open " + o.csv_path + " for writing");
    }
    table.write(out);
}

// Tables go to stdout unless --csv redirects them to a file.
void emit_table(const Options& o, const bench::CsvTable& table) {
    if (o.csv_path.empty()) {
        table.write(std::cout);
    } else {
        emit_csv(o, table);
    }
}

int cmd_price(const Options& o) {
    bs::validate(o.market);
    const bs::DerivedQuantities d = bs::derive(o.market);
    const double S = o.market.spot;
    bench::CsvTable table;
    table.header = {"method", "call", "put"};

    if (o.method != "rect" && (o.nmax || o.mmax)) {
        throw bs::InvalidInput("--nmax/--mmax only apply to --method rect");
    }
    if (o.method == "closed") {
        const double call = bs::call_closed_form(o.market);
        const double put = bs::put_closed_form(o.market);
        std::cout << "call " << sig10(call) << "\nput " << sig10(put) << '\n';
        table.rows.push_back({o.method, bench::csv_number(call), bench::csv_number(put)});
    } else if (o.method == "rect") {
        if (o.jmax) {
            throw bs::InvalidInput("--jmax does not apply to --method rect");
        }
        const int nmax = o.nmax.value_or(20);
        const int mmax = o.mmax.value_or(20);
        if (nmax < 0 || mmax < 1) {
            throw bs::InvalidInput("--nmax must be >= 0 and --mmax >= 1");
        }
        const double call = bs::call_series_rect(d, nmax, mmax);
        const double put = bs::put_from_call(call, d, S);
        std::cout << "call " << sig10(call) << "\nput " << sig10(put) << '\n';
        table.rows.push_back({o.method, bench::csv_number(call), bench::csv_number(put)});
    } else if (o.method == "series") {
        const bs::TruncationConfig cfg = diagonal_config(o);
        try {
            const bs::SeriesResult call = bs::call_series_diagonal(d, S, cfg);
            const bs::SeriesResult put = bs::put_series(d, S, cfg);
            std::cout << "call " << sig10(call.price) << "\nput " << sig10(put.price) << "\nj_used "
                      << call.j_used << "\nterms " << call.terms_evaluated << "\ntail_bound "
                      << sig10(call.tail_bound) << "\nconverged " << (call.converged ? "true" : "false")
                      << '\n';
            table.header.insert(table.header.end(), {"j_used", "terms", "tail_bound", "converged"});
            table.rows.push_back({o.method, bench::csv_number(call.price), bench::csv_number(put.price),
                                  std::to_string(call.j_used), std::to_string(call.terms_evaluated),
                                  bench::csv_number(call.tail_bound), call.converged ? "true" : "false"});
        } catch (const bs::TruncationCapExceeded& e) {
            const double put = bs::put_from_call(e.best_price(), d, S);
            std::cout << "call " << sig10(e.best_price()) << "\nput " << sig10(put) << "\nj_used "
                      << e.j_cap() << "\ntail_bound " << sig10(e.tail_bound()) << "\nconverged false\n";
            std::cerr << "error: " << e.what() << '\n';
            return kExitCap;
        }
    } else if (o.method == "contour") {
        const bs::ContourResult r = bs::price_via_contour(d, o.contour);
        const double put = bs::put_from_call(r.price, d, S);
        std::cout << "call " << sig10(r.price) << "\nput " << sig10(put) << "\nimag_residual "
                  << sig10(r.imag_residual) << "\nstep_change " << sig10(r.step_change) << '\n';
        table.rows.push_back({o.method, bench::csv_number(r.price), bench::csv_number(put)});
    } else {
        throw bs::InvalidInput("unknown method " + o.method);
    }
    emit_csv(o, table);
    return kExitOk;
}

int cmd_greeks(const Options& o) {
    bs::validate(o.market);
    const bs::GreeksResult g = bs::greeks_bundle(o.market, diagonal_config(o));
    const double theta = o.theta_calendar ? -g.theta_tau : g.theta_tau;
    const char* theta_name = o.theta_calendar ? "theta_calendar" : "theta_tau";
    std::cout << "delta " << sig10(g.delta) << "\nrho " << sig10(g.rho) << "\nvega " << sig10(g.vega)
              << '\n' << theta_name << ' ' << sig10(theta) << "\nj_used " << g.j_used << "\nconverged "
              << (g.converged ? "true" : "false") << '\n';
    bench::CsvTable table;
    table.header = {"delta", "rho", "vega", theta_name, "j_used", "converged"};
    table.rows.push_back({bench::csv_number(g.delta), bench::csv_number(g.rho), bench::csv_number(g.vega),
                          bench::csv_number(theta), std::to_string(g.j_used), g.converged ? "true" : "false"});
    emit_csv(o, table);
    return kExitOk;
}

int cmd_bound(const Options& o) {
    bs::validate(o.market);
    const bs::DerivedQuantities d = bs::derive(o.market);
    const double a = bs::alpha(d);
    const double Z = d.normalized_vol;
    bench::CsvTable table;
    table.header = {"alpha", "Z", "epsilon", "j_eps", "terms", "M_bound"};
    if (!(o.tol > 0.0)) {
        throw bs::InvalidInput("--eps must be > 0");
    }
    const int j = bs::select_truncation(o.tol, a, Z, o.jcap);
    const int terms = (j + 1) * (j + 1);
    const double bound = bs::bound_term(j, a, Z);
    std::cout << "alpha " << sig10(a) << "\nZ " << sig10(Z) << "\nj_eps " << j << "\nterms " << terms
              << "\nM_bound " << sig10(bound) << '\n';
    table.rows.push_back({bench::csv_number(a), bench::csv_number(Z), bench::csv_number(o.tol), std::to_string(j),
                          std::to_string(terms), bench::csv_number(bound)});
    emit_csv(o, table);
    return kExitOk;
}

int cmd_oracle(const Options& o) {
    bs::validate(o.market);
    const bs::DerivedQuantities d = bs::derive(o.market);
    const double closed = bs::call_closed_form(o.market);
    const double series = bs::call_series_diagonal(d, o.market.spot, diagonal_config(o)).price;
    const bs::ContourResult contour = bs::price_via_contour(d, o.contour);
    std::cout << "closed " << sig10(closed) << "\nseries " << sig10(series) << "\ncontour "
              << sig10(contour.price) << "\nseries_minus_closed " << sig10(series - closed)
              << "\ncontour_minus_closed " << sig10(contour.price - closed) << "\nimag_residual "
              << sig10(contour.imag_residual) << "\nstep_change " << sig10(contour.step_change) << '\n';
    bench::CsvTable table;
    table.header = {"closed", "series", "contour", "imag_residual", "step_change"};
    table.rows.push_back({bench::csv_number(closed), bench::csv_number(series), bench::csv_number(contour.price),
                          bench::csv_number(contour.imag_residual), bench::csv_number(contour.step_change)});
    emit_csv(o, table);
    return kExitOk;
}

int report_table(const Options& o, const bench::TableReport& report) {
    emit_table(o, report.table);
    const auto failures = report.failures();
    for (const auto& f : failures) {
        std::cerr << "mismatch " << f.describe() << '\n';
    }
    return failures.empty() ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(Options o) {
    o.sweep.j_list = o.sweep_j;
    const bench::SweepReport report = bench::sweep(o.sweep);
    emit_table(o, report.table);
    std::ostream& summary = o.csv_path.empty() ? std::cerr : std::cout;
    for (const auto& iv : report.intervals) {
        summary << "j_max " << iv.j_max << " max_abs_error " << sig10(iv.max_abs_error) << " interval ";
        if (iv.lo && iv.hi) {
            summary << '[' << sig10(*iv.lo) << ", " << sig10(*iv.hi) << "]\n";
        } else {
            summary << "none\n";
        }
    }
    return kExitOk;
}

int exit_code(bs::ErrorKind kind) {
    switch (kind) {
    case bs::ErrorKind::InvalidInput:
        return kExitUsage;
    case bs::ErrorKind::DegenerateVolatility:
    case bs::ErrorKind::BranchDomain:
    case bs::ErrorKind::PoleError:
    case bs::ErrorKind::PoleProximity:
        return kExitDomain;
    case bs::ErrorKind::TruncationCapExceeded:
        return kExitCap;
    case bs::ErrorKind::QuadratureUnresolved:
        return kExitCheckFailed;
    }
    return kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black-Scholes residue series pricer"};
    app.require_subcommand(1);
    Options o;

    auto* price = app.add_subcommand("price", "Price a call and put");
    add_market(price, o);
    add_truncation(price, o, true);
    add_contour(price, o);
    add_csv(price, o);
    price->add_option("--method", o.method, "closed, series, rect or contour")
        ->check(CLI::IsMember({"closed", "series", "rect", "contour"}))
        ->capture_default_str();

    auto* greeks = app.add_subcommand("greeks", "Delta, rho, vega and theta from the series");
    add_market(greeks, o);
    add_truncation(greeks, o, false);
    add_csv(greeks, o);
    greeks->add_flag("--theta-calendar", o.theta_calendar, "Report -dC/dtau (calendar-time theta)");

    auto* bound = app.add_subcommand("bound", "Truncation order for a per-term tolerance");
    add_market(bound, o);
    bound->add_option("--eps,--tol", o.tol, "Per-term tolerance")->capture_default_str();
    bound->add_option("--jcap", o.jcap, "Largest admissible line")->capture_default_str();
    add_csv(bound, o);

    auto* oracle = app.add_subcommand("oracle", "Closed form, series and contour quadrature side by side");
    add_market(oracle, o);
    add_truncation(oracle, o, false);
    add_contour(oracle, o);
    add_csv(oracle, o);

    auto* table1 = app.add_subcommand("table1", "Closed form against rectangular truncations");
    add_csv(table1, o);
    auto* table2 = app.add_subcommand("table2", "Bound decrease and truncation order");
    add_csv(table2, o);
    auto* table3 = app.add_subcommand("table3", "(j, n) term matrix");
    add_csv(table3, o);

    auto* sweep = app.add_subcommand("sweep", "Series error over a spot grid");
    sweep->add_option("--s-min", o.sweep.s_min, "First spot")->capture_default_str();
    sweep->add_option("--s-max", o.sweep.s_max, "Last spot")->capture_default_str();
    sweep->add_option("--s-step", o.sweep.s_step, "Spot step")->capture_default_str();
    sweep->add_option("--jmax", o.sweep_j, "Diagonal truncations to compare")->delimiter(',')->capture_default_str();
    sweep->add_option("--threshold", o.sweep.threshold, "Error level defining the interval")->capture_default_str();
    add_csv(sweep, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (price->parsed()) {
            return cmd_price(o);
        }
        if (greeks->parsed()) {
            return cmd_greeks(o);
        }
        if (bound->parsed()) {
            return cmd_bound(o);
        }
        if (oracle->parsed()) {
            return cmd_oracle(o);
        }
        if (table1->parsed()) {
            return report_table(o, bench::table1());
        }
        if (table2->parsed()) {
            return report_table(o, bench::table2());
        }
        if (table3->parsed()) {
            return report_table(o, bench::table3());
        }
        if (sweep->parsed()) {
            return cmd_sweep(o);
        }
    } catch (const bs::TruncationCapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (!std::isnan(e.best_price())) {
            std::cout << "call " << sig10(e.best_price()) << "\ntail_bound " << sig10(e.tail_bound()) << '\n';
        }
        return kExitCap;
    } catch (const bs::Error& e) {
        std::cerr << "error (" << bs::to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    }
    return kExitUsage;
}
