#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "polyostat/enumerate.hpp"
#include "polyostat/markov.hpp"
#include "polyostat/moments.hpp"
#include "polyostat/report.hpp"
#include "polyostat/simulate.hpp"
#include "polyostat/spectral.hpp"

namespace {

using namespace polyostat;

const std::vector<std::string> kFamilyNames{"dcc", "cc", "dc",
                                            "st",  "es", "wa"};

FamilyId family_of(const std::string& name) {
    return *parse_family(name);  // validated by CLI::IsMember
}

struct OutTarget {
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + path);
        os = &file;
    }
};

int run_constants(const std::string& fam, const std::string& format,
                  const std::string& out_path) {
    OutTarget out;
    out.open(out_path);
    FamilyId id = family_of(fam);
    PublishedRow r = published_constants(id);
    if (format == "csv") {
        *out.os << "family,rho,mu1,sigma1_sq,mu2,sigma2_sq,c2,c2_total,mu3,"
                   "sigma3_sq,sigma_q_sq,c_xq,rho_xq,mu4,sigma4_sq,"
                   "gf_supported\n"
                << fam << ',' << fmt12(r.rho) << ',' << fmt12(r.mu1) << ','
                << fmt12(r.sigma1_sq) << ',' << fmt12(r.mu2) << ','
                << fmt12(r.sigma2_sq) << ',' << fmt12(r.c2) << ','
                << fmt12(r.c2_total) << ',' << fmt12(r.mu3) << ','
                << fmt12(r.sigma3_sq) << ',' << fmt12(r.sigma_q_sq) << ','
                << fmt12(r.c_xq) << ',' << fmt12(r.rho_xq) << ','
                << fmt12(r.mu4) << ',' << fmt12(r.sigma4_sq) << ','
                << (r.gf_supported ? "true" : "false") << '\n';
        return 0;
    }
    JsonWriter w(*out.os);
    w.begin();
    w.field("family", fam);
    w.field("rho", r.rho);
    w.field("mu1", r.mu1);
    w.field("sigma1_sq", r.sigma1_sq);
    w.field("mu2", r.mu2);
    w.field("sigma2_sq", r.sigma2_sq);
    w.field("c2", r.c2);
    w.field("c2_total", r.c2_total);
    w.field("mu3", r.mu3);
    w.field("sigma3_sq", r.sigma3_sq);
    w.field("sigma_q_sq", r.sigma_q_sq);
    w.field("c_xq", r.c_xq);
    w.field("rho_xq", r.rho_xq);
    w.field("mu4", r.mu4);
    w.field("sigma4_sq", r.sigma4_sq);
    w.field("gf_supported", r.gf_supported);
    w.end();
    return 0;
}

int run_enumerate(const std::string& fam, int n_max, bool histogram,
                  bool widths, const std::string& format,
                  const std::string& out_path) {
    OutTarget out;
    out.open(out_path);
    FamilyId id = family_of(fam);
    if (histogram) {
        PerimeterHistogram h = exact_perimeter_histogram(id, n_max);
        if (format == "csv") {
            write_histogram_csv(*out.os, h);
            return 0;
        }
        std::ostringstream hist;
        hist << '{';
        bool first = true;
        for (const auto& [p, c] : h.counts) {
            if (!first) hist << ", ";
            first = false;
            hist << '"' << p << "\": " << c;
        }
        hist << '}';
        JsonWriter w(*out.os);
        w.begin();
        w.field("family", fam);
        w.field("n", (long long)h.n);
        w.field("total", h.total().convert_to<double>());
        w.field("mean_perimeter", h.mean());
        w.field_raw("histogram", hist.str());
        w.end();
        return 0;
    }
    ExactCountTable table = count_table(id, n_max);
    if (widths) {
        write_count_csv(*out.os, table);
        return 0;
    }
    if (format == "csv") {
        *out.os << "n,total\n";
        for (int n = 1; n <= n_max; ++n)
            *out.os << n << ',' << table.total(n) << '\n';
        return 0;
    }
    std::ostringstream totals;
    totals << '[';
    for (int n = 1; n <= n_max; ++n)
        totals << (n > 1 ? ", " : "") << table.total(n);
    totals << ']';
    JsonWriter w(*out.os);
    w.begin();
    w.field("family", fam);
    w.field("n_max", (long long)n_max);
    if (n_max >= 20) w.field("growth_estimate", growth_estimate(table));
    w.field_raw("totals", totals.str());
    w.end();
    return 0;
}

int run_llt(const std::string& fam, int n_max, const std::string& format,
            const std::string& out_path) {
    OutTarget out;
    out.open(out_path);
    FamilyId id = family_of(fam);
    ExactCountTable table = count_table(id, n_max);
    if (format == "csv") {
        *out.os << "n,residual\n";
        for (int n = 4; n <= n_max; ++n)
            *out.os << n << ',' << fmt12(llt_residual(table, n)) << '\n';
        return 0;
    }
    JsonWriter w(*out.os);
    w.begin();
    w.field("family", fam);
    w.field("n", (long long)n_max);
    w.field("residual", llt_residual(table, n_max));
    w.end();
    return 0;
}

int run_simulate(const std::string& fam, long long m, int trials,
                 std::uint64_t seed, const std::string& format,
                 const std::string& out_path) {
    OutTarget out;
    out.open(out_path);
    FamilyId id = family_of(fam);
    if (trials == 0) {
        if (format == "json")
            throw CLI::ValidationError(
                "--format",
                "trajectory output is csv; pass --trials for the json report");
        *out.os << "# generator=" << kGeneratorId << " family=" << fam
                << " m=" << m << " seed=" << seed << '\n'
                << "step,x,X,T,Q\n";
        TrajectoryStream stream(id, seed);
        for (long long d = 0; d < m; ++d) {
            auto r = stream.next();
            *out.os << r.step << ',' << r.x << ',' << r.X << ',' << r.T << ','
                    << r.Q << '\n';
        }
        return 0;
    }
    SimReport r = gaussian_check(id, (int)m, trials, seed);
    if (format == "csv") {
        *out.os << "# generator=" << kGeneratorId << '\n'
                << "family,m,trials,seed,z_mu2,z_var2,z_mu4s,z_var4s,ks,"
                   "variance_skipped\n"
                << fam << ',' << r.m << ',' << r.trials << ',' << r.seed << ','
                << fmt12(r.z_mu2) << ',' << fmt12(r.z_var2) << ','
                << fmt12(r.z_mu4s) << ',' << fmt12(r.z_var4s) << ','
                << fmt12(r.ks) << ','
                << (r.variance_skipped ? "true" : "false") << '\n';
        return 0;
    }
    JsonWriter w(*out.os);
    w.begin();
    w.field("family", fam);
    w.field("m", (long long)r.m);
    w.field("trials", (long long)r.trials);
    w.field("seed", r.seed);
    w.field("z_mu2", r.z_mu2);
    w.field("z_var2", r.z_var2);
    w.field("z_mu4s", r.z_mu4s);
    w.field("z_var4s", r.z_var4s);
    w.field("ks", r.ks);
    w.field("variance_skipped", r.variance_skipped);
    w.field("generator", kGeneratorId);
    w.end();
    return 0;
}

int run_gf_check(const std::string& fam, const std::string& out_path) {
    OutTarget out;
    out.open(out_path);
    FamilyId id = family_of(fam);
    auto gf = gf_perimeter_constants(id);
    if (!gf) {
        std::cerr << "gf-check: no closed generating-function route for '"
                  << fam << "' (supported: dcc cc st wa)\n";
        return 1;
    }
    PublishedRow r = published_constants(id);
    double mu4_dev = std::abs(gf->mu4 - r.mu4);
    double sig4_dev = std::abs(gf->sigma4_sq - r.sigma4_sq);
    bool within = mu4_dev < 1e-5 && sig4_dev < 1e-5;
    JsonWriter w(*out.os);
    w.begin();
    w.field("family", fam);
    w.field("rho_gf", gf->rho);
    w.field("mu4_gf", gf->mu4);
    w.field("sigma4_sq_gf", gf->sigma4_sq);
    w.field("mu4_moments", r.mu4);
    w.field("sigma4_sq_moments", r.sigma4_sq);
    w.field("mu4_dev", mu4_dev);
    w.field("sigma4_sq_dev", sig4_dev);
    w.field("within_tolerance", within);
    w.end();
    return within ? 0 : 1;
}

int run_chain_check(const std::string& fam, int k_max, int j_max,
                    const std::string& format, const std::string& out_path) {
    OutTarget out;
    out.open(out_path);
    FamilyId id = family_of(fam);
    KernelModel model = deep_model(id);
    bool custom = k_max > 0 || j_max > 0;
    if (k_max > 0) model.K_max = k_max;
    if (j_max > 0) model.J_max = j_max;
    if (model.L_max < model.K_max) model.L_max = model.K_max;

    if (format == "csv") {
        // transition dump k,j,p for inspection; zero rows omitted
        std::vector<std::vector<double>> Pi;
        if (custom) {
            auto spec = build_spectral_core<double>(id, model);
            auto ch = build_chain_core(id, spec);
            Pi = ch.Pi;
        } else {
            Pi = transition_matrix(id);
        }
        *out.os << "k,j,p\n";
        for (std::size_t k = 1; k < Pi.size(); ++k)
            for (std::size_t j = 1; j < Pi[k].size(); ++j)
                if (Pi[k][j] != 0.0)
                    *out.os << k << ',' << j << ',' << fmt12(Pi[k][j]) << '\n';
        return 0;
    }

    ChainChecks c = custom ? chain_checks(id, model) : chain_checks(id);
    JsonWriter w(*out.os);
    w.begin();
    w.field("family", fam);
    w.field("k_max", (long long)model.K_max);
    w.field("j_max", (long long)model.J_max);
    w.field("row_residual", c.row_residual);
    w.field("stationarity_residual", c.stationarity_residual);
    w.field("reversibility_residual", c.reversibility_residual);
    w.field("tv_pow10", c.tv_pow10);
    w.field("c2_identity_residual", c.c2_identity_residual);
    w.field("pi_ratio_residual", c.pi_ratio_residual);
    w.field("pi2_ratio_residual", c.pi2_ratio_residual);
    w.field("pi_start_residual", c.pi_start_residual);
    w.field("pi2_norm_dev", c.pi2_norm_dev);
    w.field("cc_linear_residual", c.cc_linear_residual);
    w.field("pi_mean", c.pi_mean);
    w.field("stationary_mean", c.stationary_mean);
    w.field("stationary_var", c.stationary_var);
    w.end();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "polyostat: asymptotic perimeter statistics of column-convex "
        "polyomino families (dcc cc dc st es wa)"};
    app.footer(
        "Environment:\n"
        "  POLYOSTAT_PRECISION   working precision for the analytic pipeline:\n"
        "                        'extended' (default, 113-bit) or 'double'");
    app.require_subcommand(1);
    auto family_check = CLI::IsMember(kFamilyNames);

    std::string fam, format = "json", out_path;
    int n_max = 10;
    long long m = 400;
    int trials = 0, k_max = 0, j_max = 0;
    std::uint64_t seed = 1;
    bool histogram = false, widths = false;
    int rc = 0;

    auto* constants =
        app.add_subcommand("constants", "All perimeter constants of a family");
    constants->add_option("family", fam)->required()->check(family_check);
    constants->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    constants->add_option("--out", out_path, "write to file instead of stdout");
    constants->callback([&] { rc = run_constants(fam, format, out_path); });

    auto* enumerate = app.add_subcommand(
        "enumerate", "Exact transfer-matrix counts by area (n <= 60)");
    enumerate->add_option("family", fam)->required()->check(family_check);
    enumerate->add_option("--n-max", n_max, "largest area (default 10)");
    auto* hist_flag = enumerate->add_flag(
        "--histogram", histogram, "exact perimeter histogram at n-max (n <= 14)");
    auto* width_flag = enumerate->add_flag(
        "--widths", widths, "full n,m,j,count table as csv");
    hist_flag->excludes(width_flag);
    enumerate->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    enumerate->add_option("--out", out_path, "write to file instead of stdout");
    enumerate->callback(
        [&] { rc = run_enumerate(fam, n_max, histogram, widths, format, out_path); });

    auto* llt = app.add_subcommand(
        "llt", "Local-limit-theorem residual of the exact width counts");
    llt->add_option("family", fam)->required()->check(family_check);
    llt->add_option("--n-max", n_max, "area of the comparison (default 10)");
    llt->add_option("--format", format, "json (residual at n-max) or csv (per n)")
        ->check(CLI::IsMember({"json", "csv"}));
    llt->add_option("--out", out_path, "write to file instead of stdout");
    llt->callback([&] { rc = run_llt(fam, n_max, format, out_path); });

    auto* simulate = app.add_subcommand(
        "simulate",
        "Seeded column-chain Monte Carlo: trajectory csv, or the "
        "gaussian_check report with --trials");
    simulate->add_option("family", fam)->required()->check(family_check);
    simulate->add_option("--m", m, "chain length (default 400)");
    simulate->add_option("--trials", trials,
                         "number of trials for the report (0 = trajectory)");
    simulate->add_option("--seed", seed, "generator seed (default 1)");
    simulate->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--out", out_path, "write to file instead of stdout");
    simulate->callback([&] {
        if (simulate->count("--format") == 0 && trials == 0) format = "csv";
        rc = run_simulate(fam, m, trials, seed, format, out_path);
    });

    auto* gf = app.add_subcommand(
        "gf-check",
        "Compare mu4/sigma4_sq against the known generating-function route");
    gf->add_option("family", fam)->required()->check(family_check);
    gf->add_option("--out", out_path, "write to file instead of stdout");
    gf->callback([&] { rc = run_gf_check(fam, out_path); });

    auto* chain = app.add_subcommand(
        "chain-check", "Markov-chain residual report, or transition dump (csv)");
    chain->add_option("family", fam)->required()->check(family_check);
    chain->add_option("--k-max", k_max, "column-size cap override");
    chain->add_option("--j-max", j_max, "series-depth override");
    chain->add_option("--format", format, "json (report) or csv (k,j,p dump)")
        ->check(CLI::IsMember({"json", "csv"}));
    chain->add_option("--out", out_path, "write to file instead of stdout");
    chain->callback(
        [&] { rc = run_chain_check(fam, k_max, j_max, format, out_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "polyostat: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
