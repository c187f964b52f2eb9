// Command-line front end. Talks to the library exclusively through the
// C API in cpdetect/cpdetect.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "cpdetect/cpdetect.h"

namespace {

int fail_with_last_error(const char* action) {
    std::fprintf(stderr, "cpdetect: %s failed: %s\n", action, cpd_last_error());
    return 1;
}

int parse_header_flag(const std::string& header) {
    if (header == "auto") return -1;
    if (header == "yes") return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonparametric change-point tests for the cross-sectional dependence of "
                 "multivariate time series"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cpd_version()));

    // ---- test ----
    std::string input;
    std::string stat = "rho3";
    std::string method = "boot-dep";
    std::string serial = "dep";
    std::string ell = "auto";
    std::string divisor = "simulation";
    std::string format = "json";
    std::string header = "auto";
    int replicates = 1000;
    double bn_exponent = 0.51;
    std::uint64_t seed = 1;
    int threads = 0;

    CLI::App* test = app.add_subcommand("test", "Test a CSV dataset for a change in distribution");
    test->add_option("--input", input, "CSV file with one column per component")->required();
    test->add_option("--stat", stat, "Statistic: rho1|rho2|rho3")
        ->check(CLI::IsMember({"rho1", "rho2", "rho3"}))
        ->capture_default_str();
    test->add_option("--method", method, "p-value method: boot-iid|boot-dep|asymptotic")
        ->check(CLI::IsMember({"boot-iid", "boot-dep", "asymptotic"}))
        ->capture_default_str();
    test->add_option("--serial", serial,
                     "Serial dependence handling for the asymptotic method: iid|dep")
        ->check(CLI::IsMember({"iid", "dep"}))
        ->capture_default_str();
    test->add_option("--replicates", replicates, "Bootstrap replicates M")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    test->add_option("--ell", ell, "Dependence window: auto or a positive integer")
        ->capture_default_str();
    test->add_option("--bn-exponent", bn_exponent, "Smoothing bandwidth b_n = n^(-exponent)")
        ->capture_default_str();
    test->add_option("--divisor", divisor, "Rank divisor: simulation (m+1) | theory (m)")
        ->check(CLI::IsMember({"simulation", "theory"}))
        ->capture_default_str();
    test->add_option("--seed", seed, "RNG seed")->capture_default_str();
    test->add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    test->add_option("--format", format, "Report format: json|text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    test->add_option("--header", header, "First CSV row is a header: auto|yes|no")
        ->check(CLI::IsMember({"auto", "yes", "no"}))
        ->capture_default_str();

    // ---- simulate ----
    std::string config_path;
    std::string out_path = "-";
    int reps = 0;
    std::uint64_t sim_seed = 1;
    int sim_threads = 0;

    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a Monte Carlo grid and report rejection rates");
    simulate->add_option("--config", config_path, "Grid configuration file")->required();
    simulate->add_option("--reps", reps, "Override the repetition count of every cell")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--threads", sim_threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", out_path, "Output CSV path ('-' = stdout)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (test->parsed()) {
        int ell_value = 0;
        if (ell != "auto") {
            try {
                std::size_t used = 0;
                ell_value = std::stoi(ell, &used);
                if (used != ell.size() || ell_value < 1) throw std::invalid_argument(ell);
            } catch (const std::exception&) {
                std::fprintf(stderr, "cpdetect: --ell expects 'auto' or a positive integer\n");
                return 2;
            }
        }

        cpd_sample* sample = nullptr;
        if (cpd_sample_read_csv(input.c_str(), parse_header_flag(header), &sample) != CPD_OK) {
            return fail_with_last_error("reading input");
        }

        cpd_test_options options;
        cpd_test_options_init(&options);
        options.statistic = stat.c_str();
        options.method = method.c_str();
        options.serial = serial.c_str();
        options.replicates = replicates;
        options.ell = ell_value;
        options.bn_exponent = bn_exponent;
        options.divisor = divisor.c_str();
        options.seed = seed;
        options.threads = threads;

        cpd_report* report = nullptr;
        if (cpd_test_run(sample, &options, &report) != CPD_OK) {
            cpd_sample_free(sample);
            return fail_with_last_error("running test");
        }

        char* rendered = nullptr;
        if (cpd_report_render(report, format.c_str(), &rendered) != CPD_OK) {
            cpd_report_free(report);
            cpd_sample_free(sample);
            return fail_with_last_error("rendering report");
        }
        std::fputs(rendered, stdout);
        cpd_string_free(rendered);
        cpd_report_free(report);
        cpd_sample_free(sample);
        return 0;
    }

    // simulate
    if (out_path == "-") {
        std::FILE* f = std::fopen(config_path.c_str(), "rb");
        if (!f) {
            std::fprintf(stderr, "cpdetect: cannot open '%s'\n", config_path.c_str());
            return 1;
        }
        std::string config;
        char buffer[4096];
        std::size_t got;
        while ((got = std::fread(buffer, 1, sizeof(buffer), f)) > 0) config.append(buffer, got);
        std::fclose(f);

        char* csv = nullptr;
        if (cpd_experiment_run(config.c_str(), reps, sim_threads, sim_seed, 1, &csv) != CPD_OK) {
            return fail_with_last_error("running experiment");
        }
        std::fputs(csv, stdout);
        cpd_string_free(csv);
        return 0;
    }
    if (cpd_experiment_run_file(config_path.c_str(), reps, sim_threads, sim_seed, 1,
                                out_path.c_str()) != CPD_OK) {
        return fail_with_last_error("running experiment");
    }
    return 0;
}
