#include "cpdetect/cpdetect.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "csv.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "sample.hpp"

struct cpd_sample {
    cpd::Sample value;
};

struct cpd_report {
    cpd::TestReport value;
};

namespace {

thread_local std::string g_last_error;

cpd_status fail(cpd_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Maps C++ failures onto status codes. Degenerate-variance conditions are
// reported as runtime_error by the core.
template <typename Fn>
cpd_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CPD_OK;
    } catch (const cpd::CsvError& e) {
        return fail(CPD_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CPD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(CPD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(CPD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.find("degenerate") != std::string::npos) {
            return fail(CPD_ERR_DEGENERATE, what);
        }
        if (what.find("cannot open") != std::string::npos) {
            return fail(CPD_ERR_IO, what);
        }
        return fail(CPD_ERR_INTERNAL, what);
    } catch (const std::bad_alloc&) {
        return fail(CPD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CPD_ERR_INTERNAL, e.what());
    }
}

cpd_status require(bool condition, const char* message) {
    return condition ? CPD_OK : fail(CPD_ERR_INVALID_ARGUMENT, message);
}

cpd::HeaderMode header_mode(int has_header) {
    if (has_header > 0) return cpd::HeaderMode::Yes;
    if (has_header == 0) return cpd::HeaderMode::No;
    return cpd::HeaderMode::Auto;
}

}  // namespace

extern "C" {

const char* cpd_version(void) { return "0.1.0"; }

const char* cpd_last_error(void) { return g_last_error.c_str(); }

cpd_status cpd_sample_create(const double* data, int64_t n, int64_t d, cpd_sample** out) {
    if (require(data != nullptr && out != nullptr, "null pointer argument") != CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        if (n < 2 || d < 2 || n > (int64_t{1} << 30) || d > 12) {
            throw std::invalid_argument("sample dimensions out of range");
        }
        std::vector<double> values(data, data + static_cast<std::size_t>(n * d));
        *out = new cpd_sample{cpd::Sample(std::move(values), static_cast<int>(n),
                                          static_cast<int>(d))};
    });
}

cpd_status cpd_sample_read_csv(const char* path, int has_header, cpd_sample** out) {
    if (require(path != nullptr && out != nullptr, "null pointer argument") != CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] { *out = new cpd_sample{cpd::read_csv(path, header_mode(has_header))}; });
}

cpd_status cpd_sample_parse_csv(const char* text, int has_header, cpd_sample** out) {
    if (require(text != nullptr && out != nullptr, "null pointer argument") != CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded(
        [&] { *out = new cpd_sample{cpd::read_csv_text(text, header_mode(has_header))}; });
}

int64_t cpd_sample_rows(const cpd_sample* sample) { return sample ? sample->value.rows() : 0; }

int64_t cpd_sample_cols(const cpd_sample* sample) { return sample ? sample->value.cols() : 0; }

void cpd_sample_free(cpd_sample* sample) { delete sample; }

cpd_status cpd_test_options_init(cpd_test_options* options) {
    if (require(options != nullptr, "null pointer argument") != CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    options->statistic = "rho3";
    options->method = "boot-dep";
    options->serial = "dep";
    options->replicates = 1000;
    options->ell = 0;
    options->bn_exponent = 0.51;
    options->divisor = "simulation";
    options->seed = 1;
    options->threads = 0;
    return CPD_OK;
}

cpd_status cpd_test_run(const cpd_sample* sample, const cpd_test_options* options,
                        cpd_report** out) {
    if (require(sample != nullptr && options != nullptr && out != nullptr,
                "null pointer argument") != CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        cpd::TestConfig config;
        if (options->statistic) config.statistic = options->statistic;
        if (options->method) config.method = options->method;
        if (options->serial) config.serial = options->serial;
        config.replicates = options->replicates;
        config.ell = options->ell;
        config.bn_exponent = options->bn_exponent;
        if (options->divisor) {
            const std::string divisor = options->divisor;
            if (divisor == "simulation") config.divisor = cpd::DivisorMode::Simulation;
            else if (divisor == "theory") config.divisor = cpd::DivisorMode::Theory;
            else throw std::invalid_argument("unknown divisor '" + divisor + "'");
        }
        config.seed = options->seed;
        config.threads = options->threads < 0 ? 0u : static_cast<unsigned>(options->threads);
        *out = new cpd_report{cpd::run_test(sample->value, config)};
    });
}

double cpd_report_statistic(const cpd_report* report) {
    return report ? report->value.statistic_value : 0.0;
}

double cpd_report_pvalue(const cpd_report* report) { return report ? report->value.p_value : 1.0; }

int64_t cpd_report_changepoint(const cpd_report* report) {
    return report ? report->value.changepoint_index : 0;
}

int64_t cpd_report_ell(const cpd_report* report) {
    return report && report->value.ell_used.has_value() ? *report->value.ell_used : 0;
}

cpd_status cpd_report_render(const cpd_report* report, const char* format, char** out) {
    if (require(report != nullptr && format != nullptr && out != nullptr,
                "null pointer argument") != CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        const std::string text =
            cpd::render_report(report->value, cpd::report_format_from_string(format));
        *out = new char[text.size() + 1];
        std::memcpy(*out, text.c_str(), text.size() + 1);
    });
}

void cpd_report_free(cpd_report* report) { delete report; }

void cpd_string_free(char* text) { delete[] text; }

cpd_status cpd_experiment_run(const char* config_text, int32_t reps_override, int32_t threads,
                              uint64_t seed, int verbose, char** csv_out) {
    if (require(config_text != nullptr && csv_out != nullptr, "null pointer argument") != CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    *csv_out = nullptr;
    return guarded([&] {
        const auto cells = cpd::parse_experiment_config(config_text);
        cpd::ExperimentProgress progress;
        if (verbose) {
            progress = [](std::size_t done, std::size_t total, const cpd::ExperimentCell& cell,
                          double rate) {
                std::cerr << "[" << done << "/" << total << "] " << cell.family << " n=" << cell.n
                          << " " << cell.stat << " " << cell.method << " -> " << rate << "%\n";
            };
        }
        const auto rates =
            cpd::run_experiment(cells, threads <= 0 ? 0u : static_cast<unsigned>(threads), seed,
                                reps_override, progress);
        const std::string csv = cpd::rejection_table_csv(cells, rates);
        *csv_out = new char[csv.size() + 1];
        std::memcpy(*csv_out, csv.c_str(), csv.size() + 1);
    });
}

cpd_status cpd_experiment_run_file(const char* config_path, int32_t reps_override,
                                   int32_t threads, uint64_t seed, int verbose,
                                   const char* out_path) {
    if (require(config_path != nullptr && out_path != nullptr, "null pointer argument") !=
        CPD_OK) {
        return CPD_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw std::runtime_error(std::string("cannot open '") + config_path + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        const std::string config = buffer.str();

        char* csv = nullptr;
        const cpd_status status =
            cpd_experiment_run(config.c_str(), reps_override, threads, seed, verbose, &csv);
        if (status != CPD_OK) throw std::runtime_error(g_last_error);

        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            cpd_string_free(csv);
            throw std::runtime_error(std::string("cannot open '") + out_path + "' for writing");
        }
        out << csv;
        cpd_string_free(csv);
    });
}

}  // extern "C"
