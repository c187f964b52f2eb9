#include "runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "asymptotic.hpp"
#include "bandwidth.hpp"
#include "bootstrap.hpp"
#include "parallel.hpp"
#include "spearman.hpp"

namespace cpd {

namespace {

DivisorMode divisor_from_string(const std::string& name) {
    if (name == "simulation") return DivisorMode::Simulation;
    if (name == "theory") return DivisorMode::Theory;
    throw std::invalid_argument("unknown divisor '" + name + "' (expected simulation|theory)");
}

double bandwidth_from_exponent(int n, double exponent) {
    const double b_n = std::pow(static_cast<double>(n), -exponent);
    if (!(b_n > 0.0 && b_n < 1.0)) {
        throw std::invalid_argument("bn_exponent must yield b_n in (0, 1)");
    }
    return b_n;
}

}  // namespace

TestReport run_test(const Sample& sample, const TestConfig& config) {
    const int n = sample.rows();
    const double b_n = bandwidth_from_exponent(n, config.bn_exponent);
    const LinearStatistic f = builtin_statistic(config.statistic, sample.cols());
    const unsigned threads =
        config.threads == 0 ? default_thread_count() : config.threads;

    const bool is_boot_iid = config.method == "boot-iid";
    const bool is_boot_dep = config.method == "boot-dep";
    const bool is_asymptotic = config.method == "asymptotic";
    if (!is_boot_iid && !is_boot_dep && !is_asymptotic) {
        throw std::invalid_argument("unknown method '" + config.method +
                                    "' (expected boot-iid|boot-dep|asymptotic)");
    }
    bool hac = false;
    if (is_asymptotic) {
        if (config.serial == "dep") hac = true;
        else if (config.serial != "iid") {
            throw std::invalid_argument("unknown serial mode '" + config.serial +
                                        "' (expected iid|dep)");
        }
    }

    std::optional<int> ell_used;
    if (is_boot_dep || hac) {
        int ell = config.ell;
        if (ell < 0) throw std::invalid_argument("ell must be positive or 0 for data-driven");
        if (ell == 0) {
            ell = estimate_bandwidth(sample, f, config.divisor, b_n, KernelShape::parzen())
                      .ell_hat;
        }
        ell_used = ell;
    }

    TestReport report;
    report.statistic_name = f.name;
    report.method = config.method;
    report.b_n = b_n;
    report.seed = config.seed;
    report.n = n;
    report.d = sample.cols();
    report.ell_used = ell_used;

    if (is_asymptotic) {
        const AsymptoticResult res =
            asymptotic_test(sample, f, config.divisor, b_n,
                            hac ? VarianceForm::Hac : VarianceForm::Iid,
                            ell_used.value_or(0), threads);
        report.statistic_value = res.observed.max_value;
        report.p_value = res.p_value;
        report.changepoint_index = res.observed.argmax_k;
    } else {
        BootstrapOptions options;
        options.replicates = config.replicates;
        options.kind = is_boot_iid ? MultiplierKind::Iid : MultiplierKind::Dependent;
        options.ell = ell_used.value_or(1);
        options.b_n = b_n;
        options.seed = config.seed;
        options.threads = threads;
        const BootstrapResult res = bootstrap_test(sample, f, config.divisor, options);
        report.statistic_value = res.observed.max_value;
        report.p_value = res.p_value;
        report.changepoint_index = res.observed.argmax_k;
        report.replicates = config.replicates;
    }
    return report;
}

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    int line;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const KeyValue& kv) {
    try {
        std::size_t used = 0;
        const double v = std::stod(kv.value, &used);
        if (used != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(kv.line) + ": cannot parse '" +
                                    kv.value + "' as a number for key '" + kv.key + "'");
    }
}

int parse_int(const KeyValue& kv) {
    const double v = parse_double(kv);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw std::invalid_argument("config line " + std::to_string(kv.line) + ": key '" + kv.key +
                                    "' must be an integer");
    }
    return i;
}

std::vector<GarchParams> parse_garch_params(const KeyValue& kv) {
    // "omega,beta,alpha;omega,beta,alpha;..."
    std::vector<GarchParams> out;
    std::stringstream groups(kv.value);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::stringstream fields(group);
        std::string field;
        std::vector<double> v;
        while (std::getline(fields, field, ',')) v.push_back(std::stod(trim(field)));
        if (v.size() != 3) {
            throw std::invalid_argument("config line " + std::to_string(kv.line) +
                                        ": garch_params groups need omega,beta,alpha");
        }
        out.push_back(GarchParams{v[0], v[1], v[2]});
    }
    return out;
}

void apply_key(ExperimentCell& cell, const KeyValue& kv) {
    const std::string& k = kv.key;
    if (k == "family") cell.family = kv.value;
    else if (k == "df") cell.df = parse_double(kv);
    else if (k == "d") cell.d = parse_int(kv);
    else if (k == "n") cell.n = parse_int(kv);
    else if (k == "filter") cell.filter = kv.value;
    else if (k == "gamma") cell.gamma = parse_double(kv);
    else if (k == "garch_params") cell.garch = parse_garch_params(kv);
    else if (k == "tau1") cell.dep1 = parse_double(kv);
    else if (k == "tau2") cell.dep2 = parse_double(kv);
    else if (k == "rho_type") cell.rho_type = kv.value;
    else if (k == "t") cell.t = parse_double(kv);
    else if (k == "stat") cell.stat = kv.value;
    else if (k == "method") cell.method = kv.value;
    else if (k == "alpha") cell.alpha = parse_double(kv);
    else if (k == "reps") cell.reps = parse_int(kv);
    else if (k == "replicates") cell.replicates = parse_int(kv);
    else if (k == "ell") cell.ell = kv.value == "auto" ? 0 : parse_int(kv);
    else if (k == "bn_exponent") cell.bn_exponent = parse_double(kv);
    else if (k == "divisor") cell.divisor = kv.value;
    else {
        throw std::invalid_argument("config line " + std::to_string(kv.line) +
                                    ": unknown key '" + k + "'");
    }
}

void check_cell(const ExperimentCell& cell, int line) {
    auto fail = [line](const std::string& why) {
        throw std::invalid_argument("config cell starting at line " + std::to_string(line) + ": " +
                                    why);
    };
    if (cell.n < 2) fail("n must be set and >= 2");
    if (cell.d < 2) fail("d must be >= 2");
    if (cell.filter != "ar1" && cell.filter != "garch") fail("filter must be ar1|garch");
    if (cell.rho_type != "tau" && cell.rho_type != "spearman") {
        fail("rho_type must be tau|spearman");
    }
    if (cell.dep1 != cell.dep2 && !cell.t.has_value()) {
        fail("a change (tau1 != tau2) needs a change location t");
    }
    if (cell.method != "boot-iid" && cell.method != "boot-dep" && cell.method != "asym-iid" &&
        cell.method != "asym-dep") {
        fail("method must be boot-iid|boot-dep|asym-iid|asym-dep");
    }
    if (!(cell.alpha > 0.0 && cell.alpha < 1.0)) fail("alpha must lie in (0, 1)");
    if (cell.reps < 1) fail("reps must be >= 1");
    if (cell.replicates < 1) fail("replicates must be >= 1");
    divisor_from_string(cell.divisor);
}

}  // namespace

std::vector<ExperimentCell> parse_experiment_config(std::string_view text) {
    std::vector<ExperimentCell> cells;
    std::vector<int> cell_lines;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view raw =
            nl == std::string_view::npos ? text.substr(start) : text.substr(start, nl - start);
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (!line.empty()) {
            if (line == "[cell]") {
                cells.emplace_back();
                cell_lines.push_back(line_no);
            } else {
                const std::size_t eq = line.find('=');
                if (eq == std::string::npos) {
                    throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                ": expected 'key = value' or '[cell]'");
                }
                if (cells.empty()) {
                    throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                ": key outside of a [cell] section");
                }
                KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
                apply_key(cells.back(), kv);
            }
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    if (cells.empty()) throw std::invalid_argument("config contains no [cell] sections");
    for (std::size_t c = 0; c < cells.size(); ++c) check_cell(cells[c], cell_lines[c]);
    return cells;
}

DgpSpec cell_dgp(const ExperimentCell& cell) {
    const CopulaFamily family = copula_family_from_string(cell.family);
    auto resolve = [&](double dep) {
        return cell.rho_type == "tau" ? tau_to_parameter(family, dep)
                                      : spearman_to_parameter(family, dep, cell.df);
    };
    DgpSpec spec;
    spec.n = cell.n;
    spec.d = cell.d;
    spec.filter = cell.filter == "ar1" ? FilterKind::Ar1 : FilterKind::Garch;
    spec.gamma = cell.gamma;
    spec.garch = cell.garch;
    spec.c1 = CopulaSpec{family, cell.d, resolve(cell.dep1), cell.df};
    spec.c2 = spec.c1;
    if (cell.t.has_value() && cell.dep1 != cell.dep2) {
        spec.t = cell.t;
        spec.c2.parameter = resolve(cell.dep2);
    }
    return spec;
}

std::vector<double> run_experiment(std::span<const ExperimentCell> cells, unsigned threads,
                                   std::uint64_t seed, int reps_override,
                                   const ExperimentProgress& progress) {
    if (threads == 0) threads = default_thread_count();
    std::vector<double> rates(cells.size(), 0.0);

    for (std::size_t c = 0; c < cells.size(); ++c) {
        const ExperimentCell& cell = cells[c];
        const int reps = reps_override > 0 ? reps_override : cell.reps;
        const DgpSpec dgp = cell_dgp(cell);  // parameter inversion once per cell

        TestConfig config;
        config.statistic = cell.stat;
        config.replicates = cell.replicates;
        config.ell = cell.ell;
        config.bn_exponent = cell.bn_exponent;
        config.divisor = divisor_from_string(cell.divisor);
        config.threads = 1;  // repetitions parallelize, each test runs serial
        if (cell.method == "boot-iid") config.method = "boot-iid";
        else if (cell.method == "boot-dep") config.method = "boot-dep";
        else {
            config.method = "asymptotic";
            config.serial = cell.method == "asym-dep" ? "dep" : "iid";
        }

        std::atomic<int> rejections{0};
        parallel_items(static_cast<std::size_t>(reps), threads, [&](std::size_t rep) {
            const std::uint64_t stream_id =
                (static_cast<std::uint64_t>(c) << 33) | (static_cast<std::uint64_t>(rep) << 1);
            RngStream data_rng(seed, stream_id);
            const Sample sample = generate(dgp, data_rng);
            TestConfig rep_config = config;
            rep_config.seed = mix64(seed) ^ mix64(stream_id | 1);
            const TestReport report = run_test(sample, rep_config);
            if (report.p_value <= cell.alpha) rejections.fetch_add(1);
        });
        rates[c] = 100.0 * rejections.load() / reps;
        if (progress) progress(c + 1, cells.size(), cell, rates[c]);
    }
    return rates;
}

std::string rejection_table_csv(std::span<const ExperimentCell> cells,
                                std::span<const double> reject_pct) {
    if (cells.size() != reject_pct.size()) {
        throw std::invalid_argument("rejection_table_csv: size mismatch");
    }
    auto format = [](double v) {
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "%g", v);
        return std::string(buffer);
    };
    std::string out = "family,n,tau1,tau2,t,gamma,stat,method,reject_pct\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const ExperimentCell& cell = cells[c];
        std::string family = cell.family;
        if (cell.family == "student") family += format(cell.df);
        out += family + ',' + std::to_string(cell.n) + ',' + format(cell.dep1) + ',' +
               format(cell.dep2) + ',';
        if (cell.t.has_value() && cell.dep1 != cell.dep2) out += format(*cell.t);
        out += ',';
        if (cell.filter == "ar1") out += format(cell.gamma);
        out += ',' + cell.stat + ',' + cell.method + ',';
        char rate[32];
        std::snprintf(rate, sizeof(rate), "%.1f", reject_pct[c]);
        out += rate;
        out += '\n';
    }
    return out;
}

}  // namespace cpd
