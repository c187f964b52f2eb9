#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cpd {

/// Machine-readable outcome of one change-point test.
struct TestReport {
    std::string statistic_name;  // rho1 | rho2 | rho3
    double statistic_value = 0.0;
    double p_value = 1.0;
    std::string method;  // boot-iid | boot-dep | asymptotic
    int changepoint_index = 1;  // argmax split k, 1..n-1
    std::optional<int> ell_used;
    double b_n = 0.0;
    std::optional<int> replicates;
    std::uint64_t seed = 0;
    int n = 0;
    int d = 2;

    bool operator==(const TestReport&) const = default;
};

enum class ReportFormat { Json, Text };

ReportFormat report_format_from_string(const std::string& name);

std::string render_report(const TestReport& report, ReportFormat format);

TestReport parse_report_json(const std::string& text);

}  // namespace cpd
