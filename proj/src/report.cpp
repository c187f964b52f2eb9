#include "report.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cpd {

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "text") return ReportFormat::Text;
    throw std::invalid_argument("unknown report format '" + name + "' (expected json|text)");
}

std::string render_report(const TestReport& r, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::json j{
            {"statistic", r.statistic_name},
            {"statistic_value", r.statistic_value},
            {"p_value", r.p_value},
            {"method", r.method},
            {"changepoint_index", r.changepoint_index},
            {"b_n", r.b_n},
            {"seed", r.seed},
            {"n", r.n},
            {"d", r.d},
        };
        j["ell_used"] = r.ell_used.has_value() ? nlohmann::json(*r.ell_used) : nlohmann::json();
        j["replicates"] =
            r.replicates.has_value() ? nlohmann::json(*r.replicates) : nlohmann::json();
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out.precision(17);
    out << "statistic        " << r.statistic_name << "\n";
    out << "value            " << r.statistic_value << "\n";
    out << "p-value          " << r.p_value << "\n";
    out << "changepoint      " << r.changepoint_index << "\n";
    out << "method           " << r.method << "\n";
    if (r.ell_used.has_value()) out << "ell              " << *r.ell_used << "\n";
    out << "b_n              " << r.b_n << "\n";
    if (r.replicates.has_value()) out << "replicates       " << *r.replicates << "\n";
    out << "seed             " << r.seed << "\n";
    out << "n                " << r.n << "\n";
    out << "d                " << r.d << "\n";
    return out.str();
}

TestReport parse_report_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    TestReport r;
    r.statistic_name = j.at("statistic").get<std::string>();
    r.statistic_value = j.at("statistic_value").get<double>();
    r.p_value = j.at("p_value").get<double>();
    r.method = j.at("method").get<std::string>();
    r.changepoint_index = j.at("changepoint_index").get<int>();
    r.b_n = j.at("b_n").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<int>();
    r.d = j.at("d").get<int>();
    if (!j.at("ell_used").is_null()) r.ell_used = j.at("ell_used").get<int>();
    if (!j.at("replicates").is_null()) r.replicates = j.at("replicates").get<int>();
    return r;
}

}  // namespace cpd
