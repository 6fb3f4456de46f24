#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mixrisk/error.hpp"
#include "mixrisk/solver.hpp"

namespace mixrisk {

// Human and machine rendering of a precautionary report: an aligned text
// table, and a CSV with one row per solved situation and indicator.

namespace fmtdetail {

// Scientific notation with 12 significant digits; stable across runs.
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

inline std::string sign_tag(double v, double tol) {
    if (v > tol) return "+";
    if (v < -tol) return "-";
    return "0";
}

}  // namespace fmtdetail

inline std::string render_table(const PrecautionaryReport& report) {
    using fmtdetail::pad;
    using fmtdetail::sci;
    std::string out;
    out += std::string("model: ") + to_string(report.model) + "\n";
    out += "income mean " + sci(report.income_mean) + "  variance " +
           sci(report.income_variance) + "\n";
    out += "background mean " + sci(report.background_mean) + "  variance " +
           sci(report.background_variance) + "\n\n";

    out += pad("situation", 18) + pad("s_opt", 22) + pad("foc_residual", 22) + "\n";
    for (const auto& s : report.solutions) {
        out += pad(to_string(s.situation), 18) + pad(sci(s.solution.s_opt), 22) +
               pad(sci(s.solution.foc_residual), 22) + "\n";
    }
    out += "\n";
    out += pad("indicator", 16) + pad("value", 24) + pad("predicate", 24) +
           pad("taylor_gap", 22) + pad("agreement", 10) + "\n";
    for (const auto& ind : report.indicators) {
        std::string value_cell = ind.is_zero ? "0 (tol)" : sci(ind.value);
        std::string predicate_cell =
            sci(ind.predicate) + " (" +
            fmtdetail::sign_tag(ind.predicate, 0.0) + ")";
        std::string agreement_cell = "-";
        if (ind.sign_agreement.has_value()) {
            agreement_cell = *ind.sign_agreement ? "ok" : "MISMATCH";
        }
        out += pad(to_string(ind.kind), 16) + pad(value_cell, 24) +
               pad(predicate_cell, 24) + pad(sci(ind.taylor_gap), 22) +
               pad(agreement_cell, 10) + "\n";
    }
    return out;
}

inline std::string csv_header() {
    return "model,situation,s_opt,indicator_kind,indicator_value,predicate_value,"
           "taylor_gap,agreement";
}

// One row per (situation, indicator) pair; UTF-8, LF line endings.
inline std::string render_csv(const PrecautionaryReport& report) {
    using fmtdetail::sci;
    std::string out = csv_header() + "\n";
    for (const auto& s : report.solutions) {
        for (const auto& ind : report.indicators) {
            std::string agreement = "na";
            if (ind.sign_agreement.has_value()) {
                agreement = *ind.sign_agreement ? "yes" : "no";
            }
            out += std::string(to_string(report.model)) + "," +
                   to_string(s.situation) + "," + sci(s.solution.s_opt) + "," +
                   to_string(ind.kind) + "," + sci(ind.value) + "," +
                   sci(ind.predicate) + "," + sci(ind.taylor_gap) + "," + agreement +
                   "\n";
        }
    }
    return out;
}

// Atomic write: temp file in the target directory, then rename.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCategory::Config, "cannot open '" + tmp.string() +
                                                         "' for writing");
        out << contents;
        out.flush();
        if (!out) throw Error(ErrorCategory::Config, "write failed for '" +
                                                         tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        throw Error(ErrorCategory::Config,
                    "cannot rename '" + tmp.string() + "' to '" + target.string() +
                        "': " + ec.message());
    }
}

inline void emit_csv(const PrecautionaryReport& report, const std::string& path) {
    write_file_atomic(path, render_csv(report));
}

}  // namespace mixrisk
