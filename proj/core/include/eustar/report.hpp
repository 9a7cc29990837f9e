#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eustar/dataset.hpp"
#include "eustar/mptest.hpp"

namespace eustar {

/// One line of the per-subject report. Missing values (unsupported
/// configuration or failed subject) print as "NA".
struct ReportRow {
    std::string subject_id;
    int K = 0;
    std::optional<double> e_star_oeu;
    std::optional<double> e_star_seu;
    std::optional<double> ccei;
    std::optional<int> fosd_count;
    std::optional<double> fosd_fraction;
    std::optional<double> dsd_rho;
    std::optional<double> e_bound;
    std::array<std::optional<bool>, 4> almost_diag;  // radii 0.05, 0.2, 0.5, 1.0

    // Robustness columns (cmd_robust).
    std::optional<double> e_drop1, e_drop2, e_bar;
    std::string dropped1, dropped2;

    // Test columns (cmd_mptest).
    std::optional<double> c_alpha, statistic;
    std::optional<bool> reject;

    std::string error;  // nonempty when the subject failed entirely
};

struct AnalyzeOptions {
    bool with_seu = true;
    bool with_robustness = false;
    bool with_test = false;
    MPTestParams test_params;
    double tau = 0.0;
    int threads = 0;  // 0 = hardware concurrency
};

ReportRow analyze_subject(const Dataset& d, const AnalyzeOptions& opts);

/// Analyzes subjects on a bounded worker pool. A failing subject yields a
/// row with its error message; the batch continues.
std::vector<ReportRow> analyze_subjects(const std::vector<Dataset>& datasets,
                                        const AnalyzeOptions& opts);

std::string report_csv(const std::vector<ReportRow>& rows, const AnalyzeOptions& opts);
std::string report_json(const std::vector<ReportRow>& rows, const AnalyzeOptions& opts);

struct Summary {
    int subjects = 0;
    int failed = 0;
    std::optional<double> mean_e_oeu, median_e_oeu, mean_ccei, median_ccei;
};

Summary summarize(const std::vector<ReportRow>& rows);
std::string summary_text(const Summary& s);

}  // namespace eustar
