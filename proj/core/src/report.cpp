#include "eustar/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "eustar/ccei.hpp"
#include "eustar/metrics.hpp"
#include "eustar/parallel.hpp"
#include "eustar/robustness.hpp"
#include "eustar/solver.hpp"

namespace eustar {

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

std::string fmt(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

std::string fmt(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("NA");
}

std::string fmt(const std::optional<bool>& v) {
    if (!v) return "NA";
    return *v ? "1" : "0";
}

std::string join_indices(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(v[i]);
    }
    return out;
}

nlohmann::json opt_json(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

std::optional<double> mean_of(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::optional<double> median_of(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ReportRow analyze_subject(const Dataset& d, const AnalyzeOptions& opts) {
    ReportRow row;
    row.subject_id = d.subject_id();
    row.K = d.num_observations();

    row.e_star_oeu = round6(min_e_oeu(d, opts.tau).e_star);
    if (opts.with_seu) row.e_star_seu = round6(min_e_seu(d, opts.tau).e_star);
    row.ccei = round6(ccei(d));
    row.e_bound = round6(e_upper_bound(d));

    try {
        const auto [count, fraction] = fosd_violations(d);
        row.fosd_count = count;
        row.fosd_fraction = round6(fraction);
    } catch (const ArgumentError&) {
        // not a 2-state uniform-belief subject
    }
    try {
        if (auto rho = dsd_correlation(d)) row.dsd_rho = round6(*rho);
    } catch (const ArgumentError&) {
    }
    if (d.states() == 2) {
        for (size_t i = 0; i < 4; ++i) {
            row.almost_diag[i] = almost_diagonal(d, kDiagonalRadii[i]);
        }
    }

    if (opts.with_robustness) {
        const RobustnessRow r = robustness_row(d, opts.tau, opts.threads);
        row.e_drop1 = round6(r.e_drop1);
        row.e_drop2 = round6(r.e_drop2);
        row.e_bar = round6(r.e_bar);
        row.dropped1 = join_indices(r.dropped1);
        row.dropped2 = join_indices(r.dropped2);
    }
    if (opts.with_test) {
        const MPTestResult t = mp_test(d, opts.test_params, opts.tau, opts.threads);
        row.c_alpha = t.c_alpha;
        row.statistic = t.statistic;
        row.reject = t.reject;
    }
    return row;
}

std::vector<ReportRow> analyze_subjects(const std::vector<Dataset>& datasets,
                                        const AnalyzeOptions& opts) {
    std::vector<ReportRow> rows(datasets.size());
    parallel_for(static_cast<int>(datasets.size()), [&](int i) {
        const auto& d = datasets[static_cast<size_t>(i)];
        try {
            rows[static_cast<size_t>(i)] = analyze_subject(d, opts);
        } catch (const std::exception& e) {
            ReportRow row;
            row.subject_id = d.subject_id();
            row.K = d.num_observations();
            row.error = e.what();
            rows[static_cast<size_t>(i)] = std::move(row);
        }
    }, opts.threads);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReportRow& a, const ReportRow& b) {
                         return a.subject_id < b.subject_id;
                     });
    return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows, const AnalyzeOptions& opts) {
    std::ostringstream os;
    os << "subject,K,e_star_oeu";
    if (opts.with_seu) os << ",e_star_seu";
    os << ",ccei,fosd_count,fosd_fraction,dsd_rho,e_upper_bound"
       << ",almost_diag_r005,almost_diag_r02,almost_diag_r05,almost_diag_r1";
    if (opts.with_robustness) os << ",e_drop1,dropped1,e_drop2,dropped2,e_bar";
    if (opts.with_test) os << ",mp_c_alpha,mp_statistic,mp_reject";
    os << ",error\n";
    for (const auto& r : rows) {
        os << r.subject_id << ',' << r.K << ',' << fmt(r.e_star_oeu);
        if (opts.with_seu) os << ',' << fmt(r.e_star_seu);
        os << ',' << fmt(r.ccei) << ',' << fmt(r.fosd_count) << ',' << fmt(r.fosd_fraction)
           << ',' << fmt(r.dsd_rho) << ',' << fmt(r.e_bound);
        for (const auto& flag : r.almost_diag) os << ',' << fmt(flag);
        if (opts.with_robustness) {
            os << ',' << fmt(r.e_drop1) << ',' << r.dropped1 << ',' << fmt(r.e_drop2) << ','
               << r.dropped2 << ',' << fmt(r.e_bar);
        }
        if (opts.with_test) {
            os << ',' << fmt(r.c_alpha) << ',' << fmt(r.statistic) << ',' << fmt(r.reject);
        }
        os << ',' << r.error << '\n';
    }
    return os.str();
}

std::string report_json(const std::vector<ReportRow>& rows, const AnalyzeOptions& opts) {
    nlohmann::json subjects = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["subject"] = r.subject_id;
        j["K"] = r.K;
        j["e_star_oeu"] = opt_json(r.e_star_oeu);
        if (opts.with_seu) j["e_star_seu"] = opt_json(r.e_star_seu);
        j["ccei"] = opt_json(r.ccei);
        j["fosd_count"] = r.fosd_count ? nlohmann::json(*r.fosd_count) : nlohmann::json(nullptr);
        j["fosd_fraction"] = opt_json(r.fosd_fraction);
        j["dsd_rho"] = opt_json(r.dsd_rho);
        j["e_upper_bound"] = opt_json(r.e_bound);
        nlohmann::json diag = nlohmann::json::array();
        for (size_t i = 0; i < 4; ++i) {
            if (r.almost_diag[i]) {
                diag.push_back({{"radius", kDiagonalRadii[i]}, {"inside", *r.almost_diag[i]}});
            }
        }
        j["almost_diagonal"] = std::move(diag);
        if (opts.with_robustness) {
            j["e_drop1"] = opt_json(r.e_drop1);
            j["dropped1"] = r.dropped1;
            j["e_drop2"] = opt_json(r.e_drop2);
            j["dropped2"] = r.dropped2;
            j["e_bar"] = opt_json(r.e_bar);
        }
        if (opts.with_test) {
            j["mp_c_alpha"] = opt_json(r.c_alpha);
            j["mp_statistic"] = opt_json(r.statistic);
            j["mp_reject"] = r.reject ? nlohmann::json(*r.reject) : nlohmann::json(nullptr);
        }
        if (!r.error.empty()) j["error"] = r.error;
        subjects.push_back(std::move(j));
    }
    const Summary s = summarize(rows);
    nlohmann::json root;
    root["subjects"] = std::move(subjects);
    root["summary"] = {{"subjects", s.subjects},
                       {"failed", s.failed},
                       {"mean_e_star_oeu", opt_json(s.mean_e_oeu)},
                       {"median_e_star_oeu", opt_json(s.median_e_oeu)},
                       {"mean_ccei", opt_json(s.mean_ccei)},
                       {"median_ccei", opt_json(s.median_ccei)}};
    return root.dump(2) + "\n";
}

Summary summarize(const std::vector<ReportRow>& rows) {
    Summary s;
    s.subjects = static_cast<int>(rows.size());
    std::vector<double> e, c;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            ++s.failed;
            continue;
        }
        if (r.e_star_oeu) e.push_back(*r.e_star_oeu);
        if (r.ccei) c.push_back(*r.ccei);
    }
    s.mean_e_oeu = mean_of(e);
    s.median_e_oeu = median_of(e);
    s.mean_ccei = mean_of(c);
    s.median_ccei = median_of(c);
    return s;
}

std::string summary_text(const Summary& s) {
    std::ostringstream os;
    os << "subjects " << s.subjects << " (failed " << s.failed << ")";
    auto put = [&](const char* name, const std::optional<double>& v) {
        os << "  " << name << ' ' << fmt(v);
    };
    put("mean e*", s.mean_e_oeu);
    put("median e*", s.median_e_oeu);
    put("mean CCEI", s.mean_ccei);
    put("median CCEI", s.median_ccei);
    return os.str();
}

}  // namespace eustar
