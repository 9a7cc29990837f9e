#include "eustar/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

namespace eustar {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        const auto a = f.find_first_not_of(" \t");
        const auto b = f.find_last_not_of(" \t");
        f = (a == std::string::npos) ? std::string() : f.substr(a, b - a + 1);
    }
    return out;
}

double parse_number(const std::string& field, size_t row, const char* name) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("row " + std::to_string(row) + ": cannot parse " + name +
                         " from '" + field + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvRow {
    double trial;
    Observation obs;
};

}  // namespace

std::vector<Dataset> parse_budget_csv(const std::string& text,
                                      std::optional<ObjectiveBelief> belief) {
    ObjectiveBelief mu = belief.value_or(ObjectiveBelief::uniform(2));
    if (mu.states() != 2) {
        throw ArgumentError("budget CSV is a 2-state format, belief has " +
                            std::to_string(mu.states()) + " states");
    }

    std::istringstream in(text);
    std::string line;
    size_t row = 0;
    bool saw_header = false;

    std::map<std::string, std::vector<CsvRow>> by_subject;
    std::vector<std::string> order;

    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (!saw_header) {
            const std::vector<std::string> expected = {"subject", "trial", "a1", "a2", "x1", "x2"};
            if (fields.size() != 6 ||
                !std::equal(fields.begin(), fields.end(), expected.begin())) {
                throw ParseError("row " + std::to_string(row) +
                                 ": expected header subject,trial,a1,a2,x1,x2");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 6) {
            throw ParseError("row " + std::to_string(row) + ": expected 6 fields, got " +
                             std::to_string(fields.size()));
        }
        const std::string& subject = fields[0];
        if (subject.empty()) {
            throw ParseError("row " + std::to_string(row) + ": empty subject id");
        }
        const double trial = parse_number(fields[1], row, "trial");
        const double a1 = parse_number(fields[2], row, "a1");
        const double a2 = parse_number(fields[3], row, "a2");
        const double x1 = parse_number(fields[4], row, "x1");
        const double x2 = parse_number(fields[5], row, "x2");

        const std::string where = "subject " + subject + " trial " + fields[1];
        if (!(a1 > 0.0) || !(a2 > 0.0)) {
            throw ValidationError(where + ": non-positive budget intercept");
        }
        if (x1 < 0.0 || x2 < 0.0) {
            throw ValidationError(where + ": negative allocation");
        }
        // The survey UI snaps clicks onto the line; anything further off
        // than 1e-6 relative is rejected as corrupt.
        const double on_line = x1 / a1 + x2 / a2;
        if (std::abs(on_line - 1.0) > 1e-6) {
            std::ostringstream os;
            os << where << ": allocation off the budget line (x1/a1 + x2/a2 = " << on_line << ")";
            throw ValidationError(os.str());
        }

        Observation obs;
        obs.prices = {1.0, a1 / a2};
        obs.quantities = {x1, x2};
        obs.validate(where);

        if (by_subject.find(subject) == by_subject.end()) order.push_back(subject);
        by_subject[subject].push_back({trial, std::move(obs)});
    }
    if (!saw_header) {
        throw ParseError("empty input: missing header row");
    }

    std::vector<Dataset> out;
    out.reserve(order.size());
    for (const auto& subject : order) {
        auto& rows = by_subject[subject];
        std::stable_sort(rows.begin(), rows.end(),
                         [](const CsvRow& a, const CsvRow& b) { return a.trial < b.trial; });
        std::vector<Observation> obs;
        obs.reserve(rows.size());
        for (auto& r : rows) obs.push_back(std::move(r.obs));
        out.emplace_back(subject, std::move(obs), mu);
    }
    return out;
}

namespace {

Dataset subject_from_json(const nlohmann::json& j, size_t position) {
    std::string id = "s" + std::to_string(position + 1);
    if (j.contains("id")) id = j.at("id").get<std::string>();

    if (!j.contains("mu") || !j.at("mu").is_array()) {
        throw ParseError("subject " + id + ": missing 'mu' array");
    }
    std::vector<double> mu = j.at("mu").get<std::vector<double>>();
    const size_t S = mu.size();

    double sum = 0.0;
    for (double m : mu) sum += m;
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "subject " << id << ": belief sums to " << sum << ", expected 1";
        throw ValidationError(os.str());
    }

    if (!j.contains("observations") || !j.at("observations").is_array()) {
        throw ParseError("subject " + id + ": missing 'observations' array");
    }
    std::vector<Observation> obs;
    size_t k = 0;
    for (const auto& jo : j.at("observations")) {
        const std::string where = "subject " + id + " obs " + std::to_string(k);
        if (!jo.contains("p") || !jo.contains("x")) {
            throw ParseError(where + ": observation needs 'p' and 'x'");
        }
        Observation o;
        o.prices = jo.at("p").get<std::vector<double>>();
        o.quantities = jo.at("x").get<std::vector<double>>();
        if (o.prices.size() != S || o.quantities.size() != S) {
            throw ValidationError(where + ": dimension mismatch with mu (S=" +
                                  std::to_string(S) + ")");
        }
        o.validate(where);
        obs.push_back(std::move(o));
        ++k;
    }
    return Dataset(id, std::move(obs), ObjectiveBelief(std::move(mu)));
}

}  // namespace

std::vector<Dataset> parse_generic_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }

    const nlohmann::json* subjects = nullptr;
    nlohmann::json single;
    if (j.is_array()) {
        subjects = &j;
    } else if (j.is_object() && j.contains("subjects")) {
        subjects = &j.at("subjects");
    } else if (j.is_object() && j.contains("mu")) {
        single = nlohmann::json::array({j});
        subjects = &single;
    } else {
        throw ParseError("expected a subject object, an array of subjects, or {\"subjects\": [...]}");
    }

    std::vector<Dataset> out;
    size_t i = 0;
    for (const auto& js : *subjects) {
        out.push_back(subject_from_json(js, i));
        ++i;
    }
    if (out.empty()) throw ParseError("no subjects in input");
    return out;
}

std::string write_budget_csv(const std::vector<Dataset>& datasets) {
    std::ostringstream os;
    os << "subject,trial,a1,a2,x1,x2\n";
    for (const auto& d : datasets) {
        if (d.states() != 2) {
            throw ArgumentError("subject " + d.subject_id() +
                                ": budget CSV supports exactly 2 states");
        }
        for (int k = 0; k < d.num_observations(); ++k) {
            const double I = d.income(k);
            os << d.subject_id() << ',' << (k + 1) << ','
               << format_double(I / d.price(k, 0)) << ','
               << format_double(I / d.price(k, 1)) << ','
               << format_double(d.quantity(k, 0)) << ','
               << format_double(d.quantity(k, 1)) << '\n';
        }
    }
    return os.str();
}

std::string write_generic_json(const std::vector<Dataset>& datasets) {
    nlohmann::json subjects = nlohmann::json::array();
    for (const auto& d : datasets) {
        nlohmann::json js;
        js["id"] = d.subject_id();
        js["mu"] = d.belief().probs();
        nlohmann::json obs = nlohmann::json::array();
        for (int k = 0; k < d.num_observations(); ++k) {
            obs.push_back({{"p", d.observation(k).prices}, {"x", d.observation(k).quantities}});
        }
        js["observations"] = std::move(obs);
        subjects.push_back(std::move(js));
    }
    nlohmann::json root;
    root["subjects"] = std::move(subjects);
    return root.dump(2) + "\n";
}

}  // namespace eustar
