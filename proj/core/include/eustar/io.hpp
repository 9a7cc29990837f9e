#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eustar/dataset.hpp"

namespace eustar {

/// Parses the two-state budget-line CSV convention:
///
///   subject,trial,a1,a2,x1,x2
///
/// where a1, a2 are the budget-line intercepts and x1, x2 the chosen
/// allocation. Prices are normalized to p1 = 1, p2 = a1/a2 and income is
/// I = p.x. Rows must lie on the budget line (x1/a1 + x2/a2 = 1) within
/// relative tolerance 1e-6. One Dataset per subject, observations sorted
/// by trial, subjects in first-appearance order.
///
/// `belief` overrides the default (0.5, 0.5).
std::vector<Dataset> parse_budget_csv(const std::string& text,
                                      std::optional<ObjectiveBelief> belief = std::nullopt);

/// Parses the generic JSON format, which supports any number of states
/// and an arbitrary belief:
///
///   {"subjects": [
///      {"id": "s1", "mu": [0.5, 0.5],
///       "observations": [{"p": [1, 2], "x": [10, 15]}, ...]},
///      ...]}
///
/// A bare array of subjects, or a single subject object, is also accepted.
/// Missing ids default to "s1", "s2", ... by position. Belief entries are
/// renormalized when they sum to 1 within 1e-9, otherwise the subject is
/// rejected.
std::vector<Dataset> parse_generic_json(const std::string& text);

/// Serializes 2-state datasets back to the budget CSV convention
/// (a_s = I / p_s). Values are printed with enough digits to round-trip.
std::string write_budget_csv(const std::vector<Dataset>& datasets);

/// Serializes datasets to the generic JSON format.
std::string write_generic_json(const std::vector<Dataset>& datasets);

}  // namespace eustar
