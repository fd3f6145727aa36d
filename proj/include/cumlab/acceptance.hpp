#pragma once

#include <string>
#include <vector>

namespace cumlab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

CriterionResult check_algebra_suite();
CriterionResult check_partial_delta_lemma();
CriterionResult check_certificates();
CriterionResult check_edgeworth_coefficients();
CriterionResult check_triangle_edgeworth();
CriterionResult check_berry_esseen();
CriterionResult check_regular_graphs();
CriterionResult check_cumulant_paths();

/// Criteria 1..8 in order.
std::vector<CriterionResult> run_acceptance();

/// "[PASS] 3 certificates (1.20 s): detail".
std::string format_result(const CriterionResult& r);

} // namespace cumlab
