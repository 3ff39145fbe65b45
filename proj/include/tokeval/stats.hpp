#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tokeval {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Chi-square survival function with k degrees of freedom: P(X > x).
double chi2_survival(double x, double k);

enum class McNemarMethod {
    Auto,           // exact binomial below 25 discordant pairs, else chi2
    Chi2Corrected,  // continuity-corrected chi-square, 1 dof
    ExactBinomial,  // two-sided binomial test at p = 1/2
};

McNemarMethod mcnemar_method_from_name(const std::string& name);
const std::string& mcnemar_method_name(McNemarMethod method);

// Aligned gold labels and the predictions of two systems on the same items.
// Concatenating runs (seeds, tasks) is fine: disagreement counts are additive.
struct PairedPredictions {
    std::vector<std::string> gold;
    std::vector<std::string> preds_a;
    std::vector<std::string> preds_b;
};

struct McNemarResult {
    uint64_t b = 0;          // items A got right and B got wrong
    uint64_t c = 0;          // items B got right and A got wrong
    McNemarMethod method = McNemarMethod::ExactBinomial;  // method applied
    double statistic = 0.0;  // chi-square statistic; 0 for the exact test
    double p_raw = 1.0;
    double p_adjusted = 1.0;  // min(1, m * p_raw)
};

// Paired test on discordant counts. b + c == 0 yields p = 1.
McNemarResult mcnemar(uint64_t b, uint64_t c, McNemarMethod method = McNemarMethod::Auto,
                      size_t bonferroni_m = 1);
McNemarResult mcnemar(const PairedPredictions& pp, McNemarMethod method = McNemarMethod::Auto,
                      size_t bonferroni_m = 1);

// Family-wise correction for m comparisons: min(1, m * p).
double bonferroni(double p, size_t m);

// Sample Pearson correlation. Requires equal lengths, at least two points
// and nonzero variance on both sides.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tokeval
