#pragma once

#include <optional>
#include <string>
#include <vector>

namespace codbench::harness {

/// Per-run aggregate values of one (method, k) cell, in run order.
struct RunSeries {
    std::string label;
    std::vector<double> values;
};

/// Cumulative statistics over the first n runs. The interval is absent for
/// n = 1, where the sample variance is undefined.
struct StatsRow {
    int n = 0;
    double cum_mean = 0.0;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
};

/// Quantile of Student's t distribution with `dof` degrees of freedom.
double student_t_quantile(double probability, double dof);

/// For every prefix length n: mean, and the two-sided Student-t interval
/// mean +- t_{(1+confidence)/2, n-1} * s_n / sqrt(n) with s_n the sample
/// standard deviation. Throws InvalidArgument on an empty series or a
/// confidence outside (0,1).
std::vector<StatsRow> cumulative_stats(const RunSeries& series, double confidence = 0.95);

/// CSV with columns label,n,cum_mean,ci_low,ci_high (interval blank at n = 1).
std::string stats_csv_header();
std::string stats_to_csv_rows(const std::string& label, const std::vector<StatsRow>& rows);

} // namespace codbench::harness
