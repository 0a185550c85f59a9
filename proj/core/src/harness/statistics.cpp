#include "codbench/harness/statistics.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <sstream>

namespace codbench::harness {

double student_t_quantile(double probability, double dof) {
    if (!(probability > 0.0 && probability < 1.0) || !(dof > 0.0))
        throw InvalidArgument("student_t_quantile: need 0 < p < 1 and dof > 0");
    boost::math::students_t dist(dof);
    return boost::math::quantile(dist, probability);
}

std::vector<StatsRow> cumulative_stats(const RunSeries& series, double confidence) {
    if (series.values.empty())
        throw InvalidArgument("cumulative_stats: series '" + series.label + "' is empty");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw InvalidArgument("cumulative_stats: confidence must lie in (0,1)");

    const double upper = (1.0 + confidence) / 2.0;
    std::vector<StatsRow> rows;
    rows.reserve(series.values.size());

    double sum = 0.0;
    // Welford accumulators for the sample variance.
    double running_mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double x = series.values[i];
        const double n = static_cast<double>(i + 1);
        sum += x;
        const double delta = x - running_mean;
        running_mean += delta / n;
        m2 += delta * (x - running_mean);

        StatsRow row;
        row.n = static_cast<int>(i + 1);
        row.cum_mean = sum / n;
        if (i > 0) {
            const double sd = std::sqrt(std::max(0.0, m2 / (n - 1.0)));
            const double half = student_t_quantile(upper, n - 1.0) * sd / std::sqrt(n);
            row.ci_low = row.cum_mean - half;
            row.ci_high = row.cum_mean + half;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string stats_csv_header() { return "label,n,cum_mean,ci_low,ci_high\n"; }

std::string stats_to_csv_rows(const std::string& label, const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    for (const auto& r : rows) {
        out << label << ',' << r.n << ',' << format_fixed(r.cum_mean) << ',';
        if (r.ci_low)
            out << format_fixed(*r.ci_low);
        out << ',';
        if (r.ci_high)
            out << format_fixed(*r.ci_high);
        out << '\n';
    }
    return out.str();
}

} // namespace codbench::harness
