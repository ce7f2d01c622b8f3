#include "lteaudio/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "lteaudio/csv.hpp"

namespace lteaudio {

std::optional<double> GradeRecord::ex_aver() const {
    if (!ex1 || !ex2) return std::nullopt;
    return (*ex1 + *ex2) / 2.0;
}

std::optional<double> GradeRecord::field(const std::string& name) const {
    if (name == "ex1") return ex1;
    if (name == "ex2") return ex2;
    if (name == "ex_aver") return ex_aver();
    if (name == "lab1") return lab1;
    if (name == "lab2") return lab2;
    if (name == "lab3") return lab3;
    throw std::invalid_argument("unknown grade field '" + name + "'");
}

namespace {

std::vector<GradeRecord> grades_from(const CsvTable& t) {
    const auto id = t.column("student_id");
    const std::vector<std::string> names{"ex1", "ex2", "lab1", "lab2", "lab3"};
    std::vector<std::size_t> cols;
    for (const auto& n : names) cols.push_back(t.column(n));
    std::vector<GradeRecord> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        GradeRecord g;
        g.student_id = t.at(r, id);
        std::optional<double>* slots[] = {&g.ex1, &g.ex2, &g.lab1, &g.lab2, &g.lab3};
        for (std::size_t i = 0; i < cols.size(); ++i) {
            try {
                *slots[i] = parse_optional_number(t.at(r, cols[i]));
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(fmt::format("line {}: {}: {}", t.line(r), names[i], e.what()));
            }
            if (*slots[i] && (**slots[i] < 0.0 || **slots[i] > 10.0)) {
                throw std::invalid_argument(
                    fmt::format("line {}: {} = {} is outside [0, 10]", t.line(r), names[i], **slots[i]));
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
    if (x.size() < 2) throw std::invalid_argument("need at least two points");
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

std::vector<GradeRecord> parse_grades(std::string_view csv_text) { return grades_from(CsvTable::parse(csv_text)); }

std::vector<GradeRecord> load_grades(const std::string& path) { return grades_from(CsvTable::load(path)); }

double pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) throw std::domain_error("undefined correlation: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LinearFit linreg(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx <= 0.0) throw std::domain_error("degenerate regression: x has zero variance");
    LinearFit f;
    f.slope = sxy / sxx;
    f.offset = my - f.slope * mx;
    return f;
}

double impact(double lab1, double lab3) {
    if (lab1 < 0.0 || lab1 > 10.0 || lab3 < 0.0 || lab3 > 10.0) {
        throw std::invalid_argument("marks must lie in [0, 10]");
    }
    return lab3 - (lab1 + lab3) / 2.0;
}

NormalFit normal_fit(std::span<const double> values, int n_bins) {
    if (values.size() < 2) throw std::invalid_argument("normal fit needs at least two values");
    if (n_bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    NormalFit f;
    f.mean = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - f.mean) * (v - f.mean);
    f.stddev = std::sqrt(ss / (values.size() - 1));

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double width = (hi - lo) / n_bins;
    for (int i = 0; i <= n_bins; ++i) f.histogram.edges.push_back(i == n_bins ? hi : lo + i * width);
    f.histogram.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (double v : values) {
        int bin = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
        ++f.histogram.counts[static_cast<std::size_t>(std::clamp(bin, 0, n_bins - 1))];
    }
    return f;
}

std::vector<CorrelationEntry> correlation_table(const std::vector<GradeRecord>& records,
                                                const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<CorrelationEntry> out;
    for (const auto& [xn, yn] : pairs) {
        std::vector<double> xs, ys;
        for (const auto& rec : records) {
            auto x = rec.field(xn);
            auto y = rec.field(yn);
            if (x && y) {
                xs.push_back(*x);
                ys.push_back(*y);
            }
        }
        if (xs.size() < 2) {
            throw std::invalid_argument(
                fmt::format("pair {}-{} has {} complete record(s), need at least 2", xn, yn, xs.size()));
        }
        CorrelationEntry e;
        e.x = xn;
        e.y = yn;
        e.n = xs.size();
        try {
            e.r = pearson(xs, ys);
            e.fit = linreg(xs, ys);
        } catch (const std::domain_error& err) {
            throw std::invalid_argument(fmt::format("pair {}-{}: {}", xn, yn, err.what()));
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> default_grade_pairs() {
    return {{"ex1", "ex2"}, {"ex1", "lab3"}, {"ex2", "lab3"}, {"ex_aver", "lab3"}, {"lab1", "lab3"}};
}

std::vector<double> impact_values(const std::vector<GradeRecord>& records) {
    std::vector<double> out;
    for (const auto& r : records) {
        if (r.lab1 && r.lab3) out.push_back(impact(*r.lab1, *r.lab3));
    }
    return out;
}

}  // namespace lteaudio
