// Grade statistics: correlation, trend lines, the impact parameter and a
// histogram with a fitted normal.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lteaudio {

struct GradeRecord {
    std::string student_id;
    std::optional<double> ex1, ex2, lab1, lab2, lab3;

    /// Mean of ex1 and ex2; absent unless both are present.
    std::optional<double> ex_aver() const;
    /// Field by name: ex1, ex2, ex_aver, lab1, lab2, lab3.
    std::optional<double> field(const std::string& name) const;
};

/// Header `student_id,ex1,ex2,lab1,lab2,lab3`; empty field = absent.
std::vector<GradeRecord> parse_grades(std::string_view csv_text);
std::vector<GradeRecord> load_grades(const std::string& path);

/// Clamped to [-1, 1]. Throws "undefined correlation" on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
    double slope = 0.0;
    double offset = 0.0;
};

LinearFit linreg(std::span<const double> x, std::span<const double> y);

/// lab3 - (lab1 + lab3) / 2.
double impact(double lab1, double lab3);

struct Histogram {
    std::vector<double> edges;  // n_bins + 1, spanning [min, max]
    std::vector<std::size_t> counts;
};

struct NormalFit {
    double mean = 0.0;
    double stddev = 0.0;  // n - 1 denominator
    Histogram histogram;
};

NormalFit normal_fit(std::span<const double> values, int n_bins);

struct CorrelationEntry {
    std::string x;
    std::string y;
    std::size_t n = 0;  // students with both marks
    double r = 0.0;
    LinearFit fit;
};

/// Pairwise deletion: each pair uses every student who has both marks.
std::vector<CorrelationEntry> correlation_table(const std::vector<GradeRecord>& records,
                                                const std::vector<std::pair<std::string, std::string>>& pairs);

/// ex1-ex2, ex1-lab3, ex2-lab3, ex_aver-lab3, lab1-lab3.
std::vector<std::pair<std::string, std::string>> default_grade_pairs();

/// Impact values of every student with both lab1 and lab3.
std::vector<double> impact_values(const std::vector<GradeRecord>& records);

}  // namespace lteaudio
