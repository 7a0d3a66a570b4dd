#pragma once

#include <limits>
#include <string>
#include <vector>

namespace thlab {

/// One monitored inequality instance: pass iff lhs <= rhs (margin = rhs - lhs).
struct VerdictRow {
    int n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct VerdictSeries {
    std::string name;
    std::vector<VerdictRow> rows;
    bool all_pass = true;
    double min_margin = std::numeric_limits<double>::infinity();
    int first_fail = -1;

    void add(int n, double lhs, double rhs) {
        VerdictRow r{n, lhs, rhs, rhs - lhs, lhs <= rhs};
        if (!r.pass && first_fail < 0) first_fail = n;
        all_pass = all_pass && r.pass;
        min_margin = std::min(min_margin, r.margin);
        rows.push_back(r);
    }

    std::string to_csv() const;
};

} // namespace thlab
