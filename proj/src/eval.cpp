#include "flowseg/eval.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>
#include <map>
#include <sstream>

namespace flowseg {

namespace {

std::vector<int> distinct_labels(const LabelMap& m) {
    std::vector<int> labels(m.values());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (!labels.empty() && labels.front() == 0) labels.erase(labels.begin());
    return labels;
}

// Assignment by potentials on a rows x cols cost matrix, rows <= cols.
// Returns the column matched to each row.
std::vector<int> hungarian(const std::vector<std::vector<long long>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = static_cast<int>(cost[0].size());
    const long long kInf = LLONG_MAX / 4;

    std::vector<long long> u(n + 1, 0), v(m + 1, 0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            long long delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

SegmentMatch match_segments(const LabelMap& a, const LabelMap& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("label maps have different dimensions");

    const std::vector<int> labels_a = distinct_labels(a);
    const std::vector<int> labels_b = distinct_labels(b);
    SegmentMatch result;
    if (labels_a.empty() || labels_b.empty()) return result;

    std::map<int, int> index_a, index_b;
    for (size_t i = 0; i < labels_a.size(); ++i) index_a[labels_a[i]] = static_cast<int>(i);
    for (size_t i = 0; i < labels_b.size(); ++i) index_b[labels_b[i]] = static_cast<int>(i);

    std::vector<std::vector<long long>> overlap(labels_a.size(),
                                                std::vector<long long>(labels_b.size(), 0));
    for (int i = 0; i < a.size(); ++i)
        if (a.at(i) != 0 && b.at(i) != 0) ++overlap[index_a[a.at(i)]][index_b[b.at(i)]];

    // Hungarian wants rows <= cols; transpose if needed. Costs are negated
    // overlaps so the minimum-cost assignment maximizes overlap.
    const bool transposed = labels_a.size() > labels_b.size();
    const size_t rows = transposed ? labels_b.size() : labels_a.size();
    const size_t cols = transposed ? labels_a.size() : labels_b.size();
    std::vector<std::vector<long long>> cost(rows, std::vector<long long>(cols, 0));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            cost[i][j] = -(transposed ? overlap[j][i] : overlap[i][j]);

    const std::vector<int> assignment = hungarian(cost);
    for (size_t i = 0; i < rows; ++i) {
        const int j = assignment[i];
        if (j < 0) continue;
        const size_t ia = transposed ? static_cast<size_t>(j) : i;
        const size_t ib = transposed ? i : static_cast<size_t>(j);
        const long long common = overlap[ia][ib];
        if (common <= 0) continue;
        result.pairs.emplace_back(labels_a[ia], labels_b[ib]);
        result.total_overlap += common;
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    return result;
}

double jaccard(const LabelMap& a, const LabelMap& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("label maps have different dimensions");

    long long union_size = 0;
    for (int i = 0; i < a.size(); ++i)
        if (a.at(i) != 0 || b.at(i) != 0) ++union_size;
    if (union_size == 0) return 1.0;

    const SegmentMatch match = match_segments(a, b);
    return static_cast<double>(match.total_overlap) / static_cast<double>(union_size);
}

namespace {

std::string format_row(const char* fmt, const SequenceTiming& row) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), fmt, row.name.c_str(), row.coarse_s, row.refine_s, row.merge_s,
                  row.total_s);
    return buf;
}

}  // namespace

std::string timing_table_text(std::span<const SequenceTiming> rows) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-20s %10s %10s %10s %10s\n", "sequence", "coarse_s",
                  "refine_s", "merge_s", "total_s");
    os << buf;
    for (const SequenceTiming& row : rows)
        os << format_row("%-20s %10.4f %10.4f %10.4f %10.4f\n", row);
    return os.str();
}

std::string timing_table_csv(std::span<const SequenceTiming> rows) {
    std::ostringstream os;
    os << "sequence,coarse_s,refine_s,merge_s,total_s\n";
    for (const SequenceTiming& row : rows)
        os << format_row("%s,%.6f,%.6f,%.6f,%.6f\n", row);
    return os.str();
}

}  // namespace flowseg
