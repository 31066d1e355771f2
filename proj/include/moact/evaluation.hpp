#ifndef MOACT_EVALUATION_HPP
#define MOACT_EVALUATION_HPP

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "moact/error.hpp"

namespace moact {

enum class TransitionKind { unspecified, cut, gradual };

/// Reference shot boundaries, sorted and deduplicated. The transition kind is
/// carried through from the annotation file but never affects scoring.
struct GroundTruth {
    std::vector<int> boundaries;
    std::vector<TransitionKind> kinds; // parallel to boundaries
};

struct EvalReport {
    int reported = 0;
    int in_reference = 0;
    int correct = 0;
    int false_count = 0;  // reported - correct
    int missed = 0;       // in_reference - correct
    double precision = 0.0;
    double recall = 0.0;
    double fp_rate = 0.0;
    int tolerance = 0;
    std::vector<std::pair<int, int>> matches; // (detected frame, reference frame)
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace detail

/// Parses one boundary per line: `frame_index[,kind]` with `#` comments.
/// Kind is `cut` or `gradual`. The result is sorted and deduplicated.
inline GroundTruth parse_ground_truth(std::istream& in, const std::string& origin = "input") {
    std::vector<std::pair<int, TransitionKind>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;

        std::string index_part = line;
        std::string kind_part;
        auto comma = line.find(',');
        if (comma != std::string::npos) {
            index_part = detail::trim(line.substr(0, comma));
            kind_part = detail::trim(line.substr(comma + 1));
        }
        if (index_part.empty() ||
            index_part.find_first_not_of("0123456789") != std::string::npos ||
            index_part.size() > 9)
            raise(Errc::parse_error,
                  origin + " line " + std::to_string(line_no) + ": bad frame index '" +
                      index_part + "'");
        TransitionKind kind = TransitionKind::unspecified;
        if (!kind_part.empty()) {
            if (kind_part == "cut")
                kind = TransitionKind::cut;
            else if (kind_part == "gradual")
                kind = TransitionKind::gradual;
            else
                raise(Errc::parse_error,
                      origin + " line " + std::to_string(line_no) + ": unknown kind '" +
                          kind_part + "'");
        }
        entries.emplace_back(std::stoi(index_part), kind);
    }

    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    GroundTruth truth;
    for (const auto& [frame, kind] : entries) {
        if (!truth.boundaries.empty() && truth.boundaries.back() == frame)
            continue; // duplicate annotation, keep the first
        truth.boundaries.push_back(frame);
        truth.kinds.push_back(kind);
    }
    return truth;
}

inline GroundTruth load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        raise(Errc::io_failure, "cannot open " + path.string());
    return parse_ground_truth(in, path.string());
}

/// Greedy in-order one-to-one matching: walk both sorted lists and pair the
/// earliest mutually unmatched entries within +/-tolerance frames.
inline std::vector<std::pair<int, int>> match_boundaries(std::vector<int> detected,
                                                         const GroundTruth& reference,
                                                         int tolerance) {
    if (tolerance < 0)
        raise(Errc::invalid_argument, "tolerance must be >= 0");
    std::sort(detected.begin(), detected.end());
    std::vector<std::pair<int, int>> matches;
    std::size_t i = 0, j = 0;
    while (i < detected.size() && j < reference.boundaries.size()) {
        int d = detected[i];
        int r = reference.boundaries[j];
        if (std::abs(d - r) <= tolerance) {
            matches.emplace_back(d, r);
            ++i;
            ++j;
        } else if (d < r) {
            ++i;
        } else {
            ++j;
        }
    }
    return matches;
}

/// Precision, recall and false-positive rate of a detected boundary list.
/// Degenerate cases: nothing reported gives precision 1 and fp_rate 0; an
/// empty reference gives recall 1.
inline EvalReport score(std::vector<int> detected, const GroundTruth& reference, int tolerance) {
    EvalReport report;
    report.tolerance = tolerance;
    report.reported = static_cast<int>(detected.size());
    report.in_reference = static_cast<int>(reference.boundaries.size());
    report.matches = match_boundaries(std::move(detected), reference, tolerance);
    report.correct = static_cast<int>(report.matches.size());
    report.false_count = report.reported - report.correct;
    report.missed = report.in_reference - report.correct;
    report.precision = report.reported > 0
                           ? static_cast<double>(report.correct) / report.reported
                           : 1.0;
    report.recall = report.in_reference > 0
                        ? static_cast<double>(report.correct) / report.in_reference
                        : 1.0;
    report.fp_rate = report.reported > 0
                         ? static_cast<double>(report.false_count) / report.reported
                         : 0.0;
    return report;
}

} // namespace moact

#endif // MOACT_EVALUATION_HPP
