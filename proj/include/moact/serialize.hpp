#ifndef MOACT_SERIALIZE_HPP
#define MOACT_SERIALIZE_HPP

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "moact/block_matching.hpp"
#include "moact/evaluation.hpp"
#include "moact/motion_activity.hpp"
#include "moact/shot_detector.hpp"

namespace moact {

/// Locale-independent shortest-ish float formatting for CSV cells.
inline std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Percentage truncated (not rounded) to two decimals, computed from integer
/// counts so decimal truncation is exact. `den == 0` yields the conventional
/// value for the degenerate report.
inline std::string format_percent(std::int64_t num, std::int64_t den,
                                  double convention_when_empty) {
    std::int64_t hundredths;
    if (den == 0)
        hundredths = static_cast<std::int64_t>(convention_when_empty * 10000.0);
    else
        hundredths = num * 10000 / den;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%" PRId64 ".%02" PRId64 "%%", hundredths / 100,
                  hundredths % 100);
    return buf;
}

inline void to_json(nlohmann::json& j, const BlockGridSpec& spec) {
    j = nlohmann::json{{"block_size", spec.block_size},
                       {"search_range", spec.search_range},
                       {"cols", spec.cols},
                       {"rows", spec.rows}};
}

inline void to_json(nlohmann::json& j, const MotionVectorField& field) {
    nlohmann::json blocks = nlohmann::json::array();
    for (int i = 0; i < field.vectors.rows(); ++i)
        for (int jj = 0; jj < field.vectors.cols(); ++jj)
            blocks.push_back({{"i", i},
                              {"j", jj},
                              {"x", field.vectors.at(i, jj).x},
                              {"y", field.vectors.at(i, jj).y},
                              {"sad", field.cost.at(i, jj)},
                              {"points", field.search_points.at(i, jj)}});
    j = nlohmann::json{{"spec", field.spec}, {"blocks", std::move(blocks)}};
}

inline void to_json(nlohmann::json& j, const SearchStats& stats) {
    j = nlohmann::json{{"avg_search_points", stats.avg_search_points},
                       {"total_sad", stats.total_sad}};
}

inline void to_json(nlohmann::json& j, const TimelineSample& sample) {
    j = nlohmann::json{{"pair_start", sample.start},
                       {"pair_end", sample.end},
                       {"avg", sample.activity.average},
                       {"variance", sample.activity.variance},
                       {"intensity", sample.activity.intensity},
                       {"level", sample.activity.level}};
}

inline void to_json(nlohmann::json& j, const IntensityTimeline& timeline) {
    j = nlohmann::json{{"step", timeline.step},
                       {"stride", timeline.stride},
                       {"frame_count", timeline.frame_count},
                       {"samples", timeline.samples}};
}

inline void to_json(nlohmann::json& j, const DiffSignal& signal) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : signal.points)
        points.push_back({{"t", p.t}, {"diff", p.value}});
    j = nlohmann::json{{"points", std::move(points)}};
}

inline void to_json(nlohmann::json& j, const Shot& shot) {
    j = nlohmann::json{{"start", shot.start}, {"end", shot.end}, {"key_frame", shot.key_frame}};
}

inline void to_json(nlohmann::json& j, const ShotList& list) {
    j = nlohmann::json{{"boundaries", list.boundaries},
                       {"shots", list.shots},
                       {"threshold_used", list.threshold_used}};
}

inline void to_json(nlohmann::json& j, const EvalReport& report) {
    nlohmann::json matches = nlohmann::json::array();
    for (const auto& [detected, reference] : report.matches)
        matches.push_back({{"detected", detected}, {"reference", reference}});
    j = nlohmann::json{{"reported", report.reported},
                       {"in_reference", report.in_reference},
                       {"correct", report.correct},
                       {"false", report.false_count},
                       {"missed", report.missed},
                       {"precision", report.precision},
                       {"recall", report.recall},
                       {"fp_rate", report.fp_rate},
                       {"tolerance", report.tolerance},
                       {"matches", std::move(matches)}};
}

inline void write_motion_csv(std::ostream& out, const MotionVectorField& field) {
    out << "i,j,x,y,sad,points\n";
    for (int i = 0; i < field.vectors.rows(); ++i)
        for (int j = 0; j < field.vectors.cols(); ++j)
            out << i << ',' << j << ',' << field.vectors.at(i, j).x << ','
                << field.vectors.at(i, j).y << ',' << field.cost.at(i, j) << ','
                << field.search_points.at(i, j) << '\n';
}

inline void write_timeline_csv(std::ostream& out, const IntensityTimeline& timeline) {
    out << "pair_start,pair_end,avg,variance,intensity,level\n";
    for (const auto& s : timeline.samples)
        out << s.start << ',' << s.end << ',' << format_double(s.activity.average) << ','
            << format_double(s.activity.variance) << ','
            << format_double(s.activity.intensity) << ',' << s.activity.level << '\n';
}

inline void write_signal_csv(std::ostream& out, const DiffSignal& signal) {
    out << "t,diff\n";
    for (const auto& p : signal.points)
        out << p.t << ',' << format_double(p.value) << '\n';
}

/// The plain-text boundary list the evaluation side reads back.
inline void write_boundaries_text(std::ostream& out, const ShotList& list) {
    for (int b : list.boundaries)
        out << b << '\n';
}

/// Aligned table with Precision / Recall / FP columns, percentages truncated
/// to two decimals.
inline void write_eval_text(std::ostream& out, const EvalReport& report) {
    out << "reported      " << report.reported << '\n';
    out << "in_reference  " << report.in_reference << '\n';
    out << "correct       " << report.correct << '\n';
    out << "false         " << report.false_count << '\n';
    out << "missed        " << report.missed << '\n';
    out << "tolerance     " << report.tolerance << '\n';
    out << "Precision  Recall  FP\n";
    out << format_percent(report.correct, report.reported, 1.0) << "     "
        << format_percent(report.correct, report.in_reference, 1.0) << "  "
        << format_percent(report.false_count, report.reported, 0.0) << '\n';
}

} // namespace moact

#endif // MOACT_SERIALIZE_HPP
