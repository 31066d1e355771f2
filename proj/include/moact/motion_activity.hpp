#ifndef MOACT_MOTION_ACTIVITY_HPP
#define MOACT_MOTION_ACTIVITY_HPP

#include <cmath>
#include <string>

#include "moact/block_matching.hpp"
#include "moact/error.hpp"
#include "moact/frame.hpp"
#include "moact/grid.hpp"

namespace moact {

enum class SearchAlgo { arps, exhaustive };

inline const char* search_algo_name(SearchAlgo a) {
    return a == SearchAlgo::arps ? "arps" : "es";
}

/// Upper bounds of the activity levels 1..4; level 5 is unbounded. Intervals
/// are half-open [lo, hi), so each bound belongs to the level above it.
struct ActivityBins {
    double very_low_max = 3.9;
    double low_max = 10.7;
    double medium_max = 17.1;
    double high_max = 32.0;
};

/// Motion-activity summary of one frame pair: per-block magnitudes, their
/// mean and population variance, the intensity sigma, and its level 1..5.
struct ActivityDescriptor {
    Grid<double> magnitudes; // the matrix the statistics were computed on
    double average = 0.0;
    double variance = 0.0;
    double intensity = 0.0;
    int level = 1;
    bool filtered = false;
};

/// Per-block motion magnitude sqrt(x^2 + y^2).
inline Grid<double> activity_matrix(const MotionVectorField& field) {
    if (field.vectors.empty())
        raise(Errc::empty_field, "motion field has no blocks");
    Grid<double> matrix(field.vectors.rows(), field.vectors.cols());
    for (int i = 0; i < matrix.rows(); ++i)
        for (int j = 0; j < matrix.cols(); ++j) {
            MotionVector mv = field.vectors.at(i, j);
            matrix.at(i, j) = std::sqrt(double(mv.x) * mv.x + double(mv.y) * mv.y);
        }
    return matrix;
}

inline double activity_average(const Grid<double>& matrix) {
    if (matrix.empty())
        raise(Errc::empty_field, "activity matrix is empty");
    double sum = 0.0;
    for (double m : matrix)
        sum += m;
    return sum / static_cast<double>(matrix.size());
}

/// Zeroes every block strictly below the given average; high-activity blocks
/// pass through unchanged.
inline Grid<double> low_activity_filter(const Grid<double>& matrix, double average) {
    if (matrix.empty())
        raise(Errc::empty_field, "activity matrix is empty");
    Grid<double> out = matrix;
    for (double& m : out)
        if (m < average)
            m = 0.0;
    return out;
}

struct ActivityMoments {
    double variance = 0.0;
    double intensity = 0.0;
};

/// Population variance of the magnitudes and its square root.
inline ActivityMoments activity_intensity(const Grid<double>& matrix) {
    double average = activity_average(matrix);
    double sum = 0.0;
    for (double m : matrix) {
        double d = m - average;
        sum += d * d;
    }
    ActivityMoments moments;
    moments.variance = sum / static_cast<double>(matrix.size());
    moments.intensity = std::sqrt(moments.variance);
    return moments;
}

inline int quantize_intensity(double intensity, const ActivityBins& bins = {}) {
    if (intensity < 0.0)
        raise(Errc::negative_intensity, "intensity " + std::to_string(intensity));
    if (intensity < bins.very_low_max)
        return 1;
    if (intensity < bins.low_max)
        return 2;
    if (intensity < bins.medium_max)
        return 3;
    if (intensity < bins.high_max)
        return 4;
    return 5;
}

/// Full pipeline for one frame pair: motion search, activity matrix, optional
/// low-activity suppression (statistics are then recomputed on the filtered
/// matrix), mean, intensity, level.
inline ActivityDescriptor describe_pair(const Frame& current, const Frame& reference,
                                        const BlockGridSpec& spec, bool filter = false,
                                        SearchAlgo algo = SearchAlgo::arps,
                                        const ActivityBins& bins = {}) {
    MotionVectorField field = (algo == SearchAlgo::arps) ? arps_search(current, reference, spec)
                                                         : exhaustive_search(current, reference,
                                                                             spec);
    Grid<double> matrix = activity_matrix(field);
    if (filter)
        matrix = low_activity_filter(matrix, activity_average(matrix));

    ActivityDescriptor desc;
    desc.magnitudes = std::move(matrix);
    desc.average = activity_average(desc.magnitudes);
    ActivityMoments moments = activity_intensity(desc.magnitudes);
    desc.variance = moments.variance;
    desc.intensity = moments.intensity;
    desc.level = quantize_intensity(desc.intensity, bins);
    desc.filtered = filter;
    return desc;
}

} // namespace moact

#endif // MOACT_MOTION_ACTIVITY_HPP
