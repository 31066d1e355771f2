#ifndef MOACT_SHOT_DETECTOR_HPP
#define MOACT_SHOT_DETECTOR_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "moact/error.hpp"
#include "moact/frame_io.hpp"
#include "moact/motion_activity.hpp"

namespace moact {

struct TimelineSample {
    int start = 0; // reference frame index t
    int end = 0;   // current frame index t + step
    ActivityDescriptor activity;
};

/// Motion-intensity signal sampled every `stride` frames, each sample
/// describing the pair (t, t + step).
struct IntensityTimeline {
    int step = 2;
    int stride = 2;
    int frame_count = 0;
    std::vector<TimelineSample> samples;
};

struct DiffPoint {
    int t = 0;       // start frame of the later sample
    double value = 0.0; // |sigma_k - sigma_{k-1}|
};

struct DiffSignal {
    std::vector<DiffPoint> points;
};

struct Shot {
    int start = 0;
    int end = 0; // inclusive
    int key_frame = 0;
};

struct ShotList {
    std::vector<int> boundaries; // frame indices where a new shot begins
    std::vector<Shot> shots;
    double threshold_used = 0.0;
};

struct ThresholdPolicy {
    enum class Mode { fixed, adaptive };

    Mode mode = Mode::adaptive;
    double fixed_value = 0.0;
    double alpha = 3.0;
    int min_shot_gap = 8;

    static ThresholdPolicy fixed(double value, int min_shot_gap = 8) {
        if (value < 0.0)
            raise(Errc::invalid_argument, "fixed threshold must be >= 0");
        if (min_shot_gap < 1)
            raise(Errc::invalid_argument, "min shot gap must be >= 1");
        ThresholdPolicy p;
        p.mode = Mode::fixed;
        p.fixed_value = value;
        p.min_shot_gap = min_shot_gap;
        return p;
    }

    static ThresholdPolicy adaptive(double alpha = 3.0, int min_shot_gap = 8) {
        if (alpha <= 0.0)
            raise(Errc::invalid_argument, "adaptive alpha must be > 0");
        if (min_shot_gap < 1)
            raise(Errc::invalid_argument, "min shot gap must be >= 1");
        ThresholdPolicy p;
        p.mode = Mode::adaptive;
        p.alpha = alpha;
        p.min_shot_gap = min_shot_gap;
        return p;
    }
};

/// Samples the motion-intensity signal over the whole source. Pair k covers
/// frames (t, t + step) with t = k * stride; stride 0 means stride = step
/// (disjoint pairs, the default reading).
inline IntensityTimeline build_timeline(const SourceDescriptor& source,
                                        const BlockGridSpec& spec, int step = 2, int stride = 0,
                                        bool filter = false, SearchAlgo algo = SearchAlgo::arps) {
    if (step < 1)
        raise(Errc::invalid_argument, "step must be >= 1");
    if (stride == 0)
        stride = step;
    if (stride < 1)
        raise(Errc::invalid_argument, "stride must be >= 1");
    if (source.frame_count <= step)
        raise(Errc::too_few_frames,
              "need more than " + std::to_string(step) + " frames, source has " +
                  std::to_string(source.frame_count));

    IntensityTimeline timeline;
    timeline.step = step;
    timeline.stride = stride;
    timeline.frame_count = source.frame_count;

    std::optional<Frame> cached;
    for (int t = 0; t + step < source.frame_count; t += stride) {
        Frame reference = (cached && cached->index() == t) ? std::move(*cached)
                                                           : read_frame(source, t);
        Frame current = read_frame(source, t + step);
        TimelineSample sample;
        sample.start = t;
        sample.end = t + step;
        sample.activity = describe_pair(current, reference, spec, filter, algo);
        timeline.samples.push_back(std::move(sample));
        cached = std::move(current);
    }
    return timeline;
}

/// Absolute difference of successive intensities, stamped with the start
/// frame of the later sample.
inline DiffSignal diff_signal(const IntensityTimeline& timeline) {
    if (timeline.samples.size() < 2)
        raise(Errc::too_few_samples,
              "need at least 2 samples, timeline has " +
                  std::to_string(timeline.samples.size()));
    DiffSignal signal;
    signal.points.reserve(timeline.samples.size() - 1);
    for (std::size_t k = 1; k < timeline.samples.size(); ++k) {
        DiffPoint point;
        point.t = timeline.samples[k].start;
        point.value = std::abs(timeline.samples[k].activity.intensity -
                               timeline.samples[k - 1].activity.intensity);
        signal.points.push_back(point);
    }
    return signal;
}

/// Fixed mode passes the configured value through; adaptive mode returns
/// mean(d) + alpha * population-stddev(d).
inline double resolve_threshold(const DiffSignal& signal, const ThresholdPolicy& policy) {
    if (policy.mode == ThresholdPolicy::Mode::fixed)
        return policy.fixed_value;
    if (signal.points.empty())
        raise(Errc::empty_signal, "adaptive threshold needs a non-empty diff signal");
    double mean = 0.0;
    for (const auto& p : signal.points)
        mean += p.value;
    mean /= static_cast<double>(signal.points.size());
    double var = 0.0;
    for (const auto& p : signal.points) {
        double d = p.value - mean;
        var += d * d;
    }
    var /= static_cast<double>(signal.points.size());
    return mean + policy.alpha * std::sqrt(var);
}

/// Thresholds the diff signal into a shot partition. A point with d > threshold
/// proposes a boundary at its frame t; proposals closer than min_shot_gap to
/// the previous accepted boundary merge into it, the larger difference winning
/// (earliest on tie). The first shot always starts at frame 0 and each shot's
/// key frame is its first frame.
inline ShotList detect_shots(const DiffSignal& signal, double threshold,
                             const ThresholdPolicy& policy, int frame_count) {
    if (threshold < 0.0)
        raise(Errc::invalid_argument, "threshold must be >= 0");
    if (frame_count < 1)
        raise(Errc::invalid_argument, "frame count must be >= 1");

    struct Proposal {
        int t;
        double d;
    };
    std::vector<Proposal> accepted;
    for (const auto& point : signal.points) {
        if (!(point.value > threshold))
            continue;
        if (point.t <= 0 || point.t >= frame_count)
            continue;
        if (!accepted.empty() && point.t - accepted.back().t < policy.min_shot_gap) {
            if (point.value > accepted.back().d) // tie keeps the earlier proposal
                accepted.back() = {point.t, point.value};
        } else {
            accepted.push_back({point.t, point.value});
        }
    }

    ShotList list;
    list.threshold_used = threshold;
    for (const auto& prop : accepted)
        list.boundaries.push_back(prop.t);

    int start = 0;
    for (int boundary : list.boundaries) {
        list.shots.push_back({start, boundary - 1, start});
        start = boundary;
    }
    list.shots.push_back({start, frame_count - 1, start});
    return list;
}

} // namespace moact

#endif // MOACT_SHOT_DETECTOR_HPP
