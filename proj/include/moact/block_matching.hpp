#ifndef MOACT_BLOCK_MATCHING_HPP
#define MOACT_BLOCK_MATCHING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "moact/error.hpp"
#include "moact/frame.hpp"
#include "moact/grid.hpp"

namespace moact {

struct MotionVector {
    int x = 0;
    int y = 0;

    friend bool operator==(MotionVector a, MotionVector b) { return a.x == b.x && a.y == b.y; }
};

/// Macroblock partition of a frame. The right/bottom remainder that does not
/// fill a whole block is cropped from the grid.
struct BlockGridSpec {
    int block_size = 16;
    int search_range = 7; // max displacement magnitude per axis
    int cols = 0;         // M, blocks per row
    int rows = 0;         // N, blocks per column

    static BlockGridSpec fit(int width, int height, int block_size = 16, int search_range = 7) {
        if (block_size < 4)
            raise(Errc::invalid_argument,
                  "block size " + std::to_string(block_size) + " is below the minimum of 4");
        if (search_range < 1)
            raise(Errc::invalid_argument, "search range must be at least 1");
        BlockGridSpec spec;
        spec.block_size = block_size;
        spec.search_range = search_range;
        spec.cols = width / block_size;
        spec.rows = height / block_size;
        if (spec.cols < 1 || spec.rows < 1)
            raise(Errc::frame_too_small,
                  std::to_string(width) + "x" + std::to_string(height) +
                      " admits no complete " + std::to_string(block_size) + "x" +
                      std::to_string(block_size) + " block");
        return spec;
    }

    int usable_width() const noexcept { return cols * block_size; }
    int usable_height() const noexcept { return rows * block_size; }
};

struct MotionVectorField {
    BlockGridSpec spec;
    Grid<MotionVector> vectors;        // rows x cols
    Grid<std::uint32_t> cost;          // final SAD per block
    Grid<std::uint32_t> search_points; // candidates evaluated per block
};

struct SearchStats {
    double avg_search_points = 0.0;
    std::uint64_t total_sad = 0;
};

/// Stage-1 rood arm length: max coordinate magnitude of the predicted motion
/// vector, or 2 when the predictor is the zero vector.
inline int arps_rood_size(MotionVector predicted) {
    if (predicted.x == 0 && predicted.y == 0)
        return 2;
    return std::max(std::abs(predicted.x), std::abs(predicted.y));
}

namespace detail {

inline void require_same_dimensions(const Frame& a, const Frame& b) {
    if (a.width() != b.width() || a.height() != b.height())
        raise(Errc::dimension_mismatch,
              std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                  std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

inline void require_spec_fits(const BlockGridSpec& spec, const Frame& frame) {
    if (spec.cols < 1 || spec.rows < 1)
        raise(Errc::frame_too_small, "grid has no blocks");
    if (spec.cols != frame.width() / spec.block_size ||
        spec.rows != frame.height() / spec.block_size)
        raise(Errc::dimension_mismatch,
              "grid " + std::to_string(spec.cols) + "x" + std::to_string(spec.rows) +
                  " does not partition a " + std::to_string(frame.width()) + "x" +
                  std::to_string(frame.height()) + " frame");
}

inline std::uint32_t block_sad(const Frame& current, const Frame& reference, int bx, int by,
                               int cx, int cy, int block_size) {
    const std::uint8_t* cur = current.luma().data();
    const std::uint8_t* ref = reference.luma().data();
    const int width = current.width();
    std::uint32_t sad = 0;
    for (int v = 0; v < block_size; ++v) {
        const std::uint8_t* cur_row = cur + static_cast<std::size_t>(by + v) * width + bx;
        const std::uint8_t* ref_row = ref + static_cast<std::size_t>(cy + v) * width + cx;
        for (int u = 0; u < block_size; ++u)
            sad += static_cast<std::uint32_t>(std::abs(int(cur_row[u]) - int(ref_row[u])));
    }
    return sad;
}

// Total order over candidates: lowest SAD, then smallest |x|+|y|, then
// smallest y, then smallest x. Zero motion wins all-tie cases.
struct Candidate {
    MotionVector mv;
    std::uint32_t sad = std::numeric_limits<std::uint32_t>::max();

    bool better_than(const Candidate& other) const {
        if (sad != other.sad)
            return sad < other.sad;
        int m = std::abs(mv.x) + std::abs(mv.y);
        int om = std::abs(other.mv.x) + std::abs(other.mv.y);
        if (m != om)
            return m < om;
        if (mv.y != other.mv.y)
            return mv.y < other.mv.y;
        return mv.x < other.mv.x;
    }
};

// Candidate block must lie fully inside the reference frame.
inline bool candidate_in_frame(const Frame& reference, int bx, int by, MotionVector mv,
                               int block_size) {
    int cx = bx + mv.x;
    int cy = by + mv.y;
    return cx >= 0 && cy >= 0 && cx + block_size <= reference.width() &&
           cy + block_size <= reference.height();
}

} // namespace detail

/// Full-window search: exact SAD minimizer over all in-bounds displacements
/// within +/-search_range. The oracle the fast search is judged against.
inline MotionVectorField exhaustive_search(const Frame& current, const Frame& reference,
                                           const BlockGridSpec& spec) {
    detail::require_same_dimensions(current, reference);
    detail::require_spec_fits(spec, current);

    MotionVectorField field;
    field.spec = spec;
    field.vectors = Grid<MotionVector>(spec.rows, spec.cols);
    field.cost = Grid<std::uint32_t>(spec.rows, spec.cols);
    field.search_points = Grid<std::uint32_t>(spec.rows, spec.cols);

    const int bs = spec.block_size;
    const int p = spec.search_range;
    for (int i = 0; i < spec.rows; ++i) {
        for (int j = 0; j < spec.cols; ++j) {
            const int bx = j * bs;
            const int by = i * bs;
            detail::Candidate best;
            std::uint32_t evaluated = 0;
            for (int dy = -p; dy <= p; ++dy) {
                for (int dx = -p; dx <= p; ++dx) {
                    MotionVector mv{dx, dy};
                    if (!detail::candidate_in_frame(reference, bx, by, mv, bs))
                        continue;
                    detail::Candidate cand{mv, detail::block_sad(current, reference, bx, by,
                                                                 bx + dx, by + dy, bs)};
                    ++evaluated;
                    if (cand.better_than(best))
                        best = cand;
                }
            }
            field.vectors.at(i, j) = best.mv;
            field.cost.at(i, j) = best.sad;
            field.search_points.at(i, j) = evaluated;
        }
    }
    return field;
}

/// Adaptive rood pattern search. Predicts each block's motion from the block
/// to its immediate left, probes a rood of adaptive arm length plus the
/// predicted point, then refines with a unit rood until the best candidate
/// stays at the center. Candidates are never scored twice.
inline MotionVectorField arps_search(const Frame& current, const Frame& reference,
                                     const BlockGridSpec& spec) {
    detail::require_same_dimensions(current, reference);
    detail::require_spec_fits(spec, current);

    MotionVectorField field;
    field.spec = spec;
    field.vectors = Grid<MotionVector>(spec.rows, spec.cols);
    field.cost = Grid<std::uint32_t>(spec.rows, spec.cols);
    field.search_points = Grid<std::uint32_t>(spec.rows, spec.cols);

    const int bs = spec.block_size;
    const int p = spec.search_range;
    const int window = 2 * p + 1;
    // visited marks per window cell, reset per block
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(window) * window);
    auto visit_index = [=](MotionVector mv) {
        return static_cast<std::size_t>(mv.y + p) * window + (mv.x + p);
    };
    constexpr int kMaxRefinementRounds = 64; // unreachable in practice

    for (int i = 0; i < spec.rows; ++i) {
        for (int j = 0; j < spec.cols; ++j) {
            const int bx = j * bs;
            const int by = i * bs;
            std::fill(visited.begin(), visited.end(), 0);
            detail::Candidate best;
            std::uint32_t evaluated = 0;

            auto probe = [&](MotionVector mv) {
                if (std::abs(mv.x) > p || std::abs(mv.y) > p)
                    return;
                if (!detail::candidate_in_frame(reference, bx, by, mv, bs))
                    return;
                auto idx = visit_index(mv);
                if (visited[idx])
                    return;
                visited[idx] = 1;
                detail::Candidate cand{mv, detail::block_sad(current, reference, bx, by,
                                                             bx + mv.x, by + mv.y, bs)};
                ++evaluated;
                if (cand.better_than(best))
                    best = cand;
            };

            MotionVector predicted = (j > 0) ? field.vectors.at(i, j - 1) : MotionVector{};
            const int arm = arps_rood_size(predicted);
            probe({0, 0});
            probe({arm, 0});
            probe({-arm, 0});
            probe({0, arm});
            probe({0, -arm});
            probe(predicted);

            for (int round = 0; round < kMaxRefinementRounds; ++round) {
                MotionVector center = best.mv;
                probe({center.x + 1, center.y});
                probe({center.x - 1, center.y});
                probe({center.x, center.y + 1});
                probe({center.x, center.y - 1});
                if (best.mv == center)
                    break;
            }

            field.vectors.at(i, j) = best.mv;
            field.cost.at(i, j) = best.sad;
            field.search_points.at(i, j) = evaluated;
        }
    }
    return field;
}

/// Rebuilds a frame by displacing each reference block along its motion
/// vector. Cropped margins are copied from the reference unchanged.
inline Frame motion_compensate(const Frame& reference, const MotionVectorField& field) {
    detail::require_spec_fits(field.spec, reference);

    std::vector<std::uint8_t> out = reference.luma(); // margins keep reference content
    const int bs = field.spec.block_size;
    const int width = reference.width();
    for (int i = 0; i < field.spec.rows; ++i) {
        for (int j = 0; j < field.spec.cols; ++j) {
            const int bx = j * bs;
            const int by = i * bs;
            MotionVector mv = field.vectors.at(i, j);
            if (!detail::candidate_in_frame(reference, bx, by, mv, bs))
                raise(Errc::dimension_mismatch,
                      "vector (" + std::to_string(mv.x) + "," + std::to_string(mv.y) +
                          ") reads outside the reference frame");
            for (int v = 0; v < bs; ++v) {
                const std::uint8_t* src =
                    reference.luma().data() + static_cast<std::size_t>(by + mv.y + v) * width +
                    (bx + mv.x);
                std::uint8_t* dst = out.data() + static_cast<std::size_t>(by + v) * width + bx;
                std::copy(src, src + bs, dst);
            }
        }
    }
    return Frame(reference.index(), reference.width(), reference.height(), std::move(out));
}

/// 10*log10(255^2 / MSE) in decibels; +infinity when the planes are identical.
inline double psnr(const Frame& a, const Frame& b) {
    detail::require_same_dimensions(a, b);
    const auto& pa = a.luma();
    const auto& pb = b.luma();
    std::uint64_t sse = 0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
        int d = int(pa[k]) - int(pb[k]);
        sse += static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
    }
    if (sse == 0)
        return std::numeric_limits<double>::infinity();
    double mse = static_cast<double>(sse) / static_cast<double>(pa.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

inline SearchStats search_stats(const MotionVectorField& field) {
    SearchStats stats;
    if (field.search_points.empty())
        return stats;
    std::uint64_t points = 0;
    for (auto n : field.search_points)
        points += n;
    for (auto c : field.cost)
        stats.total_sad += c;
    stats.avg_search_points = static_cast<double>(points) /
                              static_cast<double>(field.search_points.size());
    return stats;
}

} // namespace moact

#endif // MOACT_BLOCK_MATCHING_HPP
