#ifndef MOACT_FRAME_HPP
#define MOACT_FRAME_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "moact/error.hpp"

namespace moact {

/// Single 8-bit luma plane with its temporal index in the source.
class Frame {
public:
    static constexpr int kMinDimension = 16;

    Frame(int index, int width, int height, std::vector<std::uint8_t> luma)
        : index_(index), width_(width), height_(height), luma_(std::move(luma)) {
        if (width_ < kMinDimension || height_ < kMinDimension)
            raise(Errc::frame_too_small,
                  "frame is " + std::to_string(width_) + "x" + std::to_string(height_) +
                      ", minimum is " + std::to_string(kMinDimension) + "x" +
                      std::to_string(kMinDimension));
        if (luma_.size() != plane_size())
            raise(Errc::dimension_mismatch,
                  "luma plane has " + std::to_string(luma_.size()) + " samples, expected " +
                      std::to_string(plane_size()));
    }

    int index() const noexcept { return index_; }
    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    const std::vector<std::uint8_t>& luma() const noexcept { return luma_; }

    std::uint8_t sample(int x, int y) const {
        return luma_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    friend bool operator==(const Frame& a, const Frame& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.luma_ == b.luma_;
    }

private:
    int index_;
    int width_;
    int height_;
    std::vector<std::uint8_t> luma_;
};

} // namespace moact

#endif // MOACT_FRAME_HPP
