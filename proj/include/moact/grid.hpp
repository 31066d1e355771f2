#ifndef MOACT_GRID_HPP
#define MOACT_GRID_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace moact {

/// Dense row-major 2-D array. Row index first, column index second.
template <typename T>
class Grid {
public:
    Grid() = default;

    Grid(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
        assert(rows >= 0 && cols >= 0);
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t size() const noexcept { return data_.size(); }

    T& at(int row, int col) {
        assert(row >= 0 && row < rows_ && col >= 0 && col < cols_);
        return data_[static_cast<std::size_t>(row) * cols_ + col];
    }

    const T& at(int row, int col) const {
        assert(row >= 0 && row < rows_ && col >= 0 && col < cols_);
        return data_[static_cast<std::size_t>(row) * cols_ + col];
    }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    const std::vector<T>& data() const noexcept { return data_; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

} // namespace moact

#endif // MOACT_GRID_HPP
