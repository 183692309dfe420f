#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace fairsample {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t i) {
        assert(i < rows);
        return data.data() + i * cols;
    }
    const double* row(std::size_t i) const {
        assert(i < rows);
        return data.data() + i * cols;
    }
    std::span<const double> row_span(std::size_t i) const {
        return {row(i), cols};
    }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    void push_row(std::span<const double> r) {
        assert(r.size() == cols || rows == 0);
        if (rows == 0 && cols == 0) cols = r.size();
        data.insert(data.end(), r.begin(), r.end());
        ++rows;
    }

    /// New matrix holding the given rows of this one, in the given order.
    Matrix take(std::span<const std::size_t> indices) const {
        Matrix out(indices.size(), cols);
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const double* src = row(indices[k]);
            std::copy(src, src + cols, out.row(k));
        }
        return out;
    }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace fairsample
