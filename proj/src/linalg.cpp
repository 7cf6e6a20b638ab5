#include "drinfeld/linalg.hpp"

namespace drinfeld {

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::uint64_t result = 1, base = a % p;
    std::uint64_t e = p - 2;
    while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

} // namespace

std::vector<int> fp_rref(FpMatrix& a) {
    const std::uint64_t p = a.p;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < a.cols && row < a.rows; ++col) {
        int sel = -1;
        for (int r = row; r < a.rows; ++r)
            if (a(r, col) != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int c = 0; c < a.cols; ++c) std::swap(a(sel, c), a(row, c));
        const std::uint64_t s = inv_mod(a(row, col), a.p);
        for (int c = 0; c < a.cols; ++c) a(row, c) = static_cast<std::uint32_t>(a(row, c) * s % p);
        for (int r = 0; r < a.rows; ++r) {
            if (r == row || a(r, col) == 0) continue;
            const std::uint64_t f = a(r, col);
            for (int c = 0; c < a.cols; ++c)
                a(r, c) = static_cast<std::uint32_t>((a(r, c) + (p - f) * a(row, c)) % p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::vector<std::vector<std::uint32_t>> fp_kernel(FpMatrix a) {
    const auto pivots = fp_rref(a);
    std::vector<bool> is_pivot(a.cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<std::uint32_t>> basis;
    for (int free = 0; free < a.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint32_t> v(a.cols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            const std::uint32_t x = a(static_cast<int>(r), free);
            v[pivots[r]] = x == 0 ? 0 : a.p - x;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<std::uint32_t>> fp_solve(const FpMatrix& a, const std::vector<std::uint32_t>& b) {
    FpMatrix aug(a.p, a.rows, a.cols + 1);
    for (int r = 0; r < a.rows; ++r) {
        for (int c = 0; c < a.cols; ++c) aug(r, c) = a(r, c);
        aug(r, a.cols) = b[r] % a.p;
    }
    const auto pivots = fp_rref(aug);
    std::vector<std::uint32_t> x(a.cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == a.cols) return std::nullopt;
        x[pivots[r]] = aug(static_cast<int>(r), a.cols);
    }
    return x;
}

} // namespace drinfeld
