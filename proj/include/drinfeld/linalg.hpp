#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace drinfeld {

// Dense matrices over the prime field F_p, row-major. Used for kernels of
// F_p-linear maps (roots of q-polynomials) and for inverting embeddings.
struct FpMatrix {
    std::uint32_t p = 2;
    int rows = 0;
    int cols = 0;
    std::vector<std::uint32_t> data;

    FpMatrix() = default;
    FpMatrix(std::uint32_t prime, int r, int c)
        : p(prime), rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

    std::uint32_t& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::uint32_t operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Reduced row echelon form in place; returns the pivot column of each
// nonzero row.
std::vector<int> fp_rref(FpMatrix& a);

// Basis of {v : A v = 0}.
std::vector<std::vector<std::uint32_t>> fp_kernel(FpMatrix a);

// Some solution of A v = b, if one exists.
std::optional<std::vector<std::uint32_t>> fp_solve(const FpMatrix& a, const std::vector<std::uint32_t>& b);

} // namespace drinfeld
