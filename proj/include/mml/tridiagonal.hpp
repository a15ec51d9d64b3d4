#pragma once

#include <cstddef>
#include <vector>

namespace mml {

// A x = rhs with A tridiagonal. Row i couples to i-1 via sub[i] and to i+1
// via super[i]; sub[0] and super[n-1] are ignored (keep them 0).
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    std::size_t size() const { return diag.size(); }
    void resize(std::size_t n) {
        sub.assign(n, 0.0);
        diag.assign(n, 0.0);
        super.assign(n, 0.0);
        rhs.assign(n, 0.0);
    }
};

// Thomas algorithm, valid without pivoting because every system assembled in
// this library is strictly diagonally dominant. Throws NumericalError if the
// input is empty, has mismatched lengths, or is not strictly dominant.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);

// Same, reusing caller-owned scratch/output buffers (hot loop form).
void solve_tridiagonal(const TridiagonalSystem& sys, std::vector<double>& scratch,
                       std::vector<double>& out);

} // namespace mml
