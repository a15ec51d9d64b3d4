#include "mml/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "mml/errors.hpp"

namespace mml {

namespace {

void check_system(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    if (n == 0) throw NumericalError("tridiagonal: empty system");
    if (sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n)
        throw NumericalError("tridiagonal: band/rhs length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        if (i > 0) off += std::abs(sys.sub[i]);
        if (i + 1 < n) off += std::abs(sys.super[i]);
        if (!(sys.diag[i] > off))
            throw NumericalError("tridiagonal: row " + std::to_string(i) +
                                 " is not strictly diagonally dominant");
    }
}

} // namespace

void solve_tridiagonal(const TridiagonalSystem& sys, std::vector<double>& scratch,
                       std::vector<double>& out) {
    check_system(sys);
    const std::size_t n = sys.size();
    scratch.resize(n);
    out.resize(n);

    // Forward sweep: scratch holds the modified superdiagonal, out the
    // modified rhs. Dominance keeps every pivot positive.
    double pivot = sys.diag[0];
    scratch[0] = sys.super[0] / pivot;
    out[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.sub[i] * scratch[i - 1];
        scratch[i] = sys.super[i] / pivot;
        out[i] = (sys.rhs[i] - sys.sub[i] * out[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] -= scratch[i] * out[i + 1];
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    std::vector<double> scratch, out;
    solve_tridiagonal(sys, scratch, out);
    return out;
}

} // namespace mml
