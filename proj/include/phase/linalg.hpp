#pragma once

// Numerical kernels the classifiers rest on: eigendecomposition with a
// deterministic eigenvalue order, simultaneous diagonalization of commuting
// families, real Jordan block data, spectral predicates, and intertwiner
// (Sylvester nullspace) solvers.

#include "phase/core.hpp"

#include <span>

namespace phase {

struct SpectralForm {
    std::vector<cplx> eigenvalues; // sorted lexicographically by (Re, Im)
    CMat transform;                // M = S diag S^{-1} when diagonalizable
    bool diagonalizable = true;
    double condition_estimate = 1.0;
};

SpectralForm eig_decompose(const CMat& m, const ToleranceConfig& tol);

// Common eigenbasis of a commuting family. Eigenvalue column k of every
// member shares eigenvector k. Absent when the family fails to commute or a
// member is defective.
struct SimultaneousDiag {
    CMat transform;
    std::vector<std::vector<cplx>> eigenvalues; // [member][column]
};
std::optional<SimultaneousDiag> simultaneous_diagonalize(std::span<const CMat> family,
                                                         const ToleranceConfig& tol);

struct RealJordanForm {
    struct Block {
        enum class Kind { RealEigen, RotationPair, JordanCell } kind;
        double real_eigen = 0.0; // RealEigen / JordanCell eigenvalue
        double rot_a = 0.0;      // RotationPair [[a, b], [-b, a]]
        double rot_b = 0.0;
        int size = 1;
        double modulus() const;
    };
    std::vector<Block> blocks; // stable real, stable rotation, unit, unstable real, unstable rotation
    RMat transform;            // real similarity to the block form (defective clusters best-effort)
    int stable_dim = 0;
    int unstable_dim = 0;
    double det_stable = 1.0;
    double det_unstable = 1.0;
};

RealJordanForm real_jordan_form(const RMat& m, const ToleranceConfig& tol);

// Ratio test of the paper's genericity premise: no ratio of two collection
// members is a natural number <= s_max or its reciprocal.
bool is_simple_collection(std::span<const cplx> lambdas, int s_max, double tol);

// Pairwise distinct eigenvalues, none of unit modulus.
bool is_strongly_hyperbolic(const RMat& m, const ToleranceConfig& tol);

// Orthonormal basis of {S : S P_r = Q_r S for all r}; with `conjugate`,
// of {S : S conj(P_r) = Q_r S for all r}. `real_solutions` restricts to real
// matrices S (inputs must be real).
std::vector<CMat> intertwiner_space(std::span<const CMat> ps, std::span<const CMat> qs,
                                    bool conjugate, const ToleranceConfig& tol,
                                    bool real_solutions = false);

// Invertible member of span(basis) found by seeded random combinations; the
// determinant is a polynomial on the span, so it vanishes identically or
// almost nowhere. A common left/right kernel across the basis certifies
// degeneracy deterministically.
std::optional<CMat> contains_invertible(std::span<const CMat> basis, const ToleranceConfig& tol,
                                        std::uint64_t seed);

// True when x is within tol of a rational p/q with 1 <= q <= q_max.
bool near_rational(double x, int q_max, double tol);

} // namespace phase
