#pragma once

// Builds generator sets from differential-system specifications: closed-form
// generators for scalar equations with pole coefficients, numerically
// integrated fundamental-matrix transports over the punctured plane, the
// cylinder and the torus, and the Riccati-to-linear lift.

#include "phase/core.hpp"

namespace phase {

enum class BaseKind { PuncturedPlane, Cylinder, Torus };

std::string to_string(BaseKind k);

struct PoleTerm {
    int order = 1; // l >= 1, coefficient of (z - z_r)^{-l}
    CMat coeff;
};

struct Pole {
    cplx location;
    std::vector<PoleTerm> terms;
};

struct FourierTerm {
    int frequency = 0; // coefficient of exp(2 pi i k z)
    CMat coeff;
};

struct FuchsianSystemSpec {
    int dimension = 1;
    BaseKind base_kind = BaseKind::PuncturedPlane;
    cplx base_point{2.0, 0.0};
    std::vector<Pole> poles;           // punctured plane
    std::vector<FourierTerm> fourier;  // cylinder / torus
    bool projectivize = false;         // phase group acts on CP^{n-1} (Riccati lift)
    bool real_form = false;            // generators expected real (real Riccati on the cylinder)

    void validate(const ToleranceConfig& tol) const;
};

// Scalar Riccati data: x' = a2(z) x^2 + a1(z) x + a0(z), each coefficient a
// scalar pole/Fourier expansion on the shared base.
struct RiccatiSpec {
    struct ScalarCoeff {
        std::vector<Pole> poles;          // 1x1 coefficient matrices
        std::vector<FourierTerm> fourier; // 1x1 coefficient matrices
    };
    BaseKind base_kind = BaseKind::PuncturedPlane;
    cplx base_point{2.0, 0.0};
    ScalarCoeff a2, a1, a0;
    // Phase group on the extended real line instead of CP^1; inferred from
    // real cylinder data when unset.
    std::optional<bool> real_override;
};

CMat evaluate_coefficient(const FuchsianSystemSpec& spec, cplx z);

// Piecewise integration path: straight segments and circular arcs.
struct PathPiece {
    enum class Kind { Segment, Arc } kind = Kind::Segment;
    cplx from, to;      // Segment
    cplx center;        // Arc
    double radius = 0;  // Arc
    double angle_from = 0, angle_to = 0; // Arc, radians, signed sweep
};
using Path = std::vector<PathPiece>;

struct IntegrationStats {
    long accepted_steps = 0;
    long rejected_steps = 0;
};

// Fundamental-matrix transport of dW/dz = A(z) W, W(start) = I, along the
// path; for a closed loop this is the monodromy generator.
CMat integrate_loop(const FuchsianSystemSpec& spec, const Path& path, const ToleranceConfig& tol,
                    IntegrationStats* stats = nullptr);

// Loop around pole r in the deterministic geometry (clearance circles with
// straight connectors detoured around intervening poles), poles indexed in
// lexicographic (Re, Im) order.
Path loop_around_pole(const FuchsianSystemSpec& spec, int pole_index);

struct PhaseGroupResult {
    GeneratorSet generators;
    IntegrationStats stats;
};

PhaseGroupResult phase_group(const FuchsianSystemSpec& spec, const ToleranceConfig& tol);

// Closed form for n = 1 over the punctured plane: exp(2 pi i Lambda_{r,1})
// per pole; higher-order terms do not contribute.
GeneratorSet scalar_fuchsian_generators(const FuchsianSystemSpec& spec);

// 2x2 homogeneous linear spec whose projectivized flow solves the Riccati
// equation; the lift matrix is [[a1/2, a0], [-a2, -a1/2]].
FuchsianSystemSpec riccati_lift(const RiccatiSpec& spec);

} // namespace phase
