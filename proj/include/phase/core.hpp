#pragma once

// Shared domain types: ambient spaces, generator sets, the regularity
// category lattice, tolerance configuration, and the verdict/witness model
// used by every classifier.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace phase {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors

enum class ErrorCode {
    NonFinite,
    ZeroEigenvalue,
    ZeroGenerator,
    Singular,
    PoleHit,
    StepUnderflow,
    TorusNonFlat,
    ChartOverflow,
    SpaceMismatch,
    InvalidInput,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Spaces

enum class SpaceKind {
    ComplexLinear,     // C^n, linear actions
    ComplexProjective, // CP^n, linear-fractional actions, matrices (n+1)x(n+1)
    RealLinear,        // R^n, linear actions
    RealMobius,        // extended real line, Mobius actions, 2x2 real matrices
};

struct Space {
    SpaceKind kind = SpaceKind::ComplexLinear;
    int n = 1; // geometric dimension; matrix size is n, n+1, n, 2 respectively

    int matrix_size() const;
    bool is_real() const { return kind == SpaceKind::RealLinear || kind == SpaceKind::RealMobius; }
    bool is_projective() const {
        return kind == SpaceKind::ComplexProjective || kind == SpaceKind::RealMobius;
    }
    bool operator==(const Space& o) const { return kind == o.kind && n == o.n; }
};

Space complex_linear(int n);
Space complex_projective(int n);
Space real_linear(int n);
Space real_mobius();

std::string to_string(SpaceKind kind);

// ---------------------------------------------------------------------------
// Regularity categories

enum class Category { Topological, Smooth, RHolomorphic, Holomorphic };

std::string to_string(Category c);

// Pure lattice: Holomorphic => {Smooth, RHolomorphic} => Topological.
bool category_implies(Category a, Category b);

// Space-aware order: on complex spaces Smooth and RHolomorphic are decided
// identically, so they imply each other there.
bool category_implies(Category a, Category b, const Space& space);

// ---------------------------------------------------------------------------
// Tolerances

struct ToleranceConfig {
    double eig_rel = 1e-9;    // relative eigenvalue comparisons
    double det_floor = 1e-12; // invertibility floor
    double residual = 1e-9;   // witness-verification residual bound
    double ode_rel = 1e-12;   // integrator relative tolerance
    int s_max = 32;           // bound for the simple-collection predicate
    int k_max = 64;           // branch-search bound for complex exponents
    int samples = 256;        // witness sample count
    std::uint64_t seed = 0;

    void validate() const;
};

// Seeded RNG helper; every randomized routine derives its stream from
// (seed, stream tag) so runs are reproducible and independent of call order.
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream);

// ---------------------------------------------------------------------------
// Generator sets

struct GeneratorSet {
    Space space;
    std::vector<CMat> generators; // real spaces keep imaginary parts ~0
    std::vector<std::string> labels;

    int count() const { return static_cast<int>(generators.size()); }
    int matrix_size() const { return space.matrix_size(); }

    // Throws Error on size/realness/invertibility violations.
    void validate(const ToleranceConfig& tol) const;

    // Scale-normalized representative for projective spaces (det-normalized);
    // returns the generator unchanged on linear spaces.
    CMat normalized_generator(int r) const;
};

bool is_abelian(const GeneratorSet& g, const ToleranceConfig& tol);

// Projective-aware commutation test for a single pair.
bool matrices_commute(const CMat& a, const CMat& b, const Space& space, const ToleranceConfig& tol);

// ---------------------------------------------------------------------------
// Witnesses

// f(w) = T * xi(S^{-1} w) with xi_{perm[k]}(w) = gamma_k * c(w_k) |w_k|^{alpha_k},
// where c is conjugation when conj is set. With `projective`, the same formula
// acts on homogeneous coordinates (all alphas equal).
struct DiagPowerWitness {
    CMat S;
    CMat T;
    std::vector<int> perm;    // xi_{perm[k]} reads coordinate k
    std::vector<cplx> alphas; // one exponent per coordinate
    bool conj = false;
    std::vector<cplx> gammas;
    bool projective = false;
    bool swapped_fixed_points = false; // CP^1 / Mobius bookkeeping (Re alpha < -1)
};

// w -> S w, or S conj(w) when conj is set; projective acts on homogeneous
// coordinates.
struct LinearMapWitness {
    CMat S;
    bool conj = false;
    bool projective = false;
};

// w -> A w + B conj(w); invertibility refers to the realified 2n x 2n matrix.
struct RLinearMapWitness {
    CMat A;
    CMat B;
};

// Mobius action of an invertible real 2x2 matrix on the extended real line.
struct MobiusMapWitness {
    RMat S;
    bool conj = false; // orientation flag, mirrors det sign
};

// Circle chart t = 2 arctan x: t -> sign * t + shift, framed by Mobius maps
// of the normalizers S (source) and T (target).
struct CircleMapWitness {
    int sign = 1;
    double shift = 0.0;
    RMat S = RMat::Identity(2, 2);
    RMat T = RMat::Identity(2, 2);
};

// Composite real homeomorphism: a chain of linear steps and in-place block
// power layers, applied left to right. A 1-dim block acts as x |x|^{Re alpha},
// a 2-dim block as z |z|^alpha (optionally conjugated) on z = x_off + i x_{off+1}.
struct CanonicalChainWitness {
    struct Block {
        int offset = 0;
        int dim = 1;
        cplx alpha{0.0, 0.0};
        bool conj = false;
    };
    using PowerLayer = std::vector<Block>;
    using Step = std::variant<RMat, PowerLayer>;
    std::vector<Step> steps;
};

struct Witness;

// Morphism-level witness: injective generator-index map plus the pairwise
// witness for the matched sub-family. `inverted[r]` marks targets entering
// through their inverse (orientation-reversing base maps invert loops).
struct IndexMapWitness {
    std::vector<int> mapping; // source index r -> target index mapping[r]
    std::vector<bool> inverted;
    std::shared_ptr<Witness> inner;
};

struct Witness {
    std::variant<DiagPowerWitness, LinearMapWitness, RLinearMapWitness, MobiusMapWitness,
                 CircleMapWitness, CanonicalChainWitness, IndexMapWitness>
        value;

    template <class T> bool is() const { return std::holds_alternative<T>(value); }
    template <class T> const T& as() const { return std::get<T>(value); }
};

// ---------------------------------------------------------------------------
// Verdicts

enum class Status { Equivalent, NotEquivalent, Inconclusive };

std::string to_string(Status s);

struct ResidualReport {
    double max_residual = 0.0;
    int samples = 0;
};

struct Verdict {
    Status status = Status::Inconclusive;
    Category category = Category::Topological;
    std::string relation;       // equivalence / embedding / covering when set
    std::optional<Witness> witness;
    std::string reason;         // populated for NotEquivalent
    std::string unmet_premise;  // populated for Inconclusive
    std::optional<ResidualReport> residual_report;
    std::uint64_t seed = 0;
    // Recovered scalar parameters (alpha, lambda, sign, ...) for reporting.
    std::vector<std::pair<std::string, cplx>> details;

    bool equivalent() const { return status == Status::Equivalent; }

    static Verdict not_equivalent(Category cat, std::string why);
    static Verdict inconclusive(Category cat, std::string premise);
};

} // namespace phase
