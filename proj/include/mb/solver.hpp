#pragma once

#include <optional>
#include <string>

#include "mb/extension.hpp"

namespace mb {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Certified face sign: `plus` means inf >= 0 on the face, `minus` sup <= 0;
/// `unknown` carries no claim.
enum class Sign { plus, minus, unknown };

const char* to_string(Sign s);

struct SignResult {
    Sign value = Sign::unknown;
    std::string diagnostic; // set when certification failed on an error
};

struct Face {
    enum class Side { low, high };
    Box box; // degenerate in fixed_dim
    std::size_t fixed_dim = 0;
    Side side = Side::low;
};

Face face_of(const Box& box, std::size_t dim, Face::Side side);

/// Sign certification along one face: mean-value refinement first, affine
/// refinement as fallback, unknown if neither bound is one-signed.
/// Evaluation errors certify nothing and are reported in the diagnostic.
SignResult posneg(const Expr& e, const Box& face_domain, int n_cells,
                  DerivMode mode = DerivMode::ad, Exec exec = Exec::serial);

/// System preconditioned by a constant matrix: components are M * F built as
/// expressions over the base system, so every evaluator applies unchanged.
/// The identity preconditioner reuses the base expressions directly.
struct PreconditionedSystem {
    const SystemDef* base = nullptr;
    Matrix m;
    bool is_identity = true;
    std::vector<Expr> components;
    std::vector<double> center_used;

    static PreconditionedSystem identity(const SystemDef& sys);
};

/// Rebuilds the preconditioner from the base system at center c:
/// M = DF(c)^-1 (the composition of successive preconditioners telescopes to
/// this, so recomputing from the base avoids error accumulation).
PreconditionedSystem precondition(const PreconditionedSystem& sys,
                                  const std::vector<double>& c);

/// Inverse by Gaussian elimination with partial pivoting; 2x2 uses the
/// closed form.  A pivot below 1e-12 * ||A||_inf is reported singular.
Matrix invert(const Matrix& a);

struct FaceSigns {
    SignResult low, high;
    bool opposite() const {
        return (low.value == Sign::plus && high.value == Sign::minus) ||
               (low.value == Sign::minus && high.value == Sign::plus);
    }
};

struct PmResult {
    bool holds = false;
    std::vector<FaceSigns> faces; // one entry per component
};

/// Opposite-sign test on every pair of opposite faces; any unknown fails.
PmResult pm_check(const PreconditionedSystem& sys, const Box& box, int n_cells,
                  DerivMode mode = DerivMode::ad, Exec exec = Exec::serial);

/// 2^n congruent subcubes split at the center; subcube index bit j = 0 picks
/// the low half of dimension j, so index 0 is the all-low corner.
std::vector<Box> refine_2n(const Box& box);

enum class Norm { inf, one, two };

double residual_norm(std::span<const double> v, Norm norm);

struct SolverConfig {
    double delta = 1e-15;
    int subdivisions = 3;
    Norm norm = Norm::two;
    /// Stall threshold: the scan counter starts at 1, gains one per pass in
    /// which no subcube certifies, and stops the run when it reaches this
    /// value (so the default 3 tolerates two failed passes over the run).
    int max_consecutive_failures = 3;
    int max_iterations = 1000;
    DerivMode derivative_mode = DerivMode::ad;
    Exec exec = Exec::parallel;
};

enum class SolveStatus { converged, bad_initial_box, stalled, iteration_cap };

const char* to_string(SolveStatus s);

struct IterationRecord {
    int k = 0;
    Box box;
    std::vector<double> center;
    double residual = 0.0;
    std::optional<int> chosen_subcube;
    bool preconditioned = false;
    std::vector<PmResult> sign_results; // per subcube, from the deciding scan
};

struct PreconditionEvent {
    int iteration = 0;
    std::vector<double> center;
    Matrix m;
    Box box;
};

struct SolveTrace {
    std::vector<IterationRecord> records;
    std::vector<PreconditionEvent> precondition_events;
};

struct SolveResult {
    SolveStatus status = SolveStatus::stalled;
    std::vector<double> root;
    double residual = 0.0;
    int iterations = 0;
    SolveTrace trace;
};

SolveResult solve(const SystemDef& sys, const Box& k0, const SolverConfig& cfg);

/// Theorem-style error bound sum_j (b_j0 - a_j0) / 2^k on ||c_k - r||_2.
double error_bound(const Box& k0, int k);

/// Smallest k with error_bound(k0, k) <= delta.
int required_iterations(const Box& k0, double delta);

} // namespace mb
