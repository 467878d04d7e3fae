#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shfront/amplitude.hpp"
#include "shfront/equilibria.hpp"

namespace shfront {

enum class TraceStatus { Completed, Converged, Escaped, Diverged, Timeout };

std::string to_string(TraceStatus s);

struct OrbitTrace {
    SystemVariant variant = SystemVariant::HexGeneric;
    std::vector<double> xi;
    std::vector<Eigen::VectorXd> states;
    std::vector<double> energies;
    TraceStatus status = TraceStatus::Completed;
    std::string source_branch;  // optional labels
    std::string target_branch;
    std::vector<double> source_amplitudes, target_amplitudes;
    std::map<std::string, double> min_distances;  // branch label -> min distance
    std::vector<std::string> plateau_visits;      // intermediate equilibria passed closely
    bool persistent = false;  // transversality proxy: full-dimensional stable target

    const Eigen::VectorXd& back() const { return states.back(); }
};

struct IntegrateOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    /// Energy drop between consecutive recorded nodes (dense-output
    /// subdivision keeps nodes-per-unit-H >= 1/max_dh_per_node).
    double max_dh_per_node = 0.005;
    double initial_step = 1e-3;
};

struct StopSpec {
    Eigen::VectorXd target;
    double converge_radius = 1e-6;
    double escape_radius = 1e6;
};

/// Integrates the reduced system with a Dormand-Prince 5(4) pair under PI
/// step control, recording xi, state and energy at every node. Status reports
/// span completion, convergence/escape against `stop`, or step-size underflow
/// (`Diverged`, last state kept).
OrbitTrace integrate(const AmplitudeSystem& sys, const Eigen::VectorXd& y0, double xi_end,
                     const IntegrateOptions& opt, const StopSpec* stop = nullptr);

/// Orthonormal basis of the unstable eigenspace of the spatial linearisation
/// about the equilibrium with the given amplitudes. Throws
/// MarginalSpectrumError on marginal spectra.
Eigen::MatrixXd unstable_frame(std::span<const double> amplitudes, const AmplitudeSystem& sys);

struct ShootConfig {
    double eps_shoot = 1e-4;
    int seed_density = 64;        // seeds on the unit sphere of the unstable frame
    double converge_radius = 1e-6;
    double plateau_radius = 0.05;
    double escape_radius = -1.0;  // < 0: 10*|source| + 10
    double xi_max = -1.0;         // < 0: 500/c0
    double rtol = 1e-10;
    double atol = 1e-12;
    int refine_iters = 32;
    /// Additional full-dimensional seed directions (normalised internally).
    std::vector<Eigen::VectorXd> extra_seeds;
};

struct ShootResult {
    bool success = false;
    OrbitTrace orbit;
    double best_miss = 0.0;        // final distance to target of the selected seed
    double endpoint_residual = 0.0;
    int best_seed = -1;
    Eigen::VectorXd seed_direction;
    std::string message;
};

/// Heteroclinic shooting from `source` to `target` along the unstable frame.
/// Deterministic: fixed seed grids (antipodal pair for k = 1, uniform circle
/// for k = 2, Fibonacci lattice for k = 3) and fixed-iteration refinement.
ShootResult shoot(const EquilibriumRecord& source, const EquilibriumRecord& target,
                  const AmplitudeSystem& sys, const ShootConfig& cfg);

struct SlowComparisonRow {
    AngleSpec angle;
    double delta = 0.0;  // 4 (d.k2)^2
    double sup_deviation = 0.0;
};

struct SlowComparison {
    std::vector<SlowComparisonRow> rows;
    bool monotone_decreasing = false;
};

/// Shoots the full system and the slow subsystem for a family of angles
/// approaching the degenerate direction (pi/6 hex, 0 square) and reports the
/// sup-distance of the full orbit's slow projection from the slow orbit.
SlowComparison slow_subsystem_check(const ModelParams& params, std::span<const AngleSpec> angles,
                                    Branch source, const ShootConfig& cfg);

struct FastLimitRow {
    double c0 = 0.0;
    double sup_deviation = 0.0;
};

struct FastLimitComparison {
    std::vector<FastLimitRow> rows;
    bool monotone_decreasing = false;
};

/// c0 -> infinity limit: the full orbit in the rescaled variable Xi/c0 against
/// the gradient-flow subsystem.
FastLimitComparison infinite_speed_check(const ModelParams& params, std::span<const double> c0s,
                                         Branch source, const ShootConfig& cfg);

/// Orbit CSV `xi,A1,B1,...,H` (columns follow the variant's components).
void write_orbit_csv(std::ostream& os, const OrbitTrace& trace, const AmplitudeSystem& sys);

}  // namespace shfront
