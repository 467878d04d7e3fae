#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "shfront/lattice.hpp"
#include "shfront/pattern.hpp"

namespace shfront {

struct BlowUpError : std::runtime_error {
    explicit BlowUpError(int step)
        : std::runtime_error("field blew up at step " + std::to_string(step)), step_index(step) {}
    int step_index;
};

struct TrackConfig {
    double strip_width = 2.0 * M_PI;
    double threshold = 0.05 / std::sqrt(2.0);
    double t0 = 20.0;
    double t1 = 80.0;
    /// normalized: strip RMS (L2 over sqrt of strip area); raw: plain L2.
    bool normalized = true;
};

struct PdeConfig {
    double eps = 0.3;
    double mu0 = 1.0;
    double beta2 = 1.0;
    /// Amplitude coefficients used for the initial hexagon amplitude; when
    /// not overridden they come from coefficients_qcsh(eps*beta2).
    bool coeff_override = true;
    double K0 = -3.0;
    double K2 = -6.0;
    double Lx = 40.0 * M_PI;
    double Ly = 4.0 * std::sqrt(3.0) * M_PI;
    int nx = 1024;
    int ny = 96;
    double dt = 0.02;
    double T = 100.0;
    AngleSpec angle;          // hex front direction (computation runs in the
                              // front-aligned frame with a rotated lattice)
    double ell = 3.0;         // localisation width
    double phi = 2.0 * M_PI;  // initial front position
    double phi_wrap = 2.0 * M_PI;  // width of the wrap-seam pattern band
    double snapshot_dt = 0.5;
    double stop_fraction = 0.8;  // tracking stops once x_f > stop_fraction*Lx
    bool cubic_term = true;      // test knob: drop -u^3
    TrackConfig track;
    std::vector<double> field_dump_times;

    double mu() const { return eps * eps * mu0; }
    double beta() const { return eps * beta2; }
};

/// Appendix-style presets at desk scale (periodic pseudospectral ETD-RK2).
PdeConfig preset_theta0();
PdeConfig preset_theta30();

/// key = value configuration text; unknown keys are rejected by name.
void apply_config_entry(PdeConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::pair<std::string, std::string>> parse_config_file(std::istream& is);

/// One tracked frame: time plus the per-column mean of u^2.
struct FrontFrame {
    double t = 0.0;
    std::vector<double> column_ms;
};

struct FrontSpeedReport {
    std::vector<double> times;
    std::vector<double> x_f;  // NaN where no front position was found
    double fitted_speed = 0.0;
    double fit_t0 = 0.0, fit_t1 = 0.0;
    int frames_used = 0;
    double c_pred = 0.0;
    double relative_error = 0.0;
};

/// Pseudospectral quadratic-cubic Swift-Hohenberg stepper: exact exponential
/// linear factor, 2/3-dealiased nonlinearity, ETD-RK2 in time.
class SpectralSolver {
public:
    explicit SpectralSolver(const PdeConfig& cfg);
    ~SpectralSolver();
    SpectralSolver(const SpectralSolver&) = delete;
    SpectralSolver& operator=(const SpectralSolver&) = delete;

    /// Hexagon-front initial data on the periodic grid; the pattern band wraps
    /// through the seam so both seam sides carry the same state.
    void init_front();
    void set_field(const Field2D& f);
    Field2D field() const;

    void step();
    int step_index() const;
    double time() const;

    /// Spectral coefficient access for the linear-exactness checks
    /// (ix signed, iy >= 0 half-spectrum index).
    std::complex<double> mode(int ix, int iy) const;
    void set_mode(int ix, int iy, std::complex<double> v);
    /// Fraction of spectral energy above the 2/3 dealiasing cutoff.
    double high_mode_energy_fraction() const;

    FrontFrame frame() const;
    const PdeConfig& config() const;
    /// Hexagon amplitude used by init_front.
    double hex_amplitude() const;
    /// Computational-frame lattice vectors (rotated by the front angle).
    const std::vector<Vec2>& lattice_vectors() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Front tracking over recorded frames: x_f is the rightmost strip whose
/// norm exceeds the threshold while its right neighbour strip stays below
/// (the pattern -> void edge; immune to the wrap-seam interface).
FrontSpeedReport track_front(const std::vector<FrontFrame>& frames, const PdeConfig& cfg);

/// Full Appendix-style experiment: init, step to T, track, least-squares fit
/// over the window. Optional field snapshots at cfg.field_dump_times.
FrontSpeedReport run_experiment(const PdeConfig& cfg, std::vector<Field2D>* snapshots = nullptr);

/// CSV `t,x_f` rows plus a summary line `fitted,c_pred,rel_err`.
void write_front_report_csv(std::ostream& os, const FrontSpeedReport& rep);

}  // namespace shfront
