#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "shfront/connect.hpp"
#include "shfront/lattice.hpp"

namespace shfront {

struct GridSpec {
    int nx = 128;
    int ny = 128;
    double Lx = 8.0 * M_PI;
    double Ly = 8.0 * M_PI;
    double x0 = 0.0;
    double y0 = 0.0;
};

/// Sampled physical field u(x) on a regular grid, row-major in x (values index
/// i*ny + j for cell (i,j)).
struct Field2D {
    int nx = 0;
    int ny = 0;
    double Lx = 0.0, Ly = 0.0;
    double x0 = 0.0, y0 = 0.0;
    std::vector<double> values;

    double& at(int i, int j) { return values[size_t(i) * ny + j]; }
    double at(int i, int j) const { return values[size_t(i) * ny + j]; }
    double cell_x(int i) const { return x0 + (i + 0.5) * Lx / nx; }
    double cell_y(int j) const { return y0 + (j + 0.5) * Ly / ny; }
};

/// u(x) = 2 eps sum_j A_j cos(k_j . x), sampled at cell centers.
Field2D sample_equilibrium_pattern(std::span<const double> A, double eps, LatticeKind kind,
                                   const GridSpec& grid);

/// Leading-order interface reconstruction: amplitudes evaluated at
/// Xi = eps (d.x - eps c0 t) by monotone cubic interpolation of the orbit,
/// clamped to the endpoint equilibria beyond the trace. Requires endpoint
/// labels on the trace. `amplification` scales the field for plots.
Field2D sample_interface(const OrbitTrace& orbit, const AmplitudeSystem& sys, double eps,
                         double t, const GridSpec& grid, double amplification = 1.0);

/// CSV: one header line `nx,ny,Lx,Ly,x0,y0`, then nx*ny values (row-major).
void write_field_csv(std::ostream& os, const Field2D& f);

/// 8-bit ASCII PGM (P2) with linear min/max scaling; the min/max are recorded
/// in a comment line.
void write_field_pgm(std::ostream& os, const Field2D& f);

/// Monotone (Fritsch-Carlson) cubic interpolant on an increasing grid.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_, m_;
};

}  // namespace shfront
