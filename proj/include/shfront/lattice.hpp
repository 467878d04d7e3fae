#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shfront {

enum class LatticeKind { Hex, Square };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& s);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

/// Generator wave vector k_j (1-based j; hex has k1,k2,k3 with k3 = -k1-k2,
/// square has k1,k2).
Vec2 generator(LatticeKind kind, int j);
int generator_count(LatticeKind kind);

/// A Fourier mode gamma = n1 k1 + n2 k2 with integer coordinates.
struct LatticeVector {
    int n1 = 0;
    int n2 = 0;
    double kx = 0.0;
    double ky = 0.0;
    LatticeKind kind = LatticeKind::Hex;

    /// |gamma|^2 is an integer on both lattices; computed exactly from (n1,n2).
    long norm_sq_int() const {
        long a = n1, b = n2;
        return kind == LatticeKind::Hex ? a * a + b * b - a * b : a * a + b * b;
    }
    double norm() const;
    Vec2 vec() const { return {kx, ky}; }
    bool is_critical() const { return norm_sq_int() == 1; }
};

LatticeVector make_lattice_vector(LatticeKind kind, int n1, int n2);

/// Exact admissible front angle. AXIS_X means theta = 0; otherwise the reduced
/// fraction p/q encodes cot(theta) = sqrt(3) p/q (hex) or cot(theta) = p/q
/// (square). Only these exact specs are representable; floating angles are
/// refused by construction.
struct AngleSpec {
    bool axis_x = true;
    long p = 0;
    long q = 1;

    static AngleSpec axis();
    static AngleSpec rational(long p, long q);
    /// Accepts "axis", "0", or "p/q".
    static AngleSpec parse(const std::string& text);
    std::string str() const;
    bool operator==(const AngleSpec& o) const;
};

struct Direction {
    LatticeKind kind = LatticeKind::Hex;
    AngleSpec angle;
    Vec2 d{1.0, 0.0};
    Vec2 d_perp{0.0, 1.0};
    /// d . k_j for j = 1..generator_count (index 0 is k1).
    std::vector<double> proj;
    /// d_perp . k_j.
    std::vector<double> proj_perp;
    /// 0-based index of the mode with d . k_j = 0 (hex: theta = pi/6 gives k2;
    /// square: theta = 0 gives k2), if any.
    std::optional<int> degenerate_mode;
    bool gap_admissible = true;

    double theta() const;
    bool degenerate() const { return degenerate_mode.has_value(); }
    double axial(const LatticeVector& g) const;
    double transverse(const LatticeVector& g) const;
};

/// Builds the direction data for an exact angle spec. Rejects specs outside the
/// fundamental sector ([0, pi/6] hex, [0, pi/4) square).
Direction make_direction(LatticeKind kind, const AngleSpec& spec);

/// All lattice points with |gamma| <= radius (ties included), sorted by
/// (|gamma|, n1, n2).
std::vector<LatticeVector> enumerate_lattice(LatticeKind kind, double radius);

struct StripInfo {
    double transverse = 0.0;  // d_perp . gamma
    double axial = 0.0;       // d . gamma
    bool in_critical_strip = false;
};

StripInfo strip_membership(const LatticeVector& g, const Direction& dir);

/// Header `n1,n2,kx,ky,axial,transverse,in_strip`.
void write_lattice_csv(std::ostream& os, const std::vector<LatticeVector>& pts,
                       const Direction& dir);

}  // namespace shfront
