#pragma once

#include <memory>
#include <span>
#include <vector>

namespace smos {

/// One axis of a staggered periodic grid: integer line x_j = min + j dx and
/// half line x_{j+1/2} = min + (j+1/2) dx, j = 0..n-1, dx = (max-min)/n.
struct Axis {
  double min = 0.0;
  double max = 1.0;
  int n = 0;

  double dx() const { return (max - min) / n; }
  double length() const { return max - min; }
  double coord_int(int j) const { return min + j * dx(); }
  double coord_half(int j) const { return min + (j + 0.5) * dx(); }
};

enum class ShiftDir { to_half, to_integer };

/// Pseudo-spectral staggered derivative along one periodic axis: multiply by
/// i k e^(+- i k dx/2) in transform space, Nyquist mode zeroed. to_half maps a
/// field sampled on the integer line to its derivative on the half line;
/// to_integer the reverse. Requires even n >= 4.
class SpectralDeriv1D {
 public:
  explicit SpectralDeriv1D(const Axis& axis);
  ~SpectralDeriv1D();
  SpectralDeriv1D(const SpectralDeriv1D&) = delete;
  SpectralDeriv1D& operator=(const SpectralDeriv1D&) = delete;

  const Axis& axis() const { return axis_; }

  /// out = derivative of in on the other line; in/out must not alias.
  /// Thread-safe (per-thread scratch).
  void apply(std::span<const double> in, std::span<double> out, ShiftDir dir) const;

 private:
  Axis axis_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// 2-D staggered grid with row-major layout: index = ix * z.n + iz.
struct Grid2D {
  Axis x, z;
  int size() const { return x.n * z.n; }
};

/// Derivatives of 2-D fields along either axis (x lines are strided).
class SpectralDeriv2D {
 public:
  explicit SpectralDeriv2D(const Grid2D& grid);

  const Grid2D& grid() const { return grid_; }

  void ddx(std::span<const double> in, std::span<double> out, ShiftDir dir, int threads = 1) const;
  void ddz(std::span<const double> in, std::span<double> out, ShiftDir dir, int threads = 1) const;

 private:
  Grid2D grid_;
  SpectralDeriv1D along_x_;
  SpectralDeriv1D along_z_;
};

// --- operator assemblies -----------------------------------------------

/// L1 v = (1/rho) d/dx v : half line -> integer line. rho sampled on the
/// integer line.
std::vector<double> apply_L1_1d(const SpectralDeriv1D& d, std::span<const double> v_half,
                                std::span<const double> rho_int);

/// L3 sigma = rho d/dx sigma : integer line -> half line. rho on the half line.
std::vector<double> apply_L3_1d(const SpectralDeriv1D& d, std::span<const double> sigma_int,
                                std::span<const double> rho_half);

/// 2-D strain rates from velocities (velocity-stress staggering: v1 at
/// (i+1/2,k), v3 at (i,k+1/2), normal stresses at (i,k), sigma13 at
/// (i+1/2,k+1/2)):
///   e11dot = (1/rho) dx v1, e33dot = (1/rho) dz v3,
///   e13dot = (1/(2 rho)) (dz v1 + dx v3).
struct StrainRates2D {
  std::vector<double> e11, e33, e13;
};
StrainRates2D apply_L1_2d(const SpectralDeriv2D& d, std::span<const double> v1,
                          std::span<const double> v3, double rho, int threads = 1);

/// 2-D accelerations from stresses:
///   a1 = rho (dx s11 + dz s13), a3 = rho (dz s33 + dx s13).
struct Accel2D {
  std::vector<double> a1, a3;
};
Accel2D apply_L3_2d(const SpectralDeriv2D& d, std::span<const double> s11,
                    std::span<const double> s33, std::span<const double> s13, double rho,
                    int threads = 1);

}  // namespace smos
