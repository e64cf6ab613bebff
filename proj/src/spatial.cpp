#include "smos/spatial.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include "smos/threading.hpp"

namespace smos {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_axis(const Axis& axis) {
  if (axis.n < 4 || axis.n % 2 != 0)
    throw std::invalid_argument("StaggeredGrid: axis size must be even and >= 4");
  if (!(axis.max > axis.min)) throw std::invalid_argument("StaggeredGrid: requires max > min");
}

}  // namespace

struct SpectralDeriv1D::Impl {
  int n = 0;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  // k_m * (1/n) premultiplied; phase factors applied per direction
  std::vector<std::complex<double>> mult_to_half;
  std::vector<std::complex<double>> mult_to_int;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

SpectralDeriv1D::SpectralDeriv1D(const Axis& axis) : axis_(axis), impl_(new Impl) {
  check_axis(axis);
  const int n = axis.n;
  impl_->n = n;
  std::vector<double> real(n, 0.0);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  {
    // FFTW planning is not thread-safe; FFTW_UNALIGNED lets plans run on any
    // caller buffers later.
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->fwd = fftw_plan_dft_r2c_1d(n, real.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl_->bwd = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("SpectralDeriv1D: FFTW planning failed");

  const double dx = axis.dx();
  impl_->mult_to_half.resize(n / 2 + 1);
  impl_->mult_to_int.resize(n / 2 + 1);
  for (int m = 0; m <= n / 2; ++m) {
    const double k = kTwoPi * m / axis.length();
    const std::complex<double> ik(0.0, k / n);  // fold 1/n normalization in
    const std::complex<double> shift(std::cos(k * dx / 2), std::sin(k * dx / 2));
    impl_->mult_to_half[m] = ik * shift;
    impl_->mult_to_int[m] = ik * std::conj(shift);
  }
  impl_->mult_to_half[n / 2] = 0.0;  // Nyquist mode of the odd derivative
  impl_->mult_to_int[n / 2] = 0.0;
}

SpectralDeriv1D::~SpectralDeriv1D() = default;

void SpectralDeriv1D::apply(std::span<const double> in, std::span<double> out,
                            ShiftDir dir) const {
  const int n = impl_->n;
  if ((int)in.size() != n || (int)out.size() != n)
    throw std::invalid_argument("SpectralDeriv1D::apply: field length mismatch");
  thread_local std::vector<std::complex<double>> spec;
  if ((int)spec.size() < n / 2 + 1) spec.resize(n / 2 + 1);
  fftw_execute_dft_r2c(impl_->fwd, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(spec.data()));
  const auto& mult =
      (dir == ShiftDir::to_half) ? impl_->mult_to_half : impl_->mult_to_int;
  for (int m = 0; m <= n / 2; ++m) spec[m] *= mult[m];
  fftw_execute_dft_c2r(impl_->bwd, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
}

SpectralDeriv2D::SpectralDeriv2D(const Grid2D& grid)
    : grid_(grid), along_x_(grid.x), along_z_(grid.z) {}

void SpectralDeriv2D::ddz(std::span<const double> in, std::span<double> out, ShiftDir dir,
                          int threads) const {
  const int nx = grid_.x.n, nz = grid_.z.n;
  if ((int)in.size() != nx * nz || (int)out.size() != nx * nz)
    throw std::invalid_argument("SpectralDeriv2D::ddz: field size mismatch");
  parallel_for(nx, threads, [&](int begin, int end) {
    for (int ix = begin; ix < end; ++ix)
      along_z_.apply(in.subspan(ix * nz, nz), out.subspan(ix * nz, nz), dir);
  });
}

void SpectralDeriv2D::ddx(std::span<const double> in, std::span<double> out, ShiftDir dir,
                          int threads) const {
  const int nx = grid_.x.n, nz = grid_.z.n;
  if ((int)in.size() != nx * nz || (int)out.size() != nx * nz)
    throw std::invalid_argument("SpectralDeriv2D::ddx: field size mismatch");
  parallel_for(nz, threads, [&](int begin, int end) {
    thread_local std::vector<double> line_in, line_out;
    if ((int)line_in.size() < nx) {
      line_in.resize(nx);
      line_out.resize(nx);
    }
    for (int iz = begin; iz < end; ++iz) {
      for (int ix = 0; ix < nx; ++ix) line_in[ix] = in[ix * nz + iz];
      along_x_.apply(std::span<const double>(line_in.data(), nx),
                     std::span<double>(line_out.data(), nx), dir);
      for (int ix = 0; ix < nx; ++ix) out[ix * nz + iz] = line_out[ix];
    }
  });
}

std::vector<double> apply_L1_1d(const SpectralDeriv1D& d, std::span<const double> v_half,
                                std::span<const double> rho_int) {
  std::vector<double> out(v_half.size());
  d.apply(v_half, out, ShiftDir::to_integer);
  for (size_t i = 0; i < out.size(); ++i) {
    if (rho_int[i] == 0.0) throw std::domain_error("apply_L1_1d: zero density");
    out[i] /= rho_int[i];
  }
  return out;
}

std::vector<double> apply_L3_1d(const SpectralDeriv1D& d, std::span<const double> sigma_int,
                                std::span<const double> rho_half) {
  std::vector<double> out(sigma_int.size());
  d.apply(sigma_int, out, ShiftDir::to_half);
  for (size_t i = 0; i < out.size(); ++i) out[i] *= rho_half[i];
  return out;
}

StrainRates2D apply_L1_2d(const SpectralDeriv2D& d, std::span<const double> v1,
                          std::span<const double> v3, double rho, int threads) {
  if (rho == 0.0) throw std::domain_error("apply_L1_2d: zero density");
  const int size = d.grid().size();
  StrainRates2D r;
  r.e11.resize(size);
  r.e33.resize(size);
  r.e13.resize(size);
  std::vector<double> dv1_dz(size), dv3_dx(size);
  d.ddx(v1, r.e11, ShiftDir::to_integer, threads);   // (i+1/2,k) -> (i,k)
  d.ddz(v3, r.e33, ShiftDir::to_integer, threads);   // (i,k+1/2) -> (i,k)
  d.ddz(v1, dv1_dz, ShiftDir::to_half, threads);     // (i+1/2,k) -> (i+1/2,k+1/2)
  d.ddx(v3, dv3_dx, ShiftDir::to_half, threads);     // (i,k+1/2) -> (i+1/2,k+1/2)
  const double inv_rho = 1.0 / rho;
  for (int i = 0; i < size; ++i) {
    r.e11[i] *= inv_rho;
    r.e33[i] *= inv_rho;
    r.e13[i] = 0.5 * inv_rho * (dv1_dz[i] + dv3_dx[i]);
  }
  return r;
}

Accel2D apply_L3_2d(const SpectralDeriv2D& d, std::span<const double> s11,
                    std::span<const double> s33, std::span<const double> s13, double rho,
                    int threads) {
  const int size = d.grid().size();
  Accel2D a;
  a.a1.resize(size);
  a.a3.resize(size);
  std::vector<double> ds13_dz(size), ds13_dx(size);
  d.ddx(s11, a.a1, ShiftDir::to_half, threads);       // (i,k) -> (i+1/2,k)
  d.ddz(s13, ds13_dz, ShiftDir::to_integer, threads); // (i+1/2,k+1/2) -> (i+1/2,k)
  d.ddz(s33, a.a3, ShiftDir::to_half, threads);       // (i,k) -> (i,k+1/2)
  d.ddx(s13, ds13_dx, ShiftDir::to_integer, threads); // (i+1/2,k+1/2) -> (i,k+1/2)
  for (int i = 0; i < size; ++i) {
    a.a1[i] = rho * (a.a1[i] + ds13_dz[i]);
    a.a3[i] = rho * (a.a3[i] + ds13_dx[i]);
  }
  return a;
}

}  // namespace smos
