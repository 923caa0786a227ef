#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "apwave/error.hpp"

namespace apwave
{

namespace detail
{

/// FFTW's planner is not re-entrant; only fftw_execute* may run concurrently.
inline std::mutex& fftw_planner_mutex()
{
  static std::mutex m;
  return m;
}

struct FftwFree
{
  void operator()(void* p) const { fftw_free(p); }
};

struct FftwPlanDestroy
{
  void operator()(fftw_plan_s* p) const
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};

using PlanHandle = std::unique_ptr<fftw_plan_s, FftwPlanDestroy>;

} // namespace detail

/**
 * Real-to-complex DFT on an n1 x n2 periodic array stored with index i + n1*j
 * (n2 = 1 for one-dimensional data). Forward uses exp(-2 pi i jk/N); inverse
 * is normalised so inverse(forward(x)) == x.
 *
 * Spectrum layout: kx in [0, n1/2], ky in [0, n2), index kx + (n1/2+1)*ky.
 */
class RealFft
{
public:
  RealFft(int n1, int n2 = 1)
      : n1_(n1), n2_(n2), nh_(n1 / 2 + 1),
        real_(static_cast<double*>(fftw_malloc(sizeof(double) * n1 * n2))),
        spec_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nh_ * n2)))
  {
    if (n1 < 1 || n2 < 1)
      throw InputError("fft: non-positive extent");
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (n2 == 1) {
      fwd_.reset(fftw_plan_dft_r2c_1d(n1, real_.get(), spec_.get(), FFTW_ESTIMATE));
      inv_.reset(fftw_plan_dft_c2r_1d(n1, spec_.get(), real_.get(), FFTW_ESTIMATE));
    } else {
      // FFTW is row-major: slowest dimension first.
      fwd_.reset(fftw_plan_dft_r2c_2d(n2, n1, real_.get(), spec_.get(), FFTW_ESTIMATE));
      inv_.reset(fftw_plan_dft_c2r_2d(n2, n1, spec_.get(), real_.get(), FFTW_ESTIMATE));
    }
  }

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t real_size() const { return static_cast<std::size_t>(n1_) * n2_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(nh_) * n2_; }
  int half_extent() const { return nh_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out)
  {
    if (in.size() != real_size() || out.size() != spectrum_size())
      throw InputError("fft: extent mismatch");
    std::copy(in.begin(), in.end(), real_.get());
    fftw_execute(fwd_.get());
    const auto* s = reinterpret_cast<const std::complex<double>*>(spec_.get());
    std::copy(s, s + spectrum_size(), out.begin());
  }

  void inverse(std::span<const std::complex<double>> in, std::span<double> out)
  {
    if (in.size() != spectrum_size() || out.size() != real_size())
      throw InputError("fft: extent mismatch");
    auto* s = reinterpret_cast<std::complex<double>*>(spec_.get());
    std::copy(in.begin(), in.end(), s);
    fftw_execute(inv_.get());
    const double scale = 1.0 / static_cast<double>(real_size());
    for (std::size_t k = 0; k < real_size(); ++k)
      out[k] = real_.get()[k] * scale;
  }

private:
  int n1_, n2_, nh_;
  std::unique_ptr<double, detail::FftwFree> real_;
  std::unique_ptr<fftw_complex, detail::FftwFree> spec_;
  detail::PlanHandle fwd_, inv_;
};

/// Full complex DFT X_k = sum_j x_j exp(-2 pi i jk/N) of a real sequence.
inline std::vector<std::complex<double>> dft(std::span<const double> x)
{
  const int n = static_cast<int>(x.size());
  if (n < 1)
    throw InputError("dft: empty input");
  std::unique_ptr<fftw_complex, detail::FftwFree> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
  detail::PlanHandle plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan.reset(fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  }
  for (int j = 0; j < n; ++j) {
    buf.get()[j][0] = x[j];
    buf.get()[j][1] = 0.0;
  }
  fftw_execute(plan.get());
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k)
    out[k] = {buf.get()[k][0], buf.get()[k][1]};
  return out;
}

} // namespace apwave
