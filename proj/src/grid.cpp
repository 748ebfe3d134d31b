#include "sdlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <vector>

namespace sdlab {

namespace detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

// Plans are created once per grid; the new-array execute calls are reentrant.
struct FftPlans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  double scale = 1.0;

  FftPlans(int n, Index N) {
    std::vector<int> dims(n, static_cast<int>(N));
    const Index total = static_cast<Index>(std::pow(static_cast<double>(N), n));
    scale = 1.0 / std::sqrt(static_cast<double>(total));
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* buf = fftw_alloc_complex(static_cast<size_t>(total));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd = fftw_plan_dft(n, dims.data(), buf, buf, FFTW_FORWARD, flags);
    bwd = fftw_plan_dft(n, dims.data(), buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!fwd || !bwd) throw std::runtime_error("FFTW planning failed");
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  ComplexArray run(fftw_plan plan, const ComplexArray& in) const {
    ComplexArray out = in;
    auto* data = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, data, data);
    out *= scale;
    return out;
  }
};

}  // namespace detail

namespace {
bool is_power_of_two(Index N) { return N > 0 && (N & (N - 1)) == 0; }
}  // namespace

Grid::Grid(int n, double half_length, Index points_per_dim)
    : n_(n), half_length_(half_length), N_(points_per_dim) {
  if (n < 1 || n > 3) throw std::invalid_argument("grid: n must be 1, 2 or 3");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("grid: half_length must be positive");
  if (!is_power_of_two(points_per_dim) || points_per_dim < 8)
    throw std::invalid_argument("grid: points_per_dim must be a power of two >= 8, got " +
                                std::to_string(points_per_dim));
  dx_ = 2.0 * half_length / static_cast<double>(N_);
  size_ = 1;
  for (int a = 0; a < n_; ++a) size_ *= N_;
  cell_ = std::pow(dx_, n_);

  xi_.resize(N_);
  for (Index k = 0; k < N_; ++k) {
    const Index kk = k < N_ / 2 ? k : k - N_;
    xi_[k] = M_PI * static_cast<double>(kk) / half_length_;
  }
  xi2_.resize(size_);
  for (Index j = 0; j < size_; ++j) {
    const auto idx = unravel(j);
    double s = 0.0;
    for (int a = 0; a < n_; ++a) s += xi_[idx[a]] * xi_[idx[a]];
    xi2_[j] = s;
  }
  plans_ = std::make_shared<detail::FftPlans>(n_, N_);
}

double Grid::box_measure() const { return std::pow(2.0 * half_length_, n_); }

std::array<Index, 3> Grid::unravel(Index flat) const {
  std::array<Index, 3> idx{0, 0, 0};
  for (int a = n_ - 1; a >= 0; --a) {
    idx[a] = flat % N_;
    flat /= N_;
  }
  return idx;
}

Index Grid::ravel(const std::array<Index, 3>& idx) const {
  Index flat = 0;
  for (int a = 0; a < n_; ++a) flat = flat * N_ + idx[a];
  return flat;
}

ComplexArray Grid::forward(const ComplexArray& f) const {
  if (f.size() != size_) throw std::invalid_argument("forward: size mismatch");
  return plans_->run(plans_->fwd, f);
}

ComplexArray Grid::inverse(const ComplexArray& fhat) const {
  if (fhat.size() != size_) throw std::invalid_argument("inverse: size mismatch");
  return plans_->run(plans_->bwd, fhat);
}

bool Grid::same_as(const Grid& other) const {
  return n_ == other.n_ && N_ == other.N_ && half_length_ == other.half_length_;
}

GridPtr make_grid(int n, double half_length, Index points_per_dim) {
  return std::make_shared<const Grid>(n, half_length, points_per_dim);
}

double gradient_energy(const ComplexField& u) {
  const Grid& g = u.grid();
  const ComplexArray uhat = g.forward(u.values());
  return (g.wavenumber_squared() * uhat.abs2()).sum() * g.cell_measure();
}

ComplexField to_complex(const RealField& v) {
  return ComplexField(v.grid_ptr(), v.values().cast<Complex>());
}

}  // namespace sdlab
