#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lorentz_iso/error.hpp"

namespace lorentz_iso {

/// Rectangular parameter grid. Periodic axes sample [lo, hi) with n nodes,
/// non-periodic axes sample [lo, hi] including both ends.
struct GridSpec {
  double u0 = 0.0, u1 = 1.0;
  double v0 = 0.0, v1 = 1.0;
  int nu = 2, nv = 2;
  bool periodic_u = false, periodic_v = false;

  double hu() const { return (u1 - u0) / (periodic_u ? nu : nu - 1); }
  double hv() const { return (v1 - v0) / (periodic_v ? nv : nv - 1); }
  double u(int i) const { return u0 + i * hu(); }
  double v(int j) const { return v0 + j * hv(); }
  std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
  /// Row-major with v varying fastest.
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nv + j; }

  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

struct GridIndex {
  int i = 0;
  int j = 0;
  bool operator==(const GridIndex&) const = default;
};

template <class T>
class Grid {
 public:
  Grid() = default;
  explicit Grid(const GridSpec& spec, const T& fill = T()) : spec_(spec), data_(spec.size(), fill) {}

  const GridSpec& spec() const { return spec_; }
  T& at(int i, int j) { return data_[spec_.index(i, j)]; }
  const T& at(int i, int j) const { return data_[spec_.index(i, j)]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }
  std::size_t size() const { return data_.size(); }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  GridSpec spec_;
  std::vector<T> data_;
};

/// Worker count: LORENTZ_ISO_THREADS if set and positive, otherwise the
/// hardware concurrency (0 means auto).
int thread_count();

/// Runs fn(k) for k in [0, n). Work items must be independent; results are
/// deterministic regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

template <class T, class F>
Grid<T> map_grid(const GridSpec& spec, F&& fn) {
  Grid<T> out(spec);
  parallel_for(spec.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k / spec.nv), j = static_cast<int>(k % spec.nv);
    out[k] = fn(i, j);
  });
  return out;
}

}  // namespace lorentz_iso
