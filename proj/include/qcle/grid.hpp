#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qcle {

using cplx = std::complex<double>;

/// Uniform grid t_k = k dt, k = 0..n-1, dt = t_max/(n-1).
class TimeGrid {
 public:
  TimeGrid(double t_max, std::size_t n);
  /// Grid with spacing as close to `dt` as possible, covering [0, t_max].
  static TimeGrid with_step(double t_max, double dt);

  double t_max() const { return t_max_; }
  std::size_t size() const { return n_; }
  double dt() const { return dt_; }
  double operator[](std::size_t k) const { return static_cast<double>(k) * dt_; }

  bool operator==(const TimeGrid& o) const { return n_ == o.n_ && t_max_ == o.t_max_; }

 private:
  double t_max_;
  std::size_t n_;
  double dt_;
};

/// Symmetric grid omega_k = k d_omega, k = -half..half (size 2*half+1).
class FreqGrid {
 public:
  FreqGrid(double omega_max, std::size_t half);
  static FreqGrid with_step(double omega_max, double d_omega);

  double omega_max() const { return omega_max_; }
  std::size_t half() const { return half_; }
  std::size_t size() const { return 2 * half_ + 1; }
  double d_omega() const { return dw_; }
  /// Frequency at storage index i (i = 0 is -omega_max).
  double at(std::size_t i) const {
    return static_cast<double>(static_cast<long>(i) - static_cast<long>(half_)) * dw_;
  }
  std::size_t zero_index() const { return half_; }

  bool operator==(const FreqGrid& o) const { return half_ == o.half_ && omega_max_ == o.omega_max_; }

 private:
  double omega_max_;
  std::size_t half_;
  double dw_;
};

struct SampledSignal {
  TimeGrid grid;
  std::vector<double> values;

  SampledSignal(TimeGrid g, std::vector<double> v);
  explicit SampledSignal(TimeGrid g) : grid(g), values(g.size(), 0.0) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
  /// Piecewise-linear interpolation, clamped to the grid.
  double interpolate(double t) const;
  /// Leading nodes up to and including t_max (same spacing).
  SampledSignal prefix(double t_max) const;
  SampledSignal& operator+=(const SampledSignal& o);
  SampledSignal& operator-=(const SampledSignal& o);
};

SampledSignal operator+(SampledSignal a, const SampledSignal& b);
SampledSignal operator-(SampledSignal a, const SampledSignal& b);
SampledSignal operator*(double s, SampledSignal a);
double sup_norm(const SampledSignal& s);
double sup_distance(const SampledSignal& a, const SampledSignal& b);

/// Dirac component weight * delta(omega - grid.at(zero_index + offset)).
struct SingularComponent {
  long offset;
  cplx weight;
};

/// Regular part on a FreqGrid plus symbolic Dirac components.
struct Spectrum {
  FreqGrid grid;
  std::vector<cplx> values;
  std::vector<SingularComponent> singular;

  explicit Spectrum(FreqGrid g) : grid(g), values(g.size(), cplx{}) {}
  Spectrum(FreqGrid g, std::vector<cplx> v, std::vector<SingularComponent> s = {});

  std::size_t size() const { return values.size(); }
  double location(const SingularComponent& c) const { return static_cast<double>(c.offset) * grid.d_omega(); }
  /// Adds a Dirac component at `omega`, which must sit on a grid node.
  void add_singular(double omega, cplx weight);
  /// Merges components sharing a location and drops exact zeros.
  void normalize_singular();
  /// True when values[-k] == conj(values[k]) bitwise and the singular part is self-conjugate.
  bool is_hermitian() const;

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(cplx s);
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(cplx s, Spectrum a);
/// max(sup |regular|, max |singular weight|).
double sup_norm(const Spectrum& s);

}  // namespace qcle
