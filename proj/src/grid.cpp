#include "qcle/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcle/error.hpp"

namespace qcle {

TimeGrid::TimeGrid(double t_max, std::size_t n) : t_max_(t_max), n_(n), dt_(0.0) {
  if (n < 2) throw DomainError("TimeGrid: need at least 2 nodes");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("TimeGrid: t_max must be > 0");
  dt_ = t_max / static_cast<double>(n - 1);
}

TimeGrid TimeGrid::with_step(double t_max, double dt) {
  if (!(dt > 0.0)) throw DomainError("TimeGrid: dt must be > 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
  return TimeGrid(t_max, std::max<std::size_t>(steps, 1) + 1);
}

FreqGrid::FreqGrid(double omega_max, std::size_t half) : omega_max_(omega_max), half_(half), dw_(0.0) {
  if (half < 1) throw DomainError("FreqGrid: need at least one positive node");
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw DomainError("FreqGrid: omega_max must be > 0");
  }
  dw_ = omega_max / static_cast<double>(half);
}

FreqGrid FreqGrid::with_step(double omega_max, double d_omega) {
  if (!(d_omega > 0.0)) throw DomainError("FreqGrid: d_omega must be > 0");
  const auto half = static_cast<std::size_t>(std::llround(omega_max / d_omega));
  return FreqGrid(omega_max, std::max<std::size_t>(half, 1));
}

SampledSignal::SampledSignal(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw DomainError("SampledSignal: value count " + std::to_string(values.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
  }
}

double SampledSignal::interpolate(double t) const {
  if (t <= 0.0) return values.front();
  const double x = t / grid.dt();
  const auto k = static_cast<std::size_t>(x);
  if (k + 1 >= values.size()) return values.back();
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

SampledSignal SampledSignal::prefix(double t_max) const {
  const auto steps = static_cast<std::size_t>(std::floor(t_max / grid.dt() + 1e-9));
  const std::size_t n = std::min(values.size(), steps + 1);
  TimeGrid g(static_cast<double>(n - 1) * grid.dt(), n);
  return SampledSignal(g, std::vector<double>(values.begin(), values.begin() + static_cast<long>(n)));
}

SampledSignal& SampledSignal::operator+=(const SampledSignal& o) {
  if (o.size() != size()) throw DomainError("SampledSignal: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

SampledSignal& SampledSignal::operator-=(const SampledSignal& o) {
  if (o.size() != size()) throw DomainError("SampledSignal: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

SampledSignal operator+(SampledSignal a, const SampledSignal& b) { return a += b; }
SampledSignal operator-(SampledSignal a, const SampledSignal& b) { return a -= b; }
SampledSignal operator*(double s, SampledSignal a) {
  for (auto& v : a.values) v *= s;
  return a;
}

double sup_norm(const SampledSignal& s) {
  double m = 0.0;
  for (double v : s.values) {
    if (!std::isfinite(v)) return v;
    m = std::max(m, std::abs(v));
  }
  return m;
}

double sup_distance(const SampledSignal& a, const SampledSignal& b) {
  if (a.size() != b.size()) throw DomainError("sup_distance: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Spectrum::Spectrum(FreqGrid g, std::vector<cplx> v, std::vector<SingularComponent> s)
    : grid(g), values(std::move(v)), singular(std::move(s)) {
  if (values.size() != grid.size()) throw DomainError("Spectrum: value count does not match grid");
}

void Spectrum::add_singular(double omega, cplx weight) {
  const double x = omega / grid.d_omega();
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x))) {
    throw DomainError("Spectrum: singular component must lie on a grid node");
  }
  singular.push_back({static_cast<long>(r), weight});
  normalize_singular();
}

void Spectrum::normalize_singular() {
  std::sort(singular.begin(), singular.end(),
            [](const SingularComponent& a, const SingularComponent& b) { return a.offset < b.offset; });
  std::vector<SingularComponent> merged;
  for (const auto& c : singular) {
    if (!merged.empty() && merged.back().offset == c.offset) {
      merged.back().weight += c.weight;
    } else {
      merged.push_back(c);
    }
  }
  std::erase_if(merged, [](const SingularComponent& c) { return c.weight == cplx{}; });
  singular = std::move(merged);
}

bool Spectrum::is_hermitian() const {
  const std::size_t h = grid.half();
  if (values[h].imag() != 0.0) return false;
  for (std::size_t k = 1; k <= h; ++k) {
    if (values[h + k] != std::conj(values[h - k])) return false;
  }
  for (const auto& c : singular) {
    const bool paired = std::any_of(singular.begin(), singular.end(), [&](const SingularComponent& d) {
      return d.offset == -c.offset && d.weight == std::conj(c.weight);
    });
    if (!paired) return false;
  }
  return true;
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  if (!(o.grid == grid)) throw DomainError("Spectrum: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  singular.insert(singular.end(), o.singular.begin(), o.singular.end());
  normalize_singular();
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  if (!(o.grid == grid)) throw DomainError("Spectrum: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  for (const auto& c : o.singular) singular.push_back({c.offset, -c.weight});
  normalize_singular();
  return *this;
}

Spectrum& Spectrum::operator*=(cplx s) {
  for (auto& v : values) v *= s;
  for (auto& c : singular) c.weight *= s;
  normalize_singular();
  return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(cplx s, Spectrum a) { return a *= s; }

double sup_norm(const Spectrum& s) {
  double m = 0.0;
  for (const auto& v : s.values) {
    const double a = std::abs(v);
    if (!std::isfinite(a)) return a;
    m = std::max(m, a);
  }
  for (const auto& c : s.singular) m = std::max(m, std::abs(c.weight));
  return m;
}

}  // namespace qcle
