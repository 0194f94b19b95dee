#include "brainrf/eeg/filter.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "brainrf/core/error.h"

namespace brainrf::eeg {

namespace {

using cplx = std::complex<double>;

struct DigitalZp {
  std::vector<cplx> poles;
  std::vector<double> zeros;  // Butterworth zeros land on z = +1 or z = -1
};

std::vector<cplx> prototype_poles(int order) {
  std::vector<cplx> poles;
  poles.reserve(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    poles.emplace_back(std::cos(theta), std::sin(theta));
  }
  return poles;
}

double prewarp(double freq_hz, double fs) {
  return 2.0 * fs * std::tan(std::numbers::pi * freq_hz / fs);
}

cplx bilinear(cplx s, double fs) {
  return (2.0 * fs + s) / (2.0 * fs - s);
}

void check_design(int order, double fs) {
  if (order < 1) throw InputError("filter order must be >= 1");
  if (!(fs > 0.0)) throw InputError("sample rate must be positive");
}

void check_edge(double f, double fs, const char* what) {
  if (!(f > 0.0 && f < fs / 2.0)) {
    throw InputError(std::string(what) + " frequency must lie strictly between 0 and Nyquist");
  }
}

cplx section_response(const Biquad& s, cplx z_inv) {
  const cplx num = s.b0 + z_inv * (s.b1 + z_inv * s.b2);
  const cplx den = 1.0 + z_inv * (s.a1 + z_inv * s.a2);
  return num / den;
}

// Groups conjugate pole pairs (and leftover real poles) into sections, hands
// out zeros in list order, and scales every section to unit gain at `ref_hz`.
SosFilter to_sos(const DigitalZp& zp, double ref_hz, double fs) {
  constexpr double kImagTol = 1e-12;
  std::vector<cplx> upper;
  std::vector<double> real_poles;
  for (const cplx& p : zp.poles) {
    if (std::abs(p.imag()) <= kImagTol * std::max(1.0, std::abs(p))) {
      real_poles.push_back(p.real());
    } else if (p.imag() > 0.0) {
      upper.push_back(p);
    }
  }
  std::sort(real_poles.begin(), real_poles.end());

  std::vector<Biquad> sections;
  std::size_t next_zero = 0;
  auto take_zero = [&]() {
    if (next_zero >= zp.zeros.size()) throw Error("filter design ran out of zeros");
    return zp.zeros[next_zero++];
  };

  for (const cplx& p : upper) {
    Biquad s;
    s.a1 = -2.0 * p.real();
    s.a2 = std::norm(p);
    const double z1 = take_zero();
    const double z2 = take_zero();
    s.b0 = 1.0;
    s.b1 = -(z1 + z2);
    s.b2 = z1 * z2;
    sections.push_back(s);
  }
  for (std::size_t i = 0; i < real_poles.size(); i += 2) {
    Biquad s;
    if (i + 1 < real_poles.size()) {
      const double p1 = real_poles[i];
      const double p2 = real_poles[i + 1];
      s.a1 = -(p1 + p2);
      s.a2 = p1 * p2;
      const double z1 = take_zero();
      const double z2 = take_zero();
      s.b1 = -(z1 + z2);
      s.b2 = z1 * z2;
    } else {
      s.a1 = -real_poles[i];
      s.b1 = -take_zero();
    }
    sections.push_back(s);
  }

  const cplx z_inv = std::polar(1.0, -2.0 * std::numbers::pi * ref_hz / fs);
  for (Biquad& s : sections) {
    const double g = std::abs(section_response(s, z_inv));
    if (!(g > 0.0) || !std::isfinite(g)) throw Error("degenerate filter section");
    s.b0 /= g;
    s.b1 /= g;
    s.b2 /= g;
  }
  return SosFilter(std::move(sections));
}

// Steady-state TDF-II state of each section for a unit step at the cascade input.
std::vector<std::array<double, 2>> step_state(const std::vector<Biquad>& sections) {
  std::vector<std::array<double, 2>> zi(sections.size());
  double level = 1.0;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Biquad& s = sections[k];
    const double g = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double z2 = (s.b2 - s.a2 * g) * level;
    const double z1 = (s.b1 - s.a1 * g) * level + z2;
    zi[k] = {z1, z2};
    level *= g;
  }
  return zi;
}

void filter_in_place(const std::vector<Biquad>& sections, std::vector<double>& x,
                     std::vector<std::array<double, 2>> state) {
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Biquad& s = sections[k];
    double z1 = state[k][0];
    double z2 = state[k][1];
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace

void SosFilter::cascade(const SosFilter& other) {
  sections_.insert(sections_.end(), other.sections_.begin(), other.sections_.end());
}

std::vector<double> SosFilter::apply(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  filter_in_place(sections_, y, std::vector<std::array<double, 2>>(sections_.size(), {0.0, 0.0}));
  return y;
}

std::vector<double> SosFilter::apply_zero_phase(std::span<const double> x) const {
  const std::size_t n = x.size();
  if (n == 0 || sections_.empty()) return std::vector<double>(x.begin(), x.end());

  std::size_t pad = 3 * (2 * sections_.size() + 1);
  pad = std::min(pad, n - 1);

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto unit_state = step_state(sections_);
  auto scaled = [&](double level) {
    auto s = unit_state;
    for (auto& z : s) {
      z[0] *= level;
      z[1] *= level;
    }
    return s;
  };

  filter_in_place(sections_, ext, scaled(ext.front()));
  std::reverse(ext.begin(), ext.end());
  filter_in_place(sections_, ext, scaled(ext.front()));
  std::reverse(ext.begin(), ext.end());

  return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                             ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

double SosFilter::magnitude(double freq_hz, double sample_rate_hz) const {
  const cplx z_inv = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / sample_rate_hz);
  cplx h = 1.0;
  for (const Biquad& s : sections_) h *= section_response(s, z_inv);
  return std::abs(h);
}

SosFilter butterworth_lowpass(int order, double cutoff_hz, double fs) {
  check_design(order, fs);
  check_edge(cutoff_hz, fs, "low-pass cutoff");
  const double w = prewarp(cutoff_hz, fs);
  DigitalZp zp;
  for (const cplx& p : prototype_poles(order)) zp.poles.push_back(bilinear(w * p, fs));
  zp.zeros.assign(static_cast<std::size_t>(order), -1.0);
  return to_sos(zp, 0.0, fs);
}

SosFilter butterworth_highpass(int order, double cutoff_hz, double fs) {
  check_design(order, fs);
  check_edge(cutoff_hz, fs, "high-pass cutoff");
  const double w = prewarp(cutoff_hz, fs);
  DigitalZp zp;
  for (const cplx& p : prototype_poles(order)) zp.poles.push_back(bilinear(w / p, fs));
  zp.zeros.assign(static_cast<std::size_t>(order), 1.0);
  return to_sos(zp, fs / 2.0, fs);
}

SosFilter butterworth_bandpass(int order, double low_hz, double high_hz, double fs) {
  check_design(order, fs);
  check_edge(low_hz, fs, "band-pass lower");
  check_edge(high_hz, fs, "band-pass upper");
  if (!(low_hz < high_hz)) throw InputError("band-pass lower edge must be below the upper edge");
  const double wl = prewarp(low_hz, fs);
  const double wh = prewarp(high_hz, fs);
  const double w0 = std::sqrt(wl * wh);
  const double bw = wh - wl;
  DigitalZp zp;
  for (const cplx& p : prototype_poles(order)) {
    const cplx half = p * bw / 2.0;
    const cplx root = std::sqrt(half * half - w0 * w0);
    zp.poles.push_back(bilinear(half + root, fs));
    zp.poles.push_back(bilinear(half - root, fs));
  }
  for (int i = 0; i < order; ++i) {
    zp.zeros.push_back(1.0);
    zp.zeros.push_back(-1.0);
  }
  const double center_hz = fs / std::numbers::pi * std::atan(w0 / (2.0 * fs));
  return to_sos(zp, center_hz, fs);
}

double zero_phase_noise_bandwidth(const SosFilter& filter, double fs) {
  constexpr int kGrid = 1 << 15;
  const double df = fs / 2.0 / kGrid;
  double peak = 0.0;
  double area = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double m = filter.magnitude(i * df, fs);
    const double p = m * m * m * m;
    peak = std::max(peak, p);
    area += (i == 0 || i == kGrid) ? 0.5 * p : p;
  }
  if (!(peak > 0.0)) throw Error("filter has no passband");
  return area * df / peak;
}

}  // namespace brainrf::eeg
