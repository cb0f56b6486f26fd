#include "vortex/modal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

#include "vortex/error.hpp"
#include "vortex/spectral.hpp"

namespace vortex {

namespace {

using cplx = std::complex<double>;

void require_field(const Profile& prof, const TestField& phi) {
  const std::size_t n = prof.grid.n_cells();
  std::vector<int> seen;
  for (const auto& m : phi.modes) {
    if (m.plus.size() != n || m.minus.size() != n) throw InvalidArgument("test field does not match grid");
    if (m.rim_plus != cplx{} || m.rim_minus != cplx{})
      throw InvalidArgument("test field must vanish at r = R (mode " + std::to_string(m.n) + ")");
    if (std::find(seen.begin(), seen.end(), m.n) != seen.end())
      throw InvalidArgument("test field repeats mode " + std::to_string(m.n));
    seen.push_back(m.n);
  }
}

std::vector<double> real_part(const std::vector<cplx>& z) {
  std::vector<double> r(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].real();
  return r;
}

std::vector<double> imag_part(const std::vector<cplx>& z) {
  std::vector<double> r(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].imag();
  return r;
}

// pi Re sum_n b_n (d_{2-n} + conj d_n): angular integral of Re(e^{-i theta} X) Re(e^{-i theta} Y).
double angular_pair(const std::map<int, cplx>& b, const std::map<int, cplx>& d) {
  cplx s = 0.0;
  for (auto [n, bn] : b) {
    if (auto it = d.find(2 - n); it != d.end()) s += bn * it->second;
    if (auto it = d.find(n); it != d.end()) s += bn * std::conj(it->second);
  }
  return M_PI * s.real();
}

}  // namespace

TestField random_test_field(const RadialGrid& grid, int n_min, int n_max, std::uint64_t seed) {
  if (n_min > n_max) throw InvalidArgument("empty mode range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const std::size_t n = grid.n_cells();
  const double radius = grid.radius();
  TestField phi;
  for (int k = n_min; k <= n_max; ++k) {
    ModeCoeffs m;
    m.n = k;
    m.plus.resize(n);
    m.minus.resize(n);
    for (auto* arr : {&m.plus, &m.minus}) {
      std::array<cplx, 3> c;
      for (auto& x : c) x = {gauss(rng), gauss(rng)};
      const int reg = std::min(std::abs(k), 2);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i) / radius;
        cplx v = 0.0;
        for (int j = 0; j < 3; ++j) v += c[j] * std::sin((j + 1) * M_PI * x);
        (*arr)[i] = v * std::pow(x, reg) * (1.0 - x * x);
      }
    }
    phi.modes.push_back(std::move(m));
  }
  return phi;
}

SecondVariationParts second_variation_parts(const Profile& prof, double lambda, const TestField& phi) {
  require_field(prof, phi);
  const RadialGrid& g = prof.grid;
  const std::size_t n = g.n_cells();
  const GLParams& p = prof.params;
  const auto [vp, vm] = potentials(prof, lambda);
  SecondVariationParts out;

  // Direct route: gradient and potential mode by mode, quartic coupling through
  // the closed-form angular integrals.
  double quad = 0.0;
  for (const auto& m : phi.modes) {
    quad += radial_form(g, m.n, real_part(m.plus)) + radial_form(g, m.n, imag_part(m.plus));
    quad += radial_form(g, m.n, real_part(m.minus)) + radial_form(g, m.n, imag_part(m.minus));
    for (std::size_t i = 0; i < n; ++i)
      quad += g.weight(i) * (vp[i] * std::norm(m.plus[i]) + vm[i] * std::norm(m.minus[i]));
  }
  double cpl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<int, cplx> bp, bm;
    for (const auto& m : phi.modes) {
      bp[m.n] = m.plus[i];
      bm[m.n] = m.minus[i];
    }
    const double fp = prof.f_plus[i], fm = prof.f_minus[i];
    cpl += g.weight(i) * (p.a_plus * fp * fp * angular_pair(bp, bp) + p.a_minus * fm * fm * angular_pair(bm, bm) +
                          2.0 * p.b * fp * fm * angular_pair(bp, bm));
  }
  out.direct = 2.0 * M_PI * quad + 2.0 * lambda * cpl;

  // Blockwise route: pack the pairs (1 + k, 1 - k) and evaluate each block form.
  auto find = [&](int k) -> const ModeCoeffs* {
    for (const auto& m : phi.modes)
      if (m.n == k) return &m;
    return nullptr;
  };
  int k_max = 0;
  for (const auto& m : phi.modes) k_max = std::max(k_max, std::abs(m.n - 1));
  double total = 0.0;
  if (const auto* b1 = find(1)) {
    const auto q0 = assemble_Q0_full(prof, lambda);
    std::vector<double> v(q0.dim());
    q0.set_component(v, 0, real_part(b1->plus));
    q0.set_component(v, 1, real_part(b1->minus));
    q0.set_component(v, 2, imag_part(b1->plus));
    q0.set_component(v, 3, imag_part(b1->minus));
    total += q0.form(v);
  }
  for (int k = 1; k <= k_max; ++k) {
    const auto* bp = find(1 + k);
    const auto* bq = find(1 - k);
    if (!bp && !bq) continue;
    const auto blk = assemble_pair_block(prof, lambda, k);
    std::vector<double> v(blk.dim(), 0.0);
    if (bp) {
      blk.set_component(v, 0, real_part(bp->plus));
      blk.set_component(v, 1, real_part(bp->minus));
      blk.set_component(v, 2, imag_part(bp->plus));
      blk.set_component(v, 3, imag_part(bp->minus));
    }
    if (bq) {
      blk.set_component(v, 4, real_part(bq->plus));
      blk.set_component(v, 5, real_part(bq->minus));
      blk.set_component(v, 6, imag_part(bq->plus));
      blk.set_component(v, 7, imag_part(bq->minus));
    }
    total += blk.form(v);
  }
  out.blockwise = total;
  return out;
}

double second_variation(const Profile& prof, double lambda, const TestField& phi) {
  return second_variation_parts(prof, lambda, phi).direct;
}

double field_energy(const Profile& prof, double lambda, const TestField& phi, double eps) {
  require_field(prof, phi);
  const RadialGrid& g = prof.grid;
  const std::size_t n = g.n_cells();
  const GLParams& p = prof.params;

  // Total field coefficients c_k = delta_{k1} f + eps b_k.
  std::map<int, std::pair<std::vector<cplx>, std::vector<cplx>>> c;
  c[1] = {std::vector<cplx>(prof.f_plus.begin(), prof.f_plus.end()),
          std::vector<cplx>(prof.f_minus.begin(), prof.f_minus.end())};
  for (const auto& m : phi.modes) {
    auto& [cp, cm] = c[m.n];
    cp.resize(n);
    cm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      cp[i] += eps * m.plus[i];
      cm[i] += eps * m.minus[i];
    }
  }

  // Gradient: 1/2 int |grad|^2 = pi sum_k radial forms; mode 1 carries the rim
  // data. Accumulated in long double: the symmetric difference quotient divides
  // by eps^2.
  long double grad = 0.0L;
  const double rim = 2.0 * static_cast<double>(n);
  auto line = [&](const std::vector<cplx>& u, int k, double boundary) {
    long double s = 0.0L;
    for (int part = 0; part < 2; ++part) {
      auto at = [&](std::size_t i) { return part == 0 ? u[i].real() : u[i].imag(); };
      for (std::size_t j = 1; j < n; ++j) {
        const long double d = static_cast<long double>(at(j)) - at(j - 1);
        s += static_cast<long double>(j) * d * d;
      }
      const long double edge = (part == 0 ? boundary : 0.0) - static_cast<long double>(at(n - 1));
      s += rim * edge * edge;
      const long double k2 = static_cast<long double>(k) * k;
      if (k != 0)
        for (std::size_t i = 0; i < n; ++i) {
          const long double r = g.node(i);
          s += k2 * g.weight(i) / (r * r) * at(i) * at(i);
        }
    }
    return s;
  };
  for (const auto& [k, pm] : c) {
    grad += line(pm.first, k, k == 1 ? prof.boundary_plus : 0.0);
    grad += line(pm.second, k, k == 1 ? prof.boundary_minus : 0.0);
  }

  // Quartic potential: trapezoidal rule in theta, exact for the trigonometric
  // polynomial of degree 2 (k_max - k_min).
  const int k_min = c.begin()->first, k_max = c.rbegin()->first;
  const int n_theta = 4 * (k_max - k_min) + 8;
  const double tp2 = p.t_plus * p.t_plus, tm2 = p.t_minus * p.t_minus;
  std::vector<cplx> phase(n_theta * c.size());
  {
    std::size_t idx = 0;
    for (const auto& [k, pm] : c)
      for (int j = 0; j < n_theta; ++j, ++idx) phase[idx] = std::polar(1.0, 2.0 * M_PI * k * j / n_theta);
  }
  long double pot = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double ring = 0.0L;
    for (int j = 0; j < n_theta; ++j) {
      cplx up = 0.0, um = 0.0;
      std::size_t m = 0;
      for (const auto& [k, pm] : c) {
        const cplx e = phase[m * n_theta + j];
        up += pm.first[i] * e;
        um += pm.second[i] * e;
        ++m;
      }
      const long double dp = static_cast<long double>(std::norm(up)) - tp2;
      const long double dm = static_cast<long double>(std::norm(um)) - tm2;
      ring += p.a_plus * dp * dp + p.a_minus * dm * dm + 2.0 * p.b * dp * dm;
    }
    pot += g.weight(i) * ring;
  }
  return static_cast<double>(M_PI * grad + 0.25L * lambda * pot * (2.0L * M_PI / n_theta));
}

}  // namespace vortex
