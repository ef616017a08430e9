#include "ebpois/quadrature.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "ebpois/special_fns.hpp"

namespace ebpois {

void QuadraturePolicy::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("QuadraturePolicy: abs_tol must be positive");
  if (max_subdivisions < 1) throw DomainError("QuadraturePolicy: max_subdivisions must be >= 1");
  if (min_depth < 0) throw DomainError("QuadraturePolicy: min_depth must be non-negative");
}

namespace {

struct Panel {
  double a, b;
  double fa, fm, fb;  // Simpson only
  double whole;       // Simpson estimate over [a, b]
  double tol;
  int depth;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

bool too_narrow(double a, double b) {
  return (b - a) <= 64.0 * std::numeric_limits<double>::epsilon() *
                        std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

QuadratureResult adaptive_simpson(const Integrand& f, std::span<const double> bp,
                                  const QuadraturePolicy& policy) {
  const double width = bp.back() - bp.front();
  QuadratureResult out;
  CompensatedSum total;
  double err = 0.0;
  std::vector<Panel> stack;

  auto eval = [&](double x) {
    ++out.evaluations;
    return f(x);
  };

  for (std::size_t i = bp.size() - 1; i-- > 0;) {
    const double a = bp[i], b = bp[i + 1];
    if (!(b > a)) continue;
    const double fa = eval(a), fb = eval(b), fm = eval(0.5 * (a + b));
    stack.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb),
                     policy.abs_tol * (b - a) / width, 0});
  }

  std::int64_t subdivisions = 0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double flm = eval(0.5 * (p.a + m));
    const double frm = eval(0.5 * (m + p.b));
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;

    const bool converged = p.depth >= policy.min_depth && std::abs(delta) <= 15.0 * p.tol;
    if (converged || too_narrow(p.a, p.b)) {
      total.add(left + right + delta / 15.0);
      err += converged ? std::abs(delta) / 15.0 : std::abs(delta);
      continue;
    }
    if (++subdivisions > policy.max_subdivisions) {
      CompensatedSum partial = total;
      partial.add(p.whole);
      for (const Panel& q : stack) partial.add(q.whole);
      std::ostringstream msg;
      msg << "adaptive Simpson exceeded " << policy.max_subdivisions << " subdivisions";
      throw QuadratureError(msg.str(), partial.value(), err + std::abs(delta));
    }
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
  }
  out.value = total.value();
  out.err_bound = err;
  return out;
}

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkPanel {
  double a, b, tol;
  int depth;
};

QuadratureResult adaptive_gauss_kronrod(const Integrand& f, std::span<const double> bp,
                                        const QuadraturePolicy& policy) {
  const double width = bp.back() - bp.front();
  QuadratureResult out;
  CompensatedSum total;
  double err = 0.0;

  auto rule = [&](double a, double b, double& kronrod, double& gauss) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = kKronrod[7] * fc, g = kGauss[3] * fc;
    for (int j = 0; j < 7; ++j) {
      const double dx = h * kNodes[j];
      const double s = f(c - dx) + f(c + dx);
      k += kKronrod[j] * s;
      if (j % 2 == 1) g += kGauss[j / 2] * s;
    }
    out.evaluations += 15;
    kronrod = k * h;
    gauss = g * h;
  };

  std::vector<GkPanel> stack;
  for (std::size_t i = bp.size() - 1; i-- > 0;) {
    if (bp[i + 1] > bp[i])
      stack.push_back({bp[i], bp[i + 1], policy.abs_tol * (bp[i + 1] - bp[i]) / width, 0});
  }
  std::int64_t subdivisions = 0;
  while (!stack.empty()) {
    const GkPanel p = stack.back();
    stack.pop_back();
    double k = 0.0, g = 0.0;
    rule(p.a, p.b, k, g);
    const double e = std::abs(k - g);
    if ((p.depth >= policy.min_depth && e <= p.tol) || too_narrow(p.a, p.b)) {
      total.add(k);
      err += e;
      continue;
    }
    if (++subdivisions > policy.max_subdivisions) {
      CompensatedSum partial = total;
      partial.add(k);
      std::ostringstream msg;
      msg << "adaptive Gauss-Kronrod exceeded " << policy.max_subdivisions << " subdivisions";
      throw QuadratureError(msg.str(), partial.value(), err + e);
    }
    const double m = 0.5 * (p.a + p.b);
    stack.push_back({m, p.b, 0.5 * p.tol, p.depth + 1});
    stack.push_back({p.a, m, 0.5 * p.tol, p.depth + 1});
  }
  out.value = total.value();
  out.err_bound = err;
  return out;
}

}  // namespace

QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadraturePolicy& policy) {
  policy.validate();
  if (breakpoints.size() < 2) throw ContractError("integrate: need at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] >= breakpoints[i - 1]) || !std::isfinite(breakpoints[i]))
      throw ContractError("integrate: breakpoints must be finite and ascending");
  }
  if (!(breakpoints.back() > breakpoints.front())) return {};
  switch (policy.scheme) {
    case QuadratureScheme::GaussKronrod15:
      return adaptive_gauss_kronrod(f, breakpoints, policy);
    case QuadratureScheme::AdaptiveSimpson:
    default:
      return adaptive_simpson(f, breakpoints, policy);
  }
}

}  // namespace ebpois
