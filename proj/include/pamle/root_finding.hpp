#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace pamle {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method: bisection safeguarded by secant / inverse quadratic
/// interpolation. Requires f(a) and f(b) of opposite sign.
template <class F>
RootResult brent_root(F&& f, double a, double b, double xtol, int max_iter = 200) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, fa, 0, true};
  if (fb == 0.0) return {b, fb, 0, true};
  if ((fa > 0.0) == (fb > 0.0))
    throw std::invalid_argument("brent_root: endpoints do not bracket a root");

  if (std::fabs(fa) < std::fabs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa;
  double d = b - a;
  bool bisected = true;
  double s = b, fs = fb;
  int iter = 0;

  while (iter < max_iter && fb != 0.0 && std::fabs(b - a) > xtol) {
    ++iter;
    if (fa != fc && fb != fc) {
      // inverse quadratic interpolation
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      // secant
      s = b - fb * (b - a) / (fb - fa);
    }
    const double lo = 0.25 * (3.0 * a + b);
    const bool out_of_range = !((s > lo && s < b) || (s < lo && s > b));
    if (out_of_range || (bisected && std::fabs(s - b) >= 0.5 * std::fabs(b - c)) ||
        (!bisected && std::fabs(s - b) >= 0.5 * std::fabs(c - d)) ||
        (bisected && std::fabs(b - c) < xtol) || (!bisected && std::fabs(c - d) < xtol)) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if ((fa > 0.0) != (fs > 0.0)) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::fabs(fa) < std::fabs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return {b, fb, iter, iter < max_iter};
}

struct MaxResult {
  double x = 0.0;
  int iterations = 0;
};

/// Golden-section maximizer on [a,b]; assumes unimodality.
template <class F>
MaxResult golden_section_max(F&& f, double a, double b, double xtol, int max_iter = 400) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int iter = 0;
  while (iter < max_iter && (b - a) > xtol) {
    ++iter;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return {0.5 * (a + b), iter};
}

}  // namespace pamle
