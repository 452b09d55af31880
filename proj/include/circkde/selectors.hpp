#pragma once

#include "circkde/circular_math.hpp"

#include <span>
#include <utility>
#include <vector>

namespace circkde {

struct SelectorResult
{
  //! Integer nu for flat-top selectors, kappa for the von Mises selector.
  double chosen = 0.0;
  //! (candidate, criterion) pairs in scan order. For ER the criterion is
  //! the largest |phi-hat|^2 in the candidate's window.
  std::vector<std::pair<double, double>> criterion_trace;
  bool at_boundary = false;
};

inline constexpr int default_lscv_cap = 30;
inline constexpr double default_er_m = 1.0;
inline constexpr int default_er_window = 5;
inline constexpr int default_er_nu_max = 50;

//! Least-squares cross-validation over nu = 0..L using the spectral form
//!   CV(nu) = (2pi)^{-1} sum_t [k_t^2 |S_t|^2 / n^2
//!                              - 2 k_t (|S_t|^2 - n) / (n (n - 1))]
//! with S_t = sum_j e^{i t Theta_j}. Ties go to the smaller nu.
SelectorResult lscv_flat_top(std::span<const Angle> sample,
                             int c,
                             int cap = default_lscv_cap);

//! The CV criterion alone, for one nu.
double lscv_criterion(std::span<const Angle> sample, double nu, int c);

//! Empirical rule: the first nu whose window |phi-hat_{nu+1..nu+l}|^2 lies
//! strictly below M log(n) / n. Capped at nu_max (flagged at_boundary).
SelectorResult er_selector(std::span<const Angle> sample,
                           double m = default_er_m,
                           int window = default_er_window,
                           int nu_max = default_er_nu_max);

//! 40 log-spaced concentrations on [0.1, 500].
std::vector<double> default_kappa_grid();

//! LSCV for the von Mises kernel by the direct definition: int f^2 by
//! 512-point quadrature, leave-one-out terms by a double loop.
SelectorResult lscv_von_mises(std::span<const Angle> sample,
                              std::span<const double> kappa_grid);

} // namespace circkde
