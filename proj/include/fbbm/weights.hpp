#pragma once

#include "fbbm/grid.hpp"

namespace fbbm {

enum class WeightMode { Truncated, Plain };

/// Spatial weight. Truncated mode is the bounded surrogate of <x>^theta used
/// in weighted energy estimates; plain mode is <x>^r.
struct WeightSpec {
  double theta = 1.0;
  double N = 1.0;
  WeightMode mode = WeightMode::Truncated;
  double r = 0.0;
};

/// <x> = (1 + x^2)^(1/2).
double japanese(double x);

/// Truncated weight w_N^theta(x): equals <x>^theta for |x| <= N and
/// (2N)^theta for |x| >= 3N. In between it is <rho(|x|)>^theta where rho has
/// slope 1 - S (S the quintic smoothstep) and reaches sqrt(4N^2 - 1) before 3N,
/// so the blend is C^2, even, nondecreasing on x >= 0 and |w'| <= theta.
double truncated_weight(double x, double theta, double N);

Field weight_values(GridPtr grid, const WeightSpec& spec);

/// (sum <x_j>^(2r) u_j^2 dx)^(1/2).
double weighted_norm(const Field& u, double r);
/// ||w u||_2 for an arbitrary weight field.
double weighted_norm(const Field& u, const Field& weight);

/// ||J^s u||_2 computed from the spectrum.
double sobolev_norm(const Field& u, double s);

/// LHS / RHS of the weighted interpolation inequality with unit constant:
///   ||J^(theta s) (<x>^((1-theta) b) f)||_2
///   / (||<x>^b f||_2^(1-theta) ||J^s f||_2^theta).
double interpolation_ratio(const Field& f, double s, double b, double theta);

}  // namespace fbbm
