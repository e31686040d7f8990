#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "shl/geometry.hpp"
#include "shl/resolvent.hpp"

// Dual energy functional, Nehari scaling, the damped fixed-point solver for
// dual bound states, reconstruction of the field equation solution, and
// concentration diagnostics.

namespace shl {

struct DualState {
  BiRadialField v;        // real-valued, space side
  double p = 3.0;
  WeightSpec W;
  BiRadialField KQv;      // cached weighted resolvent application
  double energy = 0.0;
  double el_residual = 0.0;
  long iterations = 0;
  bool trivial = false;   // v below the trivial-solution floor
  double q = 0.0;         // admissibility exponent recorded by the solver, 0 if unchecked
  std::vector<double> residual_history;  // accepted steps only
};

struct SolverConfig {
  long max_iter = 400;
  double residual_tol = 1e-4;
  unsigned seed = 1;
  double damping = 0.5;
  double q = 0.0;  // when > 0, p is checked against the self-dual window for this q
  MultiplierSpec mult;
};

struct SolverError : std::runtime_error {
  std::vector<double> residual_history;
  SolverError(const std::string& what, std::vector<double> hist)
      : std::runtime_error(what), residual_history(std::move(hist)) {}
};

double dual_exponent(double p);  // p' = p/(p-1)

// J(v) = (1/p') ||v||_{p'}^{p'} - (1/2) int v K_Q v, using the cached KQv.
double energy(const DualState& state);

// || |v|^{p'-2} v - K_Q v ||_p / max(||K_Q v||_p, tiny)
double el_residual(const DualState& state);

// Unique maximizer of t -> J(t v); requires B(v, v) > 0.
double nehari_scale(const BiRadialField& v, const WeightSpec& W, double p,
                    const MultiplierSpec& mult);

DualState solve_bound_state(const SymmetryDim& dim, const WeightSpec& W,
                            double p, const GridPtr& grid,
                            const SolverConfig& config);

struct Reconstruction {
  BiRadialField u;
  double residual = 0.0;  // ||u - R(Q |u|^{p-2} u)||_p / ||u||_p
};

Reconstruction reconstruct_u(const DualState& state, const MultiplierSpec& mult);

struct Concentration {
  ReducedPoint center;
  double mass = 0.0;
};

// Maximizing ball mass of |Q^{1/p} v|^{p'} over grid-node centers.
Concentration concentration(const DualState& state, double R);

}  // namespace shl
