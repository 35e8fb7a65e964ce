#pragma once

#include <vector>

#include "backflow/parallel.hpp"

namespace backflow {

/// Backflow kernel -(1/pi) sin(u^2 - v^2)/(u - v), evaluated as
/// -(1/pi)(u+v) sinc((u-v)(u+v)) with a series for small arguments.
double backflow_kernel(double u, double v);

struct ConvergenceEntry {
  double truncation_u = 0.0;
  int n_nodes = 0;
  double delta_max = 0.0;
};

struct EigenResult {
  double u0_tilde = 0.0;
  double truncation_u = 0.0;
  int n_nodes = 0;
  double delta_max = 0.0;
  std::vector<double> nodes;
  /// phi at the nodes, normalised so that sum w_i phi_i^2 = 1.
  std::vector<double> eigenvector;
  double residual = 0.0;
  std::vector<ConvergenceEntry> convergence;
};

/// Node count that resolves the kernel's oscillation up to truncation_u:
/// max(50, 8 U, ceil(U^2)).
int default_eigen_nodes(double truncation_u);

/// Symmetrised Nystrom discretisation on Gauss-Legendre nodes over
/// [u0_tilde, truncation_u]; largest eigenvalue of S_ij = sqrt(w_i) K sqrt(w_j).
EigenResult delta_max(double u0_tilde, double truncation_u, int n_nodes, Execution exec = {});

/// delta_max at each truncation with default_eigen_nodes; entries evaluate
/// concurrently and are returned in input order.
std::vector<ConvergenceEntry> delta_max_convergence(double u0_tilde,
                                                    const std::vector<double>& truncations,
                                                    Execution exec = {});

struct ClassicalMap {
  double p0 = 0.0;
  double t_b = 1.0;
  double epsilon = 1.0;  // epsilon = 0 is the classical curve
};

/// u0_tilde = p0 sqrt(t_b / (4 sqrt(eps))).
double classical_map_u0(const ClassicalMap& map);

/// delta_max at the mapped u0_tilde with U = u0_tilde + span; identically 0
/// at epsilon = 0.
double delta_max_classical_map(const ClassicalMap& map, double span = 16.0, int n_nodes = 0,
                               Execution exec = {});

}  // namespace backflow
