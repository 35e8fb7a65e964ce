#include "backflow/eigenproblem.hpp"

#include <algorithm>
#include <cmath>

#include "backflow/error.hpp"
#include "backflow/numerics.hpp"

namespace backflow {

double backflow_kernel(double u, double v) {
  const double sum = u + v;
  const double s = (u - v) * sum;
  const double sinc = std::abs(s) < 1e-4 ? 1.0 - s * s / 6.0 : std::sin(s) / s;
  return -sum * sinc / kPi;
}

int default_eigen_nodes(double truncation_u) {
  const double u = std::abs(truncation_u);
  return std::max({50, static_cast<int>(std::ceil(8.0 * u)), static_cast<int>(std::ceil(u * u))});
}

EigenResult delta_max(double u0_tilde, double truncation_u, int n_nodes, Execution exec) {
  if (!(u0_tilde >= 0.0) || !std::isfinite(u0_tilde))
    throw ContractViolation("delta_max: u0_tilde must be finite and >= 0");
  if (!(truncation_u > u0_tilde) || !std::isfinite(truncation_u))
    throw ContractViolation("delta_max: truncation U must exceed u0_tilde");
  if (n_nodes < 50) throw ContractViolation("delta_max: n_nodes must be >= 50");

  QuadratureSpec spec;
  spec.n_nodes = n_nodes;
  spec.lower = u0_tilde;
  spec.upper = truncation_u;
  const QuadratureGrid grid = gauss_legendre(spec);
  const std::size_t n = grid.size();
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(grid.weights[i]);

  DenseMatrix s(n);
  parallel_for(n, exec, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j)
      s(i, j) = root[i] * backflow_kernel(grid.nodes[i], grid.nodes[j]) * root[j];
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) s(i, j) = s(j, i);

  const Eigenpair pair = symmetric_largest_eigenpair(s);
  EigenResult out;
  out.u0_tilde = u0_tilde;
  out.truncation_u = truncation_u;
  out.n_nodes = n_nodes;
  out.delta_max = pair.value;
  out.residual = pair.residual;
  out.nodes = grid.nodes;
  out.eigenvector.resize(n);
  // sum v_i^2 = 1 becomes sum w_i phi_i^2 = 1 under phi_i = v_i / sqrt(w_i).
  for (std::size_t i = 0; i < n; ++i) out.eigenvector[i] = pair.vector[i] / root[i];
  out.convergence.push_back({truncation_u, n_nodes, pair.value});
  return out;
}

std::vector<ConvergenceEntry> delta_max_convergence(double u0_tilde,
                                                    const std::vector<double>& truncations,
                                                    Execution exec) {
  std::vector<ConvergenceEntry> table(truncations.size());
  parallel_for(truncations.size(), exec, [&](std::size_t k) {
    const double u = truncations[k];
    const int n = default_eigen_nodes(u);
    table[k] = {u, n, delta_max(u0_tilde, u, n).delta_max};
  });
  return table;
}

double classical_map_u0(const ClassicalMap& map) {
  if (!(map.p0 >= 0.0) || !std::isfinite(map.p0)) throw ContractViolation("classical map: p0 must be >= 0");
  if (!(map.t_b > 0.0) || !std::isfinite(map.t_b)) throw ContractViolation("classical map: t_b must be > 0");
  if (!(map.epsilon > 0.0 && map.epsilon <= 1.0))
    throw ContractViolation("classical map: epsilon must lie in (0, 1]");
  return map.p0 * std::sqrt(map.t_b / (4.0 * std::sqrt(map.epsilon)));
}

double delta_max_classical_map(const ClassicalMap& map, double span, int n_nodes, Execution exec) {
  if (map.epsilon == 0.0) return 0.0;
  if (!(span > 0.0)) throw ContractViolation("classical map: span must be > 0");
  const double u0 = classical_map_u0(map);
  const double u = u0 + span;
  return delta_max(u0, u, n_nodes > 0 ? n_nodes : default_eigen_nodes(u), exec).delta_max;
}

}  // namespace backflow
