#include "loadcorr/gridsim/powerflow.hpp"

#include <cmath>
#include <algorithm>

#include <Eigen/Dense>

#include "network.hpp"

namespace loadcorr::grid {

Complex steady_state_demand(const Load& load, double vm) {
  if (const auto* zip = std::get_if<ZipParams>(&load.model)) {
    const double p = load.p * (zip->p_z * vm * vm + zip->p_i * vm + zip->p_p);
    const double q = load.q * (zip->q_z * vm * vm + zip->q_i * vm + zip->q_p);
    return {p, q};
  }
  return {load.p, load.q};
}

namespace {

// d(demand)/d|V| for the steady-state load model.
Complex demand_slope(const Load& load, double vm) {
  if (const auto* zip = std::get_if<ZipParams>(&load.model)) {
    return {load.p * (2.0 * zip->p_z * vm + zip->p_i), load.q * (2.0 * zip->q_z * vm + zip->q_i)};
  }
  return {0.0, 0.0};
}

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

}  // namespace

OperatingPoint solve_power_flow(const NetworkCase& c, const PowerFlowOptions& opts) {
  validate(c);
  const detail::CompiledNetwork net(c);
  const std::size_t n = net.n;

  CMatrix ybus = CMatrix::Zero(static_cast<long>(n), static_cast<long>(n));
  for (const auto& e : net.y_entries) ybus(static_cast<long>(e.row), static_cast<long>(e.col)) += e.value;

  std::vector<const Load*> load_at(n, nullptr);
  for (const auto& [id, load] : c.loads) load_at[net.index_of(id)] = &load;

  std::vector<double> p_spec(n, 0.0);
  for (const Machine& m : c.machines) p_spec[net.index_of(m.bus)] += m.mechanical_power;

  std::vector<std::size_t> pvpq;
  std::vector<std::size_t> pq;
  std::vector<double> vm(n, 1.0);
  std::vector<double> va(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Bus& b = c.buses[i];
    if (b.kind != BusKind::PQ) vm[i] = b.voltage_setpoint;
    if (b.kind != BusKind::Slack) pvpq.push_back(i);
    if (b.kind == BusKind::PQ) pq.push_back(i);
  }
  const auto npvpq = static_cast<long>(pvpq.size());
  const auto npq = static_cast<long>(pq.size());

  CVector v(static_cast<long>(n));
  CVector s_net(static_cast<long>(n));
  auto refresh = [&] {
    for (std::size_t i = 0; i < n; ++i) v(static_cast<long>(i)) = std::polar(vm[i], va[i]);
    const CVector current = ybus * v;
    s_net = v.cwiseProduct(current.conjugate());
  };

  Eigen::VectorXd mismatch(npvpq + npq);
  auto evaluate = [&] {
    refresh();
    for (long k = 0; k < npvpq; ++k) {
      const std::size_t i = pvpq[static_cast<std::size_t>(k)];
      const Complex demand = load_at[i] ? steady_state_demand(*load_at[i], vm[i]) : Complex{};
      mismatch(k) = s_net(static_cast<long>(i)).real() + demand.real() - p_spec[i];
    }
    for (long k = 0; k < npq; ++k) {
      const std::size_t i = pq[static_cast<std::size_t>(k)];
      const Complex demand = load_at[i] ? steady_state_demand(*load_at[i], vm[i]) : Complex{};
      mismatch(npvpq + k) = s_net(static_cast<long>(i)).imag() + demand.imag();
    }
    return mismatch.size() == 0 ? 0.0 : mismatch.cwiseAbs().maxCoeff();
  };

  OperatingPoint op;
  double norm = evaluate();
  int polish = 0;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (!std::isfinite(norm)) break;
    if (norm < opts.tolerance) {
      // A couple of extra steps take the converged point down to round-off.
      if (norm < 1e-13 || polish >= 2) break;
      ++polish;
    }
    const CVector current = ybus * v;
    CVector vnorm(static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i) vnorm(static_cast<long>(i)) = std::polar(1.0, va[i]);
    // Standard complex-power sensitivities.
    const CMatrix ds_dva = Complex(0.0, 1.0) * v.asDiagonal() *
                           (CMatrix(current.asDiagonal()) - ybus * v.asDiagonal()).conjugate();
    const CMatrix ds_dvm = v.asDiagonal() * (ybus * vnorm.asDiagonal()).conjugate() +
                           CMatrix(current.conjugate().asDiagonal()) * vnorm.asDiagonal();

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(npvpq + npq, npvpq + npq);
    for (long r = 0; r < npvpq; ++r) {
      const auto i = static_cast<long>(pvpq[static_cast<std::size_t>(r)]);
      for (long col = 0; col < npvpq; ++col) {
        jac(r, col) = ds_dva(i, static_cast<long>(pvpq[static_cast<std::size_t>(col)])).real();
      }
      for (long col = 0; col < npq; ++col) {
        jac(r, npvpq + col) = ds_dvm(i, static_cast<long>(pq[static_cast<std::size_t>(col)])).real();
      }
    }
    for (long r = 0; r < npq; ++r) {
      const auto i = static_cast<long>(pq[static_cast<std::size_t>(r)]);
      for (long col = 0; col < npvpq; ++col) {
        jac(npvpq + r, col) = ds_dva(i, static_cast<long>(pvpq[static_cast<std::size_t>(col)])).imag();
      }
      for (long col = 0; col < npq; ++col) {
        jac(npvpq + r, npvpq + col) =
            ds_dvm(i, static_cast<long>(pq[static_cast<std::size_t>(col)])).imag();
      }
    }
    // Voltage-dependent demand on PQ buses.
    for (long k = 0; k < npq; ++k) {
      const std::size_t i = pq[static_cast<std::size_t>(k)];
      if (!load_at[i]) continue;
      const Complex slope = demand_slope(*load_at[i], vm[i]);
      const auto row_p = std::find(pvpq.begin(), pvpq.end(), i) - pvpq.begin();
      jac(row_p, npvpq + k) += slope.real();
      jac(npvpq + k, npvpq + k) += slope.imag();
    }

    const Eigen::VectorXd step = jac.partialPivLu().solve(-mismatch);
    for (long k = 0; k < npvpq; ++k) va[pvpq[static_cast<std::size_t>(k)]] += step(k);
    for (long k = 0; k < npq; ++k) vm[pq[static_cast<std::size_t>(k)]] += step(npvpq + k);
    norm = evaluate();
  }

  op.iterations = it;
  op.max_mismatch = norm;
  if (!std::isfinite(norm) || norm >= opts.tolerance) {
    throw GridError(GridErrc::NoConvergence,
                    "power flow did not converge after " + std::to_string(it) +
                        " iterations (max mismatch " + std::to_string(norm) + " pu)");
  }

  op.voltage.resize(n);
  op.generation.assign(n, Complex{});
  op.load.assign(n, Complex{});
  for (std::size_t i = 0; i < n; ++i) {
    op.voltage[i] = v(static_cast<long>(i));
    if (load_at[i]) op.load[i] = steady_state_demand(*load_at[i], vm[i]);
    if (c.buses[i].kind != BusKind::PQ) op.generation[i] = s_net(static_cast<long>(i)) + op.load[i];
  }
  return op;
}

}  // namespace loadcorr::grid
