#pragma once

#include <memory>
#include <span>
#include <vector>

#include "zetapair/arithmetic.hpp"
#include "zetapair/numeric.hpp"
#include "zetapair/special.hpp"
#include "zetapair/testfn.hpp"

namespace zetapair {

struct KernelContext {
  std::shared_ptr<const ArithmeticTables> tables;
  EulerMaclaurinConfig em_cfg{};
  double small_u_threshold = 1e-3;
  double tail_tol = 1e-4;
  unsigned threads = 0;
};

// Checks the context invariants; throws Config.
void validate(const KernelContext& ctx);

// t-independent ingredients of the kernels at |u|.
struct KernelParts {
  double u = 0.0;           // |u|
  cplx logderiv;            // (zeta'/zeta)'(1+iu) (unset at u = 0)
  cplx regular;             // (zeta'/zeta)'(1+iu) + 1/u^2
  cplx b;                   // B(iu)
  cplx zeta;                // zeta(1+iu) (unset at u = 0)
  double p = 0.0;           // |zeta(1+iu)|^2 - 1/u^2
  cplx a;                   // A(iu)
  cplx a_minus_one;         // A(iu) - 1
  double a_curvature = 0.0; // lim (A(iu) - 1)/u^2, used at u = 0
  double error_bound = 0.0; // prime-tail bounds carried from B and A
};

KernelParts kernel_parts(double u, const KernelContext& ctx);
// Parts at u_k = k h, 0 <= k < count, with the prime sums batched.
std::vector<KernelParts> kernel_parts_grid(double h, std::size_t count, const KernelContext& ctx);

// Q_t(u), the ratio-free Q~_t(u), and the GUE kernel K_t(u).
double q_kernel(double t, double u, const KernelContext& ctx);
double q_tilde_kernel(double t, double u, const KernelContext& ctx);
double gue_kernel(double t, double u);
// The sinc form -(lambda/2pi)^2 K(lambda u / 2pi), K(x) = sinc^2 x.
double gue_kernel_sinc_form(double t, double u);

// Evaluation from precomputed parts.
double q_from_parts(const KernelParts& k, double t, double small_u_threshold = 1e-3);
double q_tilde_from_parts(const KernelParts& k, double t);

// (1/T) int_0^T Q_t(u) dt and friends, closed form in t.
double q_kernel_tavg(double T, double u, const KernelContext& ctx);
double q_tavg_from_parts(const KernelParts& k, double T);
double q_tilde_tavg_from_parts(const KernelParts& k, double T);
double gue_tavg(double T, double u);
// (1/T) int_0^T (log(t/2pi)/2pi)^2 dt
double density_squared_tavg(double T);

enum class KernelKind { Q, K, QTilde };
enum class DeltaKind { D1, D2, D3 };

struct PredictionOptions {
  KernelKind kernel = KernelKind::Q;
  // Phase scale; 0 selects log T.
  double L = 0.0;
  // omega is cut where its tail sup falls below this level
  double omega_cut = 1e-12;
};

// int omega(u) e(alpha (L/2pi) u) [avg (lambda/2pi)^2 + avg kernel_t(u)] du.
Bounded<cplx> pair_prediction(const TestFunction& omega, double alpha, double T, const KernelContext& ctx,
                              const PredictionOptions& opt = {});

// Same over an alpha grid with the kernel evaluated once.
std::vector<Bounded<cplx>> pair_prediction_grid(const TestFunction& omega, std::span<const double> alphas,
                                                double T, const KernelContext& ctx,
                                                const PredictionOptions& opt = {});

// Delta_1 (Q - K), Delta_2 (Q - Q~), Delta_3 (Q~ - K), integrated as pair_prediction.
Bounded<cplx> prediction_delta(const TestFunction& omega, double alpha, double T, DeltaKind kind,
                               const KernelContext& ctx, double L = 0.0);

// Prediction for the t-windowed statistic at height T with h(v1, v2) = r1(v1/2pi) r2(v2/2pi):
// int int [(lambda_T/2pi)^2 + Q_T(v1 - v2)] h(v1, v2) e(a1 (L/2pi) v1 + a2 (L/2pi) v2) dv1 dv2.
// r1 and r2 must be band-limited. L = 0 selects log T.
Bounded<cplx> windowed_prediction(const TestFunction& r1, const TestFunction& r2, double T, double alpha1,
                                  double alpha2, const KernelContext& ctx, double L = 0.0);

// avg (lambda/2pi)^2 + avg Q_t(u) on a u grid (the predicted difference density).
std::vector<double> prediction_density_curve(double T, std::span<const double> us, const KernelContext& ctx);

}  // namespace zetapair
