#pragma once

#include <cstdint>
#include <optional>

#include "minmaxkit/error.hpp"
#include "minmaxkit/problem.hpp"

namespace minmax {

inline constexpr double kDefaultInnerTolerance = 1e-10;
inline constexpr std::int64_t kDefaultInnerMaxIter = 1'000'000;

struct OracleResult {
  Vec y_star;
  double phi = 0.0;
  Vec grad_phi;
  std::int64_t inner_iterations = 0;
  /// |y_{t+1} - y_t| / eta at exit; 0 for closed-form maximizers.
  double inner_residual = 0.0;
  /// Upper bound on |y_star - y*(x)| implied by the residual.
  double y_error_bound = 0.0;
};

class MaxIterExceeded : public Error {
 public:
  MaxIterExceeded(const std::string& what, OracleResult best)
      : Error(ErrorCode::kMaxIterExceeded, what), best_(std::move(best)) {}
  const OracleResult& best() const { return best_; }

 private:
  OracleResult best_;
};

/// Inner maximizer y*(x), phi(x) and grad phi(x) = grad_x(x, y*(x)).
///
/// Uses the closed form when the problem provides one; otherwise iterates
/// y <- prox_{eta h}(y + eta grad_y(x, y)) with eta = 1 / l_yy, which contracts
/// at least by kappa / (kappa + 1) per step.
OracleResult solve_inner(const MinMaxProblem& p, VecView x, double tol = kDefaultInnerTolerance,
                         std::int64_t max_iter = kDefaultInnerMaxIter,
                         std::optional<VecView> warm_start = std::nullopt);

/// Central finite differences of phi, each phi evaluated at tol / 10.
Vec grad_phi_fd(const MinMaxProblem& p, VecView x, double step, double tol = kDefaultInnerTolerance);

/// Per-run oracle that warm-starts the iterative inner solve from the last
/// maximizer. Not shared between threads.
class InnerOracle {
 public:
  explicit InnerOracle(const MinMaxProblem& p, double tol = kDefaultInnerTolerance,
                       std::int64_t max_iter = kDefaultInnerMaxIter, bool warm_start = true)
      : p_(p), tol_(tol), max_iter_(max_iter), warm_start_(warm_start) {}

  OracleResult operator()(VecView x);
  std::int64_t evaluations() const { return evaluations_; }
  double tolerance() const { return tol_; }

 private:
  const MinMaxProblem& p_;
  double tol_;
  std::int64_t max_iter_;
  bool warm_start_;
  std::optional<Vec> last_;
  std::int64_t evaluations_ = 0;
};

}  // namespace minmax
