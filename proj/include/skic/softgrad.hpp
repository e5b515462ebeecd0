#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "skic/errors.hpp"

namespace skic {

// Relaxed compression rate over per-position keep probabilities. On 0/1
// vectors it equals the token compression rate.
inline double soft_cr(const Eigen::VectorXd& keep) {
  if (keep.size() == 0) throw ShapeError("soft_cr of an empty vector");
  if ((keep.array() < 0.0).any() || (keep.array() > 1.0).any()) throw ShapeError("keep probabilities must lie in [0, 1]");
  return 1.0 - keep.mean();
}

inline Eigen::VectorXd soft_cr_gradient(const Eigen::VectorXd& keep) {
  if (keep.size() == 0) throw ShapeError("soft_cr of an empty vector");
  return Eigen::VectorXd::Constant(keep.size(), -1.0 / static_cast<double>(keep.size()));
}

struct AttnParams {
  Eigen::MatrixXd wq;
  Eigen::MatrixXd wk;
  Eigen::MatrixXd wv;

  Eigen::Index d() const { return wq.rows(); }

  void validate() const {
    const auto n = wq.rows();
    for (const auto* m : {&wq, &wk, &wv}) {
      if (m->rows() != n || m->cols() != n) throw ShapeError("attention weights must all be d x d");
      if (!m->allFinite()) throw ShapeError("attention weights must be finite");
    }
  }
};

struct AttnOptions {
  // Divide scores by sqrt(d).
  bool scaled = true;
};

struct AttnGrads {
  Eigen::MatrixXd dh;
  Eigen::MatrixXd dwq;
  Eigen::MatrixXd dwk;
  Eigen::MatrixXd dwv;
};

namespace detail {

inline void check_input(const Eigen::MatrixXd& h, const AttnParams& p) {
  p.validate();
  if (h.rows() < 1) throw ShapeError("attention needs at least one row");
  if (h.cols() != p.d()) throw ShapeError("input width does not match the weight dimension");
}

inline double score_scale(const AttnParams& p, const AttnOptions& opt) {
  return opt.scaled ? 1.0 / std::sqrt(static_cast<double>(p.d())) : 1.0;
}

inline Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& s) {
  Eigen::MatrixXd a = (s.colwise() - s.rowwise().maxCoeff()).array().exp().matrix();
  return a.array().colwise() / a.rowwise().sum().array();
}

}  // namespace detail

inline Eigen::MatrixXd attention_weights(const Eigen::MatrixXd& h, const AttnParams& p, const AttnOptions& opt = {}) {
  detail::check_input(h, p);
  return detail::row_softmax(detail::score_scale(p, opt) * (h * p.wq) * (h * p.wk).transpose());
}

// softmax((H Wq)(H Wk)^T / sqrt(d)) (H Wv), softmax taken per row.
inline Eigen::MatrixXd attention_forward(const Eigen::MatrixXd& h, const AttnParams& p, const AttnOptions& opt = {}) {
  return attention_weights(h, p, opt) * (h * p.wv);
}

// Gradients of sum(upstream .* attention_forward(h, p)).
inline AttnGrads attention_backward(const Eigen::MatrixXd& h, const AttnParams& p, const Eigen::MatrixXd& upstream,
                                    const AttnOptions& opt = {}) {
  detail::check_input(h, p);
  if (upstream.rows() != h.rows() || upstream.cols() != h.cols()) throw ShapeError("upstream shape mismatch");
  const double c = detail::score_scale(p, opt);
  const Eigen::MatrixXd q = h * p.wq;
  const Eigen::MatrixXd k = h * p.wk;
  const Eigen::MatrixXd v = h * p.wv;
  const Eigen::MatrixXd a = detail::row_softmax(c * q * k.transpose());

  const Eigen::MatrixXd dv = a.transpose() * upstream;
  const Eigen::MatrixXd da = upstream * v.transpose();
  const Eigen::VectorXd row_dot = (da.array() * a.array()).rowwise().sum();
  const Eigen::MatrixXd ds = (a.array() * (da.colwise() - row_dot).array()).matrix();
  const Eigen::MatrixXd dq = c * ds * k;
  const Eigen::MatrixXd dk = c * ds.transpose() * q;

  AttnGrads g;
  g.dwq = h.transpose() * dq;
  g.dwk = h.transpose() * dk;
  g.dwv = h.transpose() * dv;
  g.dh = dq * p.wq.transpose() + dk * p.wk.transpose() + dv * p.wv.transpose();
  return g;
}

// Largest relative gap between `grad` and central differences of f around
// `point`; the denominator is max(|analytic|, 1e-8).
inline double finite_diff_check(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& grad,
                                const Eigen::VectorXd& point, double eps) {
  if (!(eps > 0.0)) throw Error("finite difference step must be positive");
  if (grad.size() != point.size()) throw ShapeError("gradient and point differ in size");
  double worst = 0.0;
  Eigen::VectorXd x = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    x[i] = point[i] + eps;
    const double up = f(x);
    x[i] = point[i] - eps;
    const double down = f(x);
    x[i] = point[i];
    const double numeric = (up - down) / (2.0 * eps);
    worst = std::max(worst, std::abs(numeric - grad[i]) / std::max(std::abs(grad[i]), 1e-8));
  }
  return worst;
}

}  // namespace skic
