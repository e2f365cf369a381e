#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "homog/errors.hpp"

namespace homog {

/// Tolerance used to classify a weight mean as zero and a positive/negative
/// part as trivial. The shipped weight families have analytically exact
/// means, so the classification is exact for them.
inline constexpr double k_tau_mean = 1e-12;

using Point = std::array<double, 2>;

enum class MeanSign { zero, positive, negative };

struct WeightStats {
  double mean = 0.0;      // integral of rho over the unit cell
  double pos_mass = 0.0;  // integral of rho^+
  double neg_mass = 0.0;  // integral of rho^-
  MeanSign sign_class = MeanSign::zero;
};

/// One harmonic of a trigonometric-polynomial weight:
/// amplitude * sin(2*pi*(freq . y)) or amplitude * cos(...).
struct TrigTerm {
  double amplitude = 0.0;
  std::array<int, 2> freq = {0, 0};
  bool is_sin = true;
};

/// A Y-periodic bounded weight on the unit cell Y = [0,1]^N, N in {1,2}.
/// Two storage families are supported: piecewise-constant values on an
/// m^N cell partition of Y, and trigonometric polynomials. Constant
/// weights and constant shifts are represented within these families
/// (a shift moves cell values resp. the constant term), which keeps
/// means and sup bounds exact under shifting.
class PeriodicWeight {
 public:
  enum class Kind { constant, piecewise, trig };

  static PeriodicWeight constant(int dim, double value) {
    PeriodicWeight w;
    w.kind_ = Kind::constant;
    w.dim_ = check_dim(dim);
    w.constant_ = value;
    w.linf_ = std::abs(value);
    return w;
  }

  /// values are row-major over the m^N partition, axis 0 fastest.
  static PeriodicWeight piecewise(int dim, int cells_per_axis,
                                  std::vector<double> values) {
    PeriodicWeight w;
    w.kind_ = Kind::piecewise;
    w.dim_ = check_dim(dim);
    require(cells_per_axis >= 1, ErrorCode::config_invalid,
            "piecewise weight needs at least one cell per axis");
    std::size_t expect = 1;
    for (int i = 0; i < dim; ++i) expect *= static_cast<std::size_t>(cells_per_axis);
    require(values.size() == expect, ErrorCode::config_invalid,
            "piecewise weight value count does not match the cell partition");
    w.cells_ = cells_per_axis;
    w.values_ = std::move(values);
    w.linf_ = 0.0;
    for (double v : w.values_) w.linf_ = std::max(w.linf_, std::abs(v));
    return w;
  }

  static PeriodicWeight trig(int dim, double constant_term,
                             std::vector<TrigTerm> terms) {
    PeriodicWeight w;
    w.kind_ = Kind::trig;
    w.dim_ = check_dim(dim);
    w.constant_ = constant_term;
    w.linf_ = std::abs(constant_term);
    for (const auto& t : terms) {
      bool nonzero_freq = false;
      for (int i = 0; i < dim; ++i) nonzero_freq |= (t.freq[i] != 0);
      require(nonzero_freq, ErrorCode::config_invalid,
              "trig term needs a nonzero integer frequency; fold constants into "
              "the constant term");
      w.linf_ += std::abs(t.amplitude);
    }
    w.terms_ = std::move(terms);
    return w;
  }

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }

  /// Cached bound with |rho(x)| <= linf_bound() everywhere. Exact for
  /// constant and piecewise weights and for single-harmonic trig weights;
  /// an upper bound (triangle inequality) for general trig polynomials.
  double linf_bound() const { return linf_; }

  double eval(Point x) const {
    switch (kind_) {
      case Kind::constant:
        return constant_;
      case Kind::piecewise: {
        std::size_t idx = 0;
        std::size_t stride = 1;
        for (int i = 0; i < dim_; ++i) {
          double f = x[i] - std::floor(x[i]);
          int c = std::min(static_cast<int>(f * cells_), cells_ - 1);
          idx += stride * static_cast<std::size_t>(c);
          stride *= static_cast<std::size_t>(cells_);
        }
        return values_[idx];
      }
      case Kind::trig: {
        double s = constant_;
        for (const auto& t : terms_) {
          double phase = 0.0;
          for (int i = 0; i < dim_; ++i) phase += t.freq[i] * x[i];
          phase *= 2.0 * std::numbers::pi;
          s += t.amplitude * (t.is_sin ? std::sin(phase) : std::cos(phase));
        }
        return s;
      }
    }
    return 0.0;
  }

  double eval1(double x) const { return eval({x, 0.0}); }

  /// rho_eps(x) = rho(x / eps).
  double eval_scaled(double eps, Point x) const {
    require(eps > 0.0, ErrorCode::nonpositive_eps, "eps must be positive");
    return eval({x[0] / eps, x[1] / eps});
  }

  double eval_scaled1(double eps, double x) const {
    return eval_scaled(eps, {x, 0.0});
  }

  /// The constant-shifted variant rho + c, staying in the same family.
  PeriodicWeight shifted(double c) const {
    PeriodicWeight w = *this;
    switch (kind_) {
      case Kind::constant:
        w.constant_ += c;
        w.linf_ = std::abs(w.constant_);
        break;
      case Kind::piecewise: {
        w.linf_ = 0.0;
        for (double& v : w.values_) {
          v += c;
          w.linf_ = std::max(w.linf_, std::abs(v));
        }
        break;
      }
      case Kind::trig: {
        w.constant_ += c;
        w.linf_ = std::abs(w.constant_);
        for (const auto& t : w.terms_) w.linf_ += std::abs(t.amplitude);
        break;
      }
    }
    return w;
  }

  PeriodicWeight negated() const {
    PeriodicWeight w = *this;
    switch (kind_) {
      case Kind::constant:
        w.constant_ = -w.constant_;
        break;
      case Kind::piecewise:
        for (double& v : w.values_) v = -v;
        break;
      case Kind::trig:
        w.constant_ = -w.constant_;
        for (auto& t : w.terms_) t.amplitude = -t.amplitude;
        break;
    }
    return w;
  }

  /// Exact mean over Y: cell average for piecewise, the constant term for
  /// trig polynomials (all nonzero harmonics integrate to zero).
  double exact_mean() const {
    switch (kind_) {
      case Kind::constant:
        return constant_;
      case Kind::piecewise: {
        double s = 0.0;
        for (double v : values_) s += v;
        return s / static_cast<double>(values_.size());
      }
      case Kind::trig:
        return constant_;
    }
    return 0.0;
  }

  // Accessors used by quadrature code.
  int piecewise_cells() const { return cells_; }
  const std::vector<double>& piecewise_values() const { return values_; }
  double constant_term() const { return constant_; }
  const std::vector<TrigTerm>& trig_terms() const { return terms_; }

  /// Largest absolute integer frequency across terms, per axis 1 for
  /// piecewise weights this is the cell count.
  int oscillation_frequency() const {
    switch (kind_) {
      case Kind::constant:
        return 0;
      case Kind::piecewise:
        return cells_;
      case Kind::trig: {
        int f = 0;
        for (const auto& t : terms_)
          f = std::max({f, std::abs(t.freq[0]), std::abs(t.freq[1])});
        return f;
      }
    }
    return 0;
  }

  bool operator==(const PeriodicWeight& o) const {
    if (kind_ != o.kind_ || dim_ != o.dim_) return false;
    switch (kind_) {
      case Kind::constant:
        return constant_ == o.constant_;
      case Kind::piecewise:
        return cells_ == o.cells_ && values_ == o.values_;
      case Kind::trig: {
        if (constant_ != o.constant_ || terms_.size() != o.terms_.size())
          return false;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
          if (terms_[i].amplitude != o.terms_[i].amplitude ||
              terms_[i].freq != o.terms_[i].freq ||
              terms_[i].is_sin != o.terms_[i].is_sin)
            return false;
        }
        return true;
      }
    }
    return false;
  }

 private:
  static int check_dim(int dim) {
    require(dim == 1 || dim == 2, ErrorCode::unsupported_dimension,
            "weights support N in {1,2}");
    return dim;
  }

  Kind kind_ = Kind::constant;
  int dim_ = 1;
  double constant_ = 0.0;
  int cells_ = 1;
  std::vector<double> values_;
  std::vector<TrigTerm> terms_;
  double linf_ = 0.0;
};

/// Integral statistics of a weight over Y. The mean is exact for every
/// shipped family; positive/negative parts are exact for piecewise weights
/// and use composite midpoint quadrature with quad_n points per axis for
/// trig polynomials.
inline WeightStats weight_stats(const PeriodicWeight& w, int quad_n = 1024) {
  require(quad_n >= 2, ErrorCode::config_invalid,
          "weight_stats needs at least 2 quadrature points per axis");
  WeightStats st;
  st.mean = w.exact_mean();
  switch (w.kind()) {
    case PeriodicWeight::Kind::constant: {
      double v = w.constant_term();
      st.pos_mass = std::max(v, 0.0);
      st.neg_mass = std::max(-v, 0.0);
      break;
    }
    case PeriodicWeight::Kind::piecewise: {
      const auto& vals = w.piecewise_values();
      double cell = 1.0 / static_cast<double>(vals.size());
      for (double v : vals) {
        st.pos_mass += std::max(v, 0.0) * cell;
        st.neg_mass += std::max(-v, 0.0) * cell;
      }
      break;
    }
    case PeriodicWeight::Kind::trig: {
      const int n = quad_n;
      if (w.dimension() == 1) {
        for (int i = 0; i < n; ++i) {
          double x = (i + 0.5) / n;
          double v = w.eval({x, 0.0});
          st.pos_mass += std::max(v, 0.0);
          st.neg_mass += std::max(-v, 0.0);
        }
        st.pos_mass /= n;
        st.neg_mass /= n;
      } else {
        for (int j = 0; j < n; ++j) {
          double y = (j + 0.5) / n;
          for (int i = 0; i < n; ++i) {
            double x = (i + 0.5) / n;
            double v = w.eval({x, y});
            st.pos_mass += std::max(v, 0.0);
            st.neg_mass += std::max(-v, 0.0);
          }
        }
        st.pos_mass /= static_cast<double>(n) * n;
        st.neg_mass /= static_cast<double>(n) * n;
      }
      break;
    }
  }
  if (st.mean > k_tau_mean)
    st.sign_class = MeanSign::positive;
  else if (st.mean < -k_tau_mean)
    st.sign_class = MeanSign::negative;
  else
    st.sign_class = MeanSign::zero;
  return st;
}

inline bool has_nontrivial_positive_part(const PeriodicWeight& w) {
  return weight_stats(w).pos_mass > k_tau_mean;
}

inline bool has_nontrivial_negative_part(const PeriodicWeight& w) {
  return weight_stats(w).neg_mass > k_tau_mean;
}

}  // namespace homog
