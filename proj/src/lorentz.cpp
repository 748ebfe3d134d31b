#include "sdlab/lorentz.hpp"

namespace sdlab {

double Rearrangement::operator()(double tau) const {
  if (tau < 0.0) throw std::invalid_argument("rearrangement: tau must be >= 0");
  const auto k = static_cast<std::size_t>(std::floor(tau / cell));
  return k < values.size() ? values[k] : 0.0;
}

double Rearrangement::distribution(double t) const {
  // values are descending; count entries strictly above t.
  const auto it = std::partition_point(values.begin(), values.end(), [t](double x) { return x > t; });
  return cell * static_cast<double>(it - values.begin());
}

WeakNorms weak_norms(const Rearrangement& rearr, double r) {
  if (!(r > 1.0)) throw std::invalid_argument("weak norms need r > 1");
  const double inv_r = 1.0 / r;
  const double a = rearr.cell;
  WeakNorms out{0.0, 0.0};
  double partial = 0.0;
  for (std::size_t k = 1; k <= rearr.values.size(); ++k) {
    const double fk = rearr.values[k - 1];
    if (fk == 0.0) break;
    partial += fk;
    const double tk = a * static_cast<double>(k);
    const double tk_pow = std::pow(tk, inv_r);
    out.quasi = std::max(out.quasi, fk * tk_pow);
    // On cell k, t^{1/r} f**(t) = t^{1/r - 1} (c + fk t) with
    // c = a S_{k-1} - (k-1) a fk >= 0. Its only stationary point,
    // t = c (r - 1) / fk, is a minimum, so the sup sits at a cell end.
    out.full = std::max(out.full, tk_pow / tk * (a * partial));
  }
  return out;
}

namespace {

template <typename Scalar>
double subgrid_quasi(const Field<Scalar>& f, double r) {
  const Grid& g = f.grid();
  const Index N = g.points_per_dim();
  const Index half = N / 2;
  const int n = g.dim();
  Index m = 1;
  for (int a = 0; a < n; ++a) m *= half;
  RealArray sub(m);
  for (Index s = 0; s < m; ++s) {
    std::array<Index, 3> idx{0, 0, 0};
    Index rem = s;
    for (int a = n - 1; a >= 0; --a) {
      idx[a] = 2 * (rem % half);
      rem /= half;
    }
    sub[s] = std::abs(f.values()[g.ravel(idx)]);
  }
  return weak_quasi_norm(sub, std::pow(2.0 * g.dx(), n), r);
}

template <typename Scalar>
WeakNormReport report_impl(const Field<Scalar>& f, double r, bool keep) {
  WeakNormReport rep;
  rep.r = r;
  Rearrangement rearr = decreasing_rearrangement(f);
  const WeakNorms w = weak_norms(rearr, r);
  rep.quasi_norm = w.quasi;
  rep.full_norm = w.full;
  rep.strong_norm = strong_norm(f, r);
  if (w.quasi > 0.0) rep.truncation_sensitivity = std::abs(w.quasi - subgrid_quasi(f, r)) / w.quasi;
  if (keep) rep.rearrangement = std::move(rearr);
  return rep;
}

}  // namespace

WeakNormReport weak_norm_report(const ComplexField& f, double r, bool keep) { return report_impl(f, r, keep); }
WeakNormReport weak_norm_report(const RealField& f, double r, bool keep) { return report_impl(f, r, keep); }

}  // namespace sdlab
