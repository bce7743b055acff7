#include "gkv/forms.hpp"

namespace gkv {

Form<Jet> exterior_derivative(const Form<Jet>& w) {
  const int n = w.dim();
  if (w.degree() >= n) return Form<Jet>(n, n);
  Form<Jet> out(w.degree() + 1, n);
  for (unsigned s : out.masks()) {
    Jet acc;
    int a = 0;
    for (unsigned rest = s; rest; rest &= rest - 1, ++a) {
      const int i = std::countr_zero(rest);
      const Jet& c = w[s & ~(1u << i)];
      if (c.is_constant()) continue;
      const Jet d = c.derivative(i);
      if (a % 2)
        acc -= d;
      else
        acc += d;
    }
    out[s] = acc;
  }
  return out;
}

Form<Jet> one_form(std::span<const Jet> comps) {
  Form<Jet> out(1, static_cast<int>(comps.size()));
  for (std::size_t i = 0; i < comps.size(); ++i) out[1u << i] = comps[i];
  return out;
}

Form<Jet> two_form(const Matrix<Jet>& m) {
  const int n = static_cast<int>(m.rows());
  Form<Jet> out(2, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out[(1u << i) | (1u << j)] = 0.5 * (m(i, j) - m(j, i));
  return out;
}

double evaluate(const Form<double>& w, std::span<const Vec> vectors) {
  const int k = w.degree();
  if (static_cast<int>(vectors.size()) != k) throw InvalidArgument("form needs one vector per slot");
  if (k == 0) return w[0];
  double total = 0.0;
  for (unsigned s : w.masks()) {
    if (w[s] == 0.0) continue;
    std::vector<int> idx;
    for (unsigned rest = s; rest; rest &= rest - 1) idx.push_back(std::countr_zero(rest));
    Matrix<double> minor(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) minor(r, c) = vectors[c][idx[r]];
    total += w[s] * determinant(minor);
  }
  return total;
}

}  // namespace gkv
