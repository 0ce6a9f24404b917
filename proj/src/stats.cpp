#include "inkmetrics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "inkmetrics/detail/special.hpp"
#include "inkmetrics/detail/textio.hpp"
#include "inkmetrics/errors.hpp"

namespace ink {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ColumnStats {
  double mean = 0.0;
  double sd = 0.0;  // sample
};

ColumnStats column_stats(const std::vector<double>& v) {
  ColumnStats st;
  double n = static_cast<double>(v.size());
  for (double x : v) st.mean += x;
  st.mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - st.mean) * (x - st.mean);
  st.sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return st;
}

// Midranks of the pooled sample plus the tie-group sizes.
std::pair<std::vector<double>, std::vector<std::size_t>> midranks(
    const std::vector<double>& pooled) {
  std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n);
  std::vector<std::size_t> tie_sizes;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return {std::move(ranks), std::move(tie_sizes)};
}

}  // namespace

int MetricMatrix::col_index(const std::string& name) const {
  for (std::size_t j = 0; j < col_names.size(); ++j)
    if (col_names[j] == name) return static_cast<int>(j);
  return -1;
}

std::vector<double> MetricMatrix::column(const std::string& name) const {
  int j = col_index(name);
  if (j < 0) throw ValidationError("no such column: '" + name + "'");
  return values.col(static_cast<std::size_t>(j));
}

void MetricMatrix::validate() const {
  if (values.rows() != row_ids.size() || values.cols() != col_names.size())
    throw ValidationError("metric matrix shape does not match its row/column names");
  for (std::size_t j = 0; j < col_names.size(); ++j) {
    auto col = values.col(j);
    for (double v : col)
      if (!std::isfinite(v))
        throw ValidationError("column '" + col_names[j] + "' contains a non-finite value");
    ColumnStats st = column_stats(col);
    if (!(st.sd > 0.0))
      throw DegeneracyError("column '" + col_names[j] + "' has zero variance");
  }
}

MetricMatrix MetricMatrix::drop_columns(const std::vector<std::string>& names) const {
  std::set<std::string> drop(names.begin(), names.end());
  std::vector<std::string> keep;
  for (const auto& c : col_names)
    if (!drop.count(c)) keep.push_back(c);
  return keep_columns(keep);
}

MetricMatrix MetricMatrix::keep_columns(const std::vector<std::string>& names) const {
  MetricMatrix out;
  out.row_ids = row_ids;
  out.labels = labels;
  out.col_names = names;
  out.values = Mat(row_ids.size(), names.size());
  for (std::size_t j = 0; j < names.size(); ++j) {
    int src = col_index(names[j]);
    if (src < 0) throw ValidationError("no such column: '" + names[j] + "'");
    for (std::size_t i = 0; i < row_ids.size(); ++i)
      out.values(i, j) = values(i, static_cast<std::size_t>(src));
  }
  return out;
}

CorrResult pearson_matrix(const MetricMatrix& x) {
  std::size_t n = x.n_rows();
  std::size_t p = x.n_cols();
  if (n < 3) throw DegeneracyError("pearson_matrix needs at least 3 rows");

  std::vector<std::vector<double>> cols(p);
  std::vector<ColumnStats> stats(p);
  for (std::size_t j = 0; j < p; ++j) {
    cols[j] = x.values.col(j);
    stats[j] = column_stats(cols[j]);
    if (!(stats[j].sd > 0.0))
      throw DegeneracyError("column '" + x.col_names[j] + "' has zero variance");
  }

  CorrResult out;
  out.names = x.col_names;
  out.r = Mat(p, p);
  out.p = Mat(p, p);
  double dof = static_cast<double>(n) - 2.0;
  for (std::size_t a = 0; a < p; ++a) {
    out.r(a, a) = 1.0;
    out.p(a, a) = 0.0;
    for (std::size_t b = a + 1; b < p; ++b) {
      double cov = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        cov += (cols[a][i] - stats[a].mean) * (cols[b][i] - stats[b].mean);
      cov /= static_cast<double>(n) - 1.0;
      double r = std::clamp(cov / (stats[a].sd * stats[b].sd), -1.0, 1.0);
      double pv;
      if (1.0 - r * r <= 0.0) {
        pv = 0.0;
      } else {
        double t = r * std::sqrt(dof / (1.0 - r * r));
        pv = detail::student_t_two_sided_p(t, dof);
      }
      out.r(a, b) = out.r(b, a) = r;
      out.p(a, b) = out.p(b, a) = pv;
    }
  }
  return out;
}

TestResult pearson_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("pearson_test: length mismatch");
  std::size_t n = a.size();
  if (n < 3) throw DegeneracyError("pearson_test needs at least 3 pairs");
  std::vector<double> va(a.begin(), a.end());
  std::vector<double> vb(b.begin(), b.end());
  ColumnStats sa = column_stats(va);
  ColumnStats sb = column_stats(vb);
  if (!(sa.sd > 0.0) || !(sb.sd > 0.0))
    throw DegeneracyError("pearson_test: zero-variance sample");
  double cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) cov += (va[i] - sa.mean) * (vb[i] - sb.mean);
  cov /= static_cast<double>(n) - 1.0;
  double r = std::clamp(cov / (sa.sd * sb.sd), -1.0, 1.0);
  double dof = static_cast<double>(n) - 2.0;
  double pv = 0.0;
  if (1.0 - r * r > 0.0)
    pv = detail::student_t_two_sided_p(r * std::sqrt(dof / (1.0 - r * r)), dof);
  return TestResult{"r", r, dof, pv};
}

MetricMatrix residualize(const MetricMatrix& x, const std::string& covariate) {
  int cov_idx = x.col_index(covariate);
  if (cov_idx < 0) throw ValidationError("residualize: no such covariate '" + covariate + "'");
  if (x.n_rows() < 3) throw DegeneracyError("residualize needs at least 3 rows");

  std::vector<double> c = x.values.col(static_cast<std::size_t>(cov_idx));
  ColumnStats cs = column_stats(c);
  if (!(cs.sd > 0.0))
    throw DegeneracyError("residualize: covariate '" + covariate + "' has zero variance");
  double var_c = cs.sd * cs.sd;

  MetricMatrix out;
  out.row_ids = x.row_ids;
  out.labels = x.labels;
  for (std::size_t j = 0; j < x.n_cols(); ++j)
    if (static_cast<int>(j) != cov_idx) out.col_names.push_back(x.col_names[j]);
  out.values = Mat(x.n_rows(), out.col_names.size());

  std::size_t dst = 0;
  for (std::size_t j = 0; j < x.n_cols(); ++j) {
    if (static_cast<int>(j) == cov_idx) continue;
    std::vector<double> y = x.values.col(j);
    ColumnStats ys = column_stats(y);
    double cov = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) cov += (y[i] - ys.mean) * (c[i] - cs.mean);
    cov /= static_cast<double>(y.size()) - 1.0;
    double slope = cov / var_c;
    double intercept = ys.mean - slope * cs.mean;
    for (std::size_t i = 0; i < y.size(); ++i)
      out.values(i, dst) = y[i] - (intercept + slope * c[i]);
    ++dst;
  }
  return out;
}

double varimax_criterion(const Mat& loadings) {
  std::size_t p = loadings.rows();
  std::size_t k = loadings.cols();
  if (p == 0) return 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      double b2 = loadings(i, j) * loadings(i, j);
      s2 += b2;
      s4 += b2 * b2;
    }
    double dp = static_cast<double>(p);
    total += s4 / dp - (s2 / dp) * (s2 / dp);
  }
  return total;
}

namespace {

// Kaiser's pairwise Varimax. Rotates the (possibly row-normalized) loadings
// in place and accumulates the orthogonal transform; throws when the sweep
// budget runs out before the criterion settles.
Mat varimax_rotate(Mat& b, const PcaOptions& opts) {
  std::size_t p = b.rows();
  std::size_t k = b.cols();
  Mat t = Mat::identity(k);
  double prev = varimax_criterion(b);
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    for (std::size_t x = 0; x + 1 < k; ++x) {
      for (std::size_t y = x + 1; y < k; ++y) {
        double a_sum = 0.0, b_sum = 0.0, c_sum = 0.0, d_sum = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
          double u = b(i, x) * b(i, x) - b(i, y) * b(i, y);
          double v = 2.0 * b(i, x) * b(i, y);
          a_sum += u;
          b_sum += v;
          c_sum += u * u - v * v;
          d_sum += 2.0 * u * v;
        }
        double dp = static_cast<double>(p);
        double num = d_sum - 2.0 * a_sum * b_sum / dp;
        double den = c_sum - (a_sum * a_sum - b_sum * b_sum) / dp;
        if (num == 0.0 && den == 0.0) continue;
        double phi = 0.25 * std::atan2(num, den);
        if (std::fabs(phi) < 1e-12) continue;
        double ca = std::cos(phi);
        double sa = std::sin(phi);
        for (std::size_t i = 0; i < p; ++i) {
          double bx = b(i, x);
          double by = b(i, y);
          b(i, x) = ca * bx + sa * by;
          b(i, y) = -sa * bx + ca * by;
        }
        for (std::size_t i = 0; i < k; ++i) {
          double tx = t(i, x);
          double ty = t(i, y);
          t(i, x) = ca * tx + sa * ty;
          t(i, y) = -sa * tx + ca * ty;
        }
      }
    }
    double cur = varimax_criterion(b);
    if (cur - prev < opts.conv_tol) return t;
    prev = cur;
  }
  throw DegeneracyError("varimax did not converge after " +
                        std::to_string(opts.max_sweeps) + " sweeps");
}

}  // namespace

PcaModel pca_varimax(const MetricMatrix& x, const PcaOptions& opts) {
  std::size_t n = x.n_rows();
  std::size_t p = x.n_cols();
  if (opts.k < 1) throw ValidationError("pca_varimax: k must be positive");
  auto k = static_cast<std::size_t>(opts.k);
  if (k > p)
    throw DegeneracyError("pca_varimax: k=" + std::to_string(opts.k) + " exceeds " +
                          std::to_string(p) + " columns");
  if (n < 3) throw DegeneracyError("pca_varimax needs at least 3 rows");

  PcaModel model;
  model.k = opts.k;
  model.variables = x.col_names;
  if (n <= p)
    model.notes.push_back("fewer rows than columns; loadings may be unstable");

  // Standardize columns; the correlation matrix follows directly.
  Mat z(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> col = x.values.col(j);
    ColumnStats st = column_stats(col);
    if (!(st.sd > 0.0))
      throw DegeneracyError("column '" + x.col_names[j] + "' has zero variance");
    for (std::size_t i = 0; i < n; ++i) z(i, j) = (col[i] - st.mean) / st.sd;
  }
  Mat corr(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += z(i, a) * z(i, b);
      corr(a, b) = corr(b, a) = s / (static_cast<double>(n) - 1.0);
    }

  EigenDecomposition eig = jacobi_eigen_sym(corr);
  for (std::size_t j = 0; j < k; ++j)
    if (eig.values[j] < 1e-12)
      throw DegeneracyError("component " + std::to_string(j + 1) +
                            " has (near-)zero eigenvalue; reduce k");

  // Unrotated loadings: eigenvectors scaled back by sqrt(eigenvalue).
  Mat loadings(p, k);
  for (std::size_t j = 0; j < k; ++j) {
    double s = std::sqrt(eig.values[j]);
    for (std::size_t i = 0; i < p; ++i) loadings(i, j) = eig.vectors(i, j) * s;
  }

  Mat rotation = Mat::identity(k);
  if (opts.rotate && k >= 2) {
    Mat work = loadings;
    std::vector<double> comm(p, 1.0);
    if (opts.kaiser_normalize) {
      for (std::size_t i = 0; i < p; ++i) {
        double h = 0.0;
        for (std::size_t j = 0; j < k; ++j) h += work(i, j) * work(i, j);
        comm[i] = std::sqrt(h);
        if (comm[i] > 0.0)
          for (std::size_t j = 0; j < k; ++j) work(i, j) /= comm[i];
      }
    }
    rotation = varimax_rotate(work, opts);
    loadings = loadings * rotation;
  }

  // Deterministic sign: largest-magnitude loading of each component is
  // positive. Flipping a rotation column flips scores consistently.
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < p; ++i) {
      double m = std::fabs(loadings(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (loadings(arg, j) < 0.0) {
      for (std::size_t i = 0; i < p; ++i) loadings(i, j) = -loadings(i, j);
      for (std::size_t i = 0; i < k; ++i) rotation(i, j) = -rotation(i, j);
    }
  }

  // Scores: standardized data through eigenvectors scaled to unit variance,
  // then the same rotation. Equivalent to the regression weights Z R^-1 L.
  Mat proj(p, k);
  for (std::size_t j = 0; j < k; ++j) {
    double inv = 1.0 / std::sqrt(eig.values[j]);
    for (std::size_t i = 0; i < p; ++i) proj(i, j) = eig.vectors(i, j) * inv;
  }
  model.scores = z * (proj * rotation);

  model.loadings = loadings;
  model.rotation = rotation;
  model.explained.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < p; ++i) ss += loadings(i, j) * loadings(i, j);
    model.explained[j] = ss / static_cast<double>(p);
  }
  return model;
}

std::vector<std::string> prune_loadings(const PcaModel& model, double threshold) {
  std::vector<std::string> retained;
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(model.k); ++j)
      best = std::max(best, std::fabs(model.loadings(i, j)));
    if (best >= threshold) retained.push_back(model.variables[i]);
  }
  if (retained.empty())
    throw DegeneracyError("prune_loadings removed every variable at threshold " +
                          detail::fmt_g6(threshold));
  return retained;
}

std::map<std::string, int> assign_dimensions(const PcaModel& model,
                                             std::vector<std::string>* warnings) {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    std::size_t arg = 0;
    double best = -1.0;
    bool tie = false;
    for (std::size_t j = 0; j < static_cast<std::size_t>(model.k); ++j) {
      double m = std::fabs(model.loadings(i, j));
      if (m > best) {
        best = m;
        arg = j;
        tie = false;
      } else if (m == best) {
        tie = true;
      }
    }
    if (tie && warnings)
      warnings->push_back("variable '" + model.variables[i] +
                          "' ties across components; assigned to the lowest index");
    out[model.variables[i]] = static_cast<int>(arg) + 1;
  }
  return out;
}

std::vector<int> match_components(const PcaModel& a, const PcaModel& b) {
  if (a.k != b.k) throw ValidationError("match_components: models differ in k");
  if (a.k > 8) throw ValidationError("match_components: exhaustive matching supports k <= 8");
  auto k = static_cast<std::size_t>(a.k);

  std::vector<std::size_t> rows_a, rows_b;
  for (std::size_t i = 0; i < a.variables.size(); ++i) {
    for (std::size_t j = 0; j < b.variables.size(); ++j) {
      if (a.variables[i] == b.variables[j]) {
        rows_a.push_back(i);
        rows_b.push_back(j);
        break;
      }
    }
  }
  if (rows_a.empty()) throw DegeneracyError("match_components: no shared variables");

  Mat sim(k, k);
  for (std::size_t ca = 0; ca < k; ++ca) {
    for (std::size_t cb = 0; cb < k; ++cb) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < rows_a.size(); ++i) {
        double va = a.loadings(rows_a[i], ca);
        double vb = b.loadings(rows_b[i], cb);
        dot += va * vb;
        na += va * va;
        nb += vb * vb;
      }
      sim(ca, cb) = (na > 0.0 && nb > 0.0) ? std::fabs(dot) / std::sqrt(na * nb) : 0.0;
    }
  }

  // Exhaustive assignment; k is 3 in practice and never exceeds a dozen.
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_total = -1.0;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += sim(i, static_cast<std::size_t>(perm[i]));
    if (total > best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<std::string> consensus_variables(const PcaModel& a, const PcaModel& b) {
  std::vector<int> match = match_components(a, b);
  std::map<std::string, int> assign_a = assign_dimensions(a);
  std::map<std::string, int> assign_b = assign_dimensions(b);

  std::vector<std::string> out;
  for (const auto& var : a.variables) {
    auto ita = assign_a.find(var);
    auto itb = assign_b.find(var);
    if (ita == assign_a.end() || itb == assign_b.end()) continue;
    int mapped_b = match[static_cast<std::size_t>(ita->second - 1)] + 1;
    if (itb->second == mapped_b) out.push_back(var);
  }
  if (out.empty())
    throw DegeneracyError("consensus_variables: no variable lands on the same dimension");
  return out;
}

namespace {

// Exact two-sided Mann-Whitney p by enumerating every split of the pooled
// ranks; feasible because exactness is only claimed for n1+n2 <= 12.
double mw_exact_p(std::size_t n1, std::size_t n2, double u_obs) {
  std::size_t n = n1 + n2;
  std::size_t total = 0, le = 0, ge = 0;
  double min_rank_sum = static_cast<double>(n1 * (n1 + 1)) / 2.0;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask))) != n1)
      continue;
    double rank_sum = 0.0;
    for (std::size_t bit = 0; bit < n; ++bit)
      if (mask & (1u << bit)) rank_sum += static_cast<double>(bit + 1);
    double u = rank_sum - min_rank_sum;
    ++total;
    if (u <= u_obs) ++le;
    if (u >= u_obs) ++ge;
  }
  double p = 2.0 * std::min(static_cast<double>(le), static_cast<double>(ge)) /
             static_cast<double>(total);
  return std::min(p, 1.0);
}

}  // namespace

TestResult mann_whitney(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("mann_whitney: empty sample");
  std::size_t n1 = a.size();
  std::size_t n2 = b.size();
  std::size_t n = n1 + n2;
  if (n < 3) throw ValidationError("mann_whitney: fewer than 3 observations combined");

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  auto [ranks, tie_sizes] = midranks(pooled);

  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) rank_sum += ranks[i];
  double u = rank_sum - static_cast<double>(n1 * (n1 + 1)) / 2.0;

  bool has_ties = tie_sizes.size() != n;
  double p;
  if (!has_ties && n <= 12) {
    p = mw_exact_p(n1, n2, u);
  } else {
    double dn1 = static_cast<double>(n1);
    double dn2 = static_cast<double>(n2);
    double dn = static_cast<double>(n);
    double tie_term = 0.0;
    for (std::size_t t : tie_sizes) {
      double dt = static_cast<double>(t);
      tie_term += dt * dt * dt - dt;
    }
    double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (var <= 0.0) {
      p = 1.0;  // every observation tied
    } else {
      double z = (std::fabs(u - dn1 * dn2 / 2.0) - 0.5) / std::sqrt(var);
      if (z < 0.0) z = 0.0;
      p = std::min(1.0, 2.0 * detail::normal_sf(z));
    }
  }
  return TestResult{"W", u, kNaN, p};
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ValidationError("kruskal_wallis needs at least 2 groups");
  std::vector<double> pooled;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty())
      throw ValidationError("kruskal_wallis: group " + std::to_string(g) + " is empty");
    pooled.insert(pooled.end(), groups[g].begin(), groups[g].end());
  }
  double dn = static_cast<double>(pooled.size());
  auto [ranks, tie_sizes] = midranks(pooled);

  double tie_term = 0.0;
  for (std::size_t t : tie_sizes) {
    double dt = static_cast<double>(t);
    tie_term += dt * dt * dt - dt;
  }
  double correction = 1.0 - tie_term / (dn * dn * dn - dn);
  if (correction <= 0.0)
    throw DegeneracyError("kruskal_wallis: all observations identical (zero variance)");

  double h = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double rsum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rsum += ranks[offset + i];
    offset += g.size();
    h += rsum * rsum / static_cast<double>(g.size());
  }
  h = 12.0 / (dn * (dn + 1.0)) * h - 3.0 * (dn + 1.0);
  h /= correction;

  double dof = static_cast<double>(groups.size()) - 1.0;
  return TestResult{"H", h, dof, detail::chi_square_sf(h, dof)};
}

TestResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ValidationError("anova_oneway needs at least 2 groups");
  double grand = 0.0;
  double n_total = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2)
      throw ValidationError("anova_oneway: group " + std::to_string(g) +
                            " has fewer than 2 observations");
    for (double v : groups[g]) grand += v;
    n_total += static_cast<double>(groups[g].size());
  }
  grand /= n_total;

  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) ssw += (v - mean) * (v - mean);
  }
  double dfb = static_cast<double>(groups.size()) - 1.0;
  double dfw = n_total - static_cast<double>(groups.size());
  if (ssw <= 0.0) {
    if (ssb <= 0.0)
      throw DegeneracyError("anova_oneway: all observations identical (zero variance)");
    return TestResult{"F", std::numeric_limits<double>::infinity(), dfb, 0.0};
  }
  double f = (ssb / dfb) / (ssw / dfw);
  return TestResult{"F", f, dfb, detail::fisher_f_sf(f, dfb, dfw)};
}

namespace {

TestResult welch_t(std::span<const double> a, std::span<const double> b) {
  std::vector<double> va(a.begin(), a.end());
  std::vector<double> vb(b.begin(), b.end());
  ColumnStats sa = column_stats(va);
  ColumnStats sb = column_stats(vb);
  double n1 = static_cast<double>(va.size());
  double n2 = static_cast<double>(vb.size());
  double se2 = sa.sd * sa.sd / n1 + sb.sd * sb.sd / n2;
  if (se2 <= 0.0) return TestResult{"t", 0.0, n1 + n2 - 2.0, 1.0};
  double t = (sa.mean - sb.mean) / std::sqrt(se2);
  double dof = se2 * se2 /
               (std::pow(sa.sd * sa.sd / n1, 2) / (n1 - 1.0) +
                std::pow(sb.sd * sb.sd / n2, 2) / (n2 - 1.0));
  return TestResult{"t", t, dof, detail::student_t_two_sided_p(t, dof)};
}

}  // namespace

std::vector<PairwiseTest> posthoc_pairwise(const std::vector<std::vector<double>>& groups,
                                           PosthocMethod method) {
  std::vector<PairwiseTest> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      TestResult t = method == PosthocMethod::mann_whitney
                         ? mann_whitney(groups[i], groups[j])
                         : welch_t(groups[i], groups[j]);
      out.push_back(PairwiseTest{i, j, t, t.p_value});
    }
  }
  // Holm step-down adjustment.
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return out[x].test.p_value < out[y].test.p_value;
  });
  double running = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    double adj = out[order[rank]].test.p_value * static_cast<double>(order.size() - rank);
    running = std::max(running, std::min(adj, 1.0));
    out[order[rank]].p_adjusted = running;
  }
  return out;
}

std::string loadings_csv(const PcaModel& model) {
  std::map<std::string, int> assignment =
      model.assignment.empty() ? assign_dimensions(model) : model.assignment;
  std::set<std::string> retained(model.retained.begin(), model.retained.end());
  bool have_retained = !model.retained.empty();

  std::string out = "variable";
  for (int j = 1; j <= model.k; ++j) out += ",dim" + std::to_string(j);
  out += ",assigned_dim,retained\n";
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    out += detail::csv_escape(model.variables[i]);
    for (std::size_t j = 0; j < static_cast<std::size_t>(model.k); ++j)
      out += "," + detail::fmt_g6(model.loadings(i, j));
    out += "," + std::to_string(assignment.at(model.variables[i]));
    bool kept = have_retained ? retained.count(model.variables[i]) > 0 : true;
    out += kept ? ",true\n" : ",false\n";
  }
  return out;
}

std::string scores_csv(const PcaModel& model, const std::vector<std::string>& row_ids) {
  std::string out = "drawing_id";
  for (int j = 1; j <= model.k; ++j) out += ",dim" + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < row_ids.size(); ++i) {
    out += detail::csv_escape(row_ids[i]);
    for (std::size_t j = 0; j < static_cast<std::size_t>(model.k); ++j)
      out += "," + detail::fmt_g6(model.scores(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace ink
