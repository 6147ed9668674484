#include "sememe/factorization.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "sememe/error.hpp"
#include "sememe/io.hpp"

namespace sememe {

bool FactorParams::all_finite() const {
  return sememe_vectors.allFinite() && context_vectors.allFinite() && row_bias.allFinite() &&
         sememe_bias.allFinite();
}

FactorParams init_factor_params(Index sememes, Index rows, Index dim, Rng& rng) {
  FactorParams p;
  const double half = 0.5 / static_cast<double>(dim);
  p.sememe_vectors.resize(sememes, dim);
  p.context_vectors.resize(sememes, dim);
  for (Index j = 0; j < sememes; ++j) {
    for (Index d = 0; d < dim; ++d) p.sememe_vectors(j, d) = rng.uniform(-half, half);
  }
  for (Index j = 0; j < sememes; ++j) {
    for (Index d = 0; d < dim; ++d) p.context_vectors(j, d) = rng.uniform(-half, half);
  }
  p.row_bias = Vector::Zero(rows);
  p.sememe_bias = Vector::Zero(sememes);
  return p;
}

FactorParams zeros_like(const FactorParams& p) {
  FactorParams z;
  z.sememe_vectors = RowMatrix::Zero(p.sememe_vectors.rows(), p.sememe_vectors.cols());
  z.context_vectors = RowMatrix::Zero(p.context_vectors.rows(), p.context_vectors.cols());
  z.row_bias = Vector::Zero(p.row_bias.size());
  z.sememe_bias = Vector::Zero(p.sememe_bias.size());
  return z;
}

namespace detail {

double learning_rate(double lr0, int epoch, int epochs) {
  if (epochs <= 1) return lr0;
  const double t = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
  return lr0 * (1.0 - 0.9 * t);
}

namespace {

// Visits linear cell indices in [0, total) selected independently with
// probability p, in ascending order.
template <typename Fn>
void sample_cells(std::uint64_t total, double p, Rng& rng, Fn&& visit) {
  if (p <= 0.0 || total == 0) return;
  std::uint64_t pos = rng.geometric_gap(p);
  while (pos < total) {
    visit(pos);
    const std::uint64_t gap = rng.geometric_gap(p);
    if (gap >= total - pos) break;
    pos += gap + 1;
  }
}

}  // namespace

std::vector<Cell> correlation_cells(const SememeCorrelation& corr, double zero_prob, Rng& rng) {
  std::vector<Cell> cells;
  cells.reserve(corr.entries().size() * 2);
  for (const auto& e : corr.entries()) {
    cells.push_back({e.first, e.second, e.value});
    if (e.first != e.second) cells.push_back({e.second, e.first, e.value});
  }
  const auto m = static_cast<std::uint64_t>(corr.sememe_count());
  sample_cells(m * m, zero_prob, rng, [&](std::uint64_t pos) {
    const auto j = static_cast<Index>(pos / m);
    const auto k = static_cast<Index>(pos % m);
    if (!corr.value(j, k)) cells.push_back({j, k, 0.0});
  });
  return cells;
}

std::vector<Cell> annotation_cells(const AnnotationSet& rows, double zero_prob, Rng& rng) {
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(rows.pair_count()));
  for (Index i = 0; i < rows.word_count(); ++i) {
    for (Index j : rows.sememes_of(i)) cells.push_back({i, j, 1.0});
  }
  const auto m = static_cast<std::uint64_t>(rows.sememe_count());
  const auto n = static_cast<std::uint64_t>(rows.word_count());
  sample_cells(n * m, zero_prob, rng, [&](std::uint64_t pos) {
    const auto i = static_cast<Index>(pos / m);
    const auto j = static_cast<Index>(pos % m);
    if (!rows.annotated(i, j)) cells.push_back({i, j, 0.0});
  });
  return cells;
}

void correlation_step(FactorParams& p, const Cell& cell, double weight, double lr) {
  auto s = p.sememe_vectors.row(cell.row);
  auto sbar = p.context_vectors.row(cell.col);
  const double err = s.dot(sbar) - cell.target;
  const double g = 2.0 * weight * err * lr;
  const Eigen::RowVectorXd s_old = s;
  s -= g * sbar;
  sbar -= g * s_old;
}

double correlation_objective(const FactorParams& p, const Matrix& dense_corr, double weight) {
  if (weight == 0.0) return 0.0;
  const Matrix q = p.sememe_vectors * p.context_vectors.transpose() - dense_corr;
  return weight * q.squaredNorm();
}

void add_correlation_gradient(const FactorParams& p, const Matrix& dense_corr, double weight, FactorParams& grad) {
  if (weight == 0.0) return;
  const Matrix q = p.sememe_vectors * p.context_vectors.transpose() - dense_corr;
  grad.sememe_vectors += 2.0 * weight * q * p.context_vectors;
  grad.context_vectors += 2.0 * weight * q.transpose() * p.sememe_vectors;
}

void require_finite(const FactorParams& p, const std::string& model, int epoch) {
  if (!p.all_finite()) {
    throw Error(Errc::NonFiniteLoss, model + " parameters became non-finite in epoch " + std::to_string(epoch));
  }
}

}  // namespace detail

void write_factor_checkpoint(std::ostream& out, const std::string& kind, const std::vector<std::string>& sememes,
                             const std::vector<std::string>& row_keys, const FactorParams& params) {
  out << "sememe-factorization\t" << kind << '\n';
  out << "dim\t" << params.dim() << '\n';
  out << "sememes\t" << sememes.size() << '\n';
  out << "rows\t" << row_keys.size() << '\n';
  for (std::size_t j = 0; j < sememes.size(); ++j) {
    const auto jj = static_cast<Index>(j);
    out << "sememe\t" << sememes[j] << '\t' << format_real(params.sememe_bias(jj));
    for (Index d = 0; d < params.dim(); ++d) out << '\t' << format_real(params.sememe_vectors(jj, d));
    for (Index d = 0; d < params.dim(); ++d) out << '\t' << format_real(params.context_vectors(jj, d));
    out << '\n';
  }
  for (std::size_t r = 0; r < row_keys.size(); ++r) {
    out << "row\t" << row_keys[r] << '\t' << format_real(params.row_bias(static_cast<Index>(r))) << '\n';
  }
}

FactorCheckpoint read_factor_checkpoint(std::istream& in, const std::string& source) {
  FactorCheckpoint ck;
  std::string line;
  long long line_no = 0;
  const auto fail = [&](const std::string& why) {
    return Error(Errc::MalformedLine, source + ":" + std::to_string(line_no) + ": " + why);
  };
  const auto header = [&](std::string_view key) {
    ++line_no;
    if (!std::getline(in, line)) throw fail("truncated checkpoint");
    const auto f = split_on(line, '\t');
    if (f.size() != 2 || f[0] != key) throw fail("expected '" + std::string(key) + "'");
    return std::string(f[1]);
  };
  ck.kind = header("sememe-factorization");
  long long dim, m, n;
  if (!parse_integer(header("dim"), dim) || dim < 1) throw fail("bad dim");
  if (!parse_integer(header("sememes"), m) || m < 0) throw fail("bad sememe count");
  if (!parse_integer(header("rows"), n) || n < 0) throw fail("bad row count");

  auto& p = ck.params;
  p.sememe_vectors.resize(m, dim);
  p.context_vectors.resize(m, dim);
  p.sememe_bias.resize(m);
  p.row_bias.resize(n);
  for (long long j = 0; j < m; ++j) {
    ++line_no;
    if (!std::getline(in, line)) throw fail("truncated checkpoint");
    const auto f = split_on(line, '\t');
    if (static_cast<long long>(f.size()) != 3 + 2 * dim || f[0] != "sememe") throw fail("bad sememe row");
    ck.sememes.emplace_back(f[1]);
    if (!parse_real(f[2], p.sememe_bias(j))) throw fail("bad bias");
    for (long long d = 0; d < dim; ++d) {
      if (!parse_real(f[static_cast<std::size_t>(3 + d)], p.sememe_vectors(j, d)) ||
          !parse_real(f[static_cast<std::size_t>(3 + dim + d)], p.context_vectors(j, d))) {
        throw fail("bad vector value");
      }
    }
  }
  for (long long r = 0; r < n; ++r) {
    ++line_no;
    if (!std::getline(in, line)) throw fail("truncated checkpoint");
    const auto f = split_on(line, '\t');
    if (f.size() != 3 || f[0] != "row") throw fail("bad row entry");
    ck.row_keys.emplace_back(f[1]);
    if (!parse_real(f[2], p.row_bias(r))) throw fail("bad bias");
  }
  return ck;
}

}  // namespace sememe
