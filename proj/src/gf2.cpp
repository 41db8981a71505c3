#include "pdecode/gf2.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pdecode/rng.hpp"

namespace pdecode {

ParityCheckMatrix::ParityCheckMatrix(size_t m, size_t n, const BitVec& bits) : m_(m), n_(n) {
  if (m == 0 || n == 0) throw std::invalid_argument("parity check: dimensions must be positive");
  if (bits.size() != m * n) throw std::invalid_argument("parity check: bit count does not match dimensions");
  words_per_row_ = (n + 63) / 64;
  packed_.assign(m * words_per_row_, 0);
  row_support_.resize(m);
  col_support_.resize(n);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const std::uint8_t v = bits[i * n + j];
      if (v > 1) throw std::invalid_argument("parity check: entries must be 0 or 1");
      if (v) {
        packed_[i * words_per_row_ + (j >> 6)] |= 1ull << (j & 63);
        row_support_[i].push_back(j);
        col_support_[j].push_back(i);
      }
    }
    if (row_support_[i].empty())
      throw std::invalid_argument("parity check: all-zero row " + std::to_string(i + 1));
  }
  for (size_t j = 0; j < n; ++j)
    if (col_support_[j].empty())
      throw std::invalid_argument("parity check: all-zero column " + std::to_string(j + 1));
}

namespace {

// Row-reduce a packed copy; returns pivot columns. Pivoting scans columns
// left to right, so the reduction is deterministic.
std::vector<size_t> rref(std::vector<std::uint64_t>& rows, size_t m, size_t n, size_t wpr) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t j = 0; j < n && r < m; ++j) {
    const size_t w = j >> 6;
    const std::uint64_t mask = 1ull << (j & 63);
    size_t p = r;
    while (p < m && !(rows[p * wpr + w] & mask)) ++p;
    if (p == m) continue;
    for (size_t t = 0; t < wpr; ++t) std::swap(rows[r * wpr + t], rows[p * wpr + t]);
    for (size_t i = 0; i < m; ++i) {
      if (i != r && (rows[i * wpr + w] & mask))
        for (size_t t = 0; t < wpr; ++t) rows[i * wpr + t] ^= rows[r * wpr + t];
    }
    pivots.push_back(j);
    ++r;
  }
  return pivots;
}

} // namespace

size_t ParityCheckMatrix::rank() const {
  std::vector<std::uint64_t> rows = packed_;
  return rref(rows, m_, n_, words_per_row_).size();
}

std::vector<BitVec> ParityCheckMatrix::null_space_basis() const {
  std::vector<std::uint64_t> rows = packed_;
  const std::vector<size_t> pivots = rref(rows, m_, n_, words_per_row_);

  std::vector<bool> is_pivot(n_, false);
  for (size_t j : pivots) is_pivot[j] = true;

  std::vector<BitVec> basis;
  for (size_t f = 0; f < n_; ++f) {
    if (is_pivot[f]) continue;
    BitVec v(n_, 0);
    v[f] = 1;
    // pivot row r has its pivot at pivots[r]; solve x_pivot = sum over free cols
    for (size_t r = 0; r < pivots.size(); ++r) {
      if ((rows[r * words_per_row_ + (f >> 6)] >> (f & 63)) & 1u) v[pivots[r]] = 1;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

ParityCheckMatrix load_parity_check(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  size_t m = 0, n = 0;
  bool have_dims = false;
  BitVec bits;
  size_t rows_read = 0;

  while (std::getline(in, line)) {
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ls(line);
    if (!have_dims) {
      long long mm = 0, nn = 0;
      std::string extra;
      if (!(ls >> mm >> nn) || (ls >> extra) || mm < 1 || nn < 1)
        throw std::invalid_argument("parity check: malformed dimension line");
      m = static_cast<size_t>(mm);
      n = static_cast<size_t>(nn);
      bits.reserve(m * n);
      have_dims = true;
      continue;
    }
    if (rows_read == m) throw std::invalid_argument("parity check: more rows than declared");
    std::string tok;
    size_t count = 0;
    while (ls >> tok) {
      if (tok != "0" && tok != "1")
        throw std::invalid_argument("parity check: non-binary symbol '" + tok + "'");
      if (count == n) throw std::invalid_argument("parity check: row longer than declared");
      bits.push_back(tok == "1" ? 1 : 0);
      ++count;
    }
    if (count != n) throw std::invalid_argument("parity check: row shorter than declared");
    ++rows_read;
  }
  if (!have_dims) throw std::invalid_argument("parity check: empty input");
  if (rows_read != m) throw std::invalid_argument("parity check: fewer rows than declared");
  return ParityCheckMatrix(m, n, bits);
}

ParityCheckMatrix load_parity_check_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open parity check file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_parity_check(ss.str());
}

BitVec syndrome(const ParityCheckMatrix& H, const BitVec& b) {
  if (b.size() != H.cols()) throw std::invalid_argument("syndrome: vector length mismatch");
  BitVec s(H.rows(), 0);
  for (size_t i = 0; i < H.rows(); ++i) {
    std::uint8_t acc = 0;
    for (size_t j : H.row_support(i)) acc ^= (b[j] & 1u);
    s[i] = acc;
  }
  return s;
}

Codebook enumerate_codebook(const ParityCheckMatrix& H, std::uint64_t cap) {
  const std::vector<BitVec> basis = H.null_space_basis();
  const size_t k = basis.size();
  if (k >= 64 || (1ull << k) > cap)
    throw std::invalid_argument("codebook size 2^" + std::to_string(k) + " exceeds cap");

  Codebook book;
  book.dimension = k;
  const std::uint64_t count = 1ull << k;
  book.words.reserve(count);
  const size_t n = H.cols();
  for (std::uint64_t w = 0; w < count; ++w) {
    BitVec b(n, 0);
    for (size_t t = 0; t < k; ++t) {
      if ((w >> t) & 1u)
        for (size_t j = 0; j < n; ++j) b[j] ^= basis[t][j];
    }
    book.words.push_back(bipolar_map(b));
  }
  return book;
}

std::string codebook_to_text(const Codebook& book) {
  std::string out;
  for (const BipolarWord& w : book.words) {
    for (size_t j = 0; j < w.size(); ++j) {
      if (j) out += ' ';
      out += (w[j] > 0 ? "+1" : "-1");
    }
    out += '\n';
  }
  return out;
}

BipolarWord ml_decode(const RealVec& y,
                      const std::function<RealVec(const BipolarWord&)>& forward,
                      const Codebook& book) {
  if (book.words.empty()) throw std::invalid_argument("ml_decode: empty codebook");
  size_t best = 0;
  double best_cost = 0;
  for (size_t w = 0; w < book.words.size(); ++w) {
    const RealVec r = forward(book.words[w]);
    if (r.size() != y.size()) throw std::invalid_argument("ml_decode: forward map length mismatch");
    double cost = 0;
    for (size_t i = 0; i < y.size(); ++i) {
      const double d = y[i] - r[i];
      cost += d * d;
    }
    if (w == 0 || cost < best_cost) { // strict <, so ties keep the lowest index
      best = w;
      best_cost = cost;
    }
  }
  return book.words[best];
}

size_t ml_decode_index(const RealVec& y, const std::vector<RealVec>& images) {
  if (images.empty()) throw std::invalid_argument("ml_decode: empty codebook");
  size_t best = 0;
  double best_cost = 0;
  for (size_t w = 0; w < images.size(); ++w) {
    double cost = 0;
    for (size_t i = 0; i < y.size(); ++i) {
      const double d = y[i] - images[w][i];
      cost += d * d;
    }
    if (w == 0 || cost < best_cost) {
      best = w;
      best_cost = cost;
    }
  }
  return best;
}

size_t ml_decode_index(const CplxVec& y, const std::vector<CplxVec>& images) {
  if (images.empty()) throw std::invalid_argument("ml_decode: empty codebook");
  size_t best = 0;
  double best_cost = 0;
  for (size_t w = 0; w < images.size(); ++w) {
    double cost = 0;
    for (size_t i = 0; i < y.size(); ++i) cost += std::norm(y[i] - images[w][i]);
    if (w == 0 || cost < best_cost) {
      best = w;
      best_cost = cost;
    }
  }
  return best;
}

CodewordSampler::CodewordSampler(const ParityCheckMatrix& H)
    : n_(H.cols()), basis_(H.null_space_basis()) {}

BipolarWord CodewordSampler::sample(RngStream& rng) const {
  BitVec b(n_, 0);
  std::uint64_t draw = 0;
  for (size_t t = 0; t < basis_.size(); ++t) {
    if ((t & 63) == 0) draw = rng.next_u64();
    if ((draw >> (t & 63)) & 1u)
      for (size_t j = 0; j < n_; ++j) b[j] ^= basis_[t][j];
  }
  return bipolar_map(b);
}

} // namespace pdecode
