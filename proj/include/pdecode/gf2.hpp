#ifndef PDECODE_GF2_HPP
#define PDECODE_GF2_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdecode/types.hpp"

namespace pdecode {

// Binary parity-check matrix with precomputed support sets.
// row_support(i) = A(i) = { j : H_ij = 1 }, col_support(j) = B(j) = { i : H_ij = 1 }.
// Construction rejects all-zero rows and columns.
class ParityCheckMatrix {
 public:
  ParityCheckMatrix(size_t m, size_t n, const BitVec& row_major_bits);

  size_t rows() const { return m_; }
  size_t cols() const { return n_; }
  bool bit(size_t i, size_t j) const { return (packed_[i * words_per_row_ + (j >> 6)] >> (j & 63)) & 1u; }

  const std::vector<size_t>& row_support(size_t i) const { return row_support_[i]; }
  const std::vector<size_t>& col_support(size_t j) const { return col_support_[j]; }

  // GF(2) rank via bitset-packed Gaussian elimination, leftmost-column pivoting.
  size_t rank() const;

  // Basis of the null space over GF(2); each basis vector has length n.
  // Derived from the RREF with free columns taken in ascending order, so the
  // basis (and everything enumerated from it) is deterministic.
  std::vector<BitVec> null_space_basis() const;

 private:
  size_t m_ = 0, n_ = 0, words_per_row_ = 0;
  std::vector<std::uint64_t> packed_; // row-major, words_per_row_ per row
  std::vector<std::vector<size_t>> row_support_;
  std::vector<std::vector<size_t>> col_support_;
};

// Parses the plain-text parity-check format: optional '#' comment lines,
// a dimension line "m n", then m rows of n space-separated 0/1 symbols.
// Throws std::invalid_argument on malformed dimensions, non-binary symbols,
// or degenerate (all-zero) rows/columns.
ParityCheckMatrix load_parity_check(const std::string& text);
ParityCheckMatrix load_parity_check_file(const std::string& path);

// Syndrome Hb over GF(2); b has length n, result has length m.
BitVec syndrome(const ParityCheckMatrix& H, const BitVec& b);

struct Codebook {
  std::vector<BipolarWord> words; // 2^k bipolar codewords, canonical order
  size_t dimension = 0;           // k = n - rank(H)
};

inline constexpr std::uint64_t kDefaultCodebookCap = 1ull << 20;

// All bipolar codewords of C(H), enumerated by a binary counter over the
// canonical null-space basis (index 0 is the all-(+1) word). Throws when
// 2^(n - rank) exceeds the cap.
Codebook enumerate_codebook(const ParityCheckMatrix& H, std::uint64_t cap = kDefaultCodebookCap);

// One word per line, entries "+1"/"-1" separated by spaces.
std::string codebook_to_text(const Codebook& book);

// Exhaustive ML decoding: argmin over the codebook of ||y - forward(s)||^2,
// ties broken by lowest codebook index. The forward map is the noiseless
// channel s -> r. Throws on an empty codebook.
BipolarWord ml_decode(const RealVec& y,
                      const std::function<RealVec(const BipolarWord&)>& forward,
                      const Codebook& book);

// ML against precomputed channel images (images[w] = forward(words[w])).
size_t ml_decode_index(const RealVec& y, const std::vector<RealVec>& images);
size_t ml_decode_index(const CplxVec& y, const std::vector<CplxVec>& images);

// Uniform random codeword without materializing the codebook: XOR-combines
// the null-space basis with k random bits (one u64 draw per 64 bits).
class CodewordSampler {
 public:
  explicit CodewordSampler(const ParityCheckMatrix& H);
  size_t dimension() const { return basis_.size(); }
  size_t block_length() const { return n_; }
  BipolarWord sample(class RngStream& rng) const;

 private:
  size_t n_;
  std::vector<BitVec> basis_;
};

} // namespace pdecode

#endif
