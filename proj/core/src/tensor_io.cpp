#include "tkz/tensor_io.hpp"

#include "key_value.hpp"
#include "tkz/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace tkz {

namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 4> kMagic = {'T', '3', 'D', '1'};
// Refuse headers that would allocate absurd amounts of memory.
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 34;

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ParseError("TensorFile: truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

void write_tensor(std::ostream& out, const Tensor3& t) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, t.rows());
  put_u64(out, t.cols());
  put_u64(out, t.tubes());
  for (double v : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw ParseError("TensorFile: write failed");
}

Tensor3 read_tensor(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError("TensorFile: bad magic (expected T3D1)");
  }
  const std::uint64_t m = get_u64(in);
  const std::uint64_t l = get_u64(in);
  const std::uint64_t n = get_u64(in);
  if (m == 0 || l == 0 || n == 0) throw ParseError("TensorFile: zero dimension");
  if (m > kMaxEntries / l || m * l > kMaxEntries / n) {
    throw ParseError("TensorFile: dimensions too large");
  }
  std::vector<double> data(m * l * n);
  for (double& v : data) v = std::bit_cast<double>(get_u64(in));
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("TensorFile: trailing bytes after payload");
  }
  return Tensor3(m, l, n, std::move(data));
}

void save_tensor(const fs::path& path, const Tensor3& t) {
  auto out = open_out(path);
  write_tensor(out, t);
}

Tensor3 load_tensor(const fs::path& path) {
  auto in = open_in(path);
  try {
    return read_tensor(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_pgm(const fs::path& path, const Eigen::MatrixXd& image) {
  auto out = open_out(path);
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(std::round(image(r, c)), 0.0, 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(v)));
    }
  }
  if (!out) throw ParseError(path.string() + ": write failed");
}

namespace {

// Next header token, skipping whitespace and comments.
std::size_t pgm_number(std::istream& in, const fs::path& path) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  if (ch == EOF || !std::isdigit(ch)) throw ParseError(path.string() + ": malformed PGM header");
  std::size_t v = 0;
  while (ch != EOF && std::isdigit(ch)) {
    v = v * 10 + static_cast<std::size_t>(ch - '0');
    if (v > 1u << 20) throw ParseError(path.string() + ": PGM dimension too large");
    ch = in.get();
  }
  // exactly one whitespace byte follows the last header field
  if (ch == EOF || !std::isspace(ch)) throw ParseError(path.string() + ": malformed PGM header");
  return v;
}

}  // namespace

Eigen::MatrixXd load_pgm(const fs::path& path) {
  auto in = open_in(path);
  char magic[2];
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') {
    throw ParseError(path.string() + ": not a binary PGM (P5)");
  }
  const std::size_t width = pgm_number(in, path);
  const std::size_t height = pgm_number(in, path);
  const std::size_t maxval = pgm_number(in, path);
  if (width == 0 || height == 0) throw ParseError(path.string() + ": empty image");
  if (maxval == 0 || maxval > 255) {
    throw ParseError(path.string() + ": only 8-bit PGM is supported");
  }
  Eigen::MatrixXd img(height, width);
  std::vector<unsigned char> row(width);
  for (std::size_t r = 0; r < height; ++r) {
    if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(width))) {
      throw ParseError(path.string() + ": truncated pixel data");
    }
    for (std::size_t c = 0; c < width; ++c) {
      img(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<double>(row[c]) * 255.0 / static_cast<double>(maxval);
    }
  }
  return img;
}

Eigen::MatrixXd stack_frame(const Tensor3& stack, std::size_t frame) {
  if (frame >= stack.cols()) throw std::out_of_range("frame index out of range");
  Eigen::MatrixXd img(stack.rows(), stack.tubes());
  for (std::size_t k = 0; k < stack.tubes(); ++k)
    for (std::size_t r = 0; r < stack.rows(); ++r)
      img(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = stack(r, frame, k);
  return img;
}

Tensor3 stack_from_frames(const std::vector<Eigen::MatrixXd>& frames) {
  if (frames.empty()) throw InvalidProblem("no frames given");
  const auto h = static_cast<std::size_t>(frames.front().rows());
  const auto w = static_cast<std::size_t>(frames.front().cols());
  Tensor3 stack(h, frames.size(), w);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (static_cast<std::size_t>(frames[f].rows()) != h ||
        static_cast<std::size_t>(frames[f].cols()) != w) {
      throw DimensionError("frame " + std::to_string(f) + " size differs from frame 0");
    }
    for (std::size_t k = 0; k < w; ++k)
      for (std::size_t r = 0; r < h; ++r)
        stack(r, f, k) = frames[f](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
  }
  return stack;
}

void save_problem(const fs::path& dir, const GeneratedProblem& gp) {
  const FeasibilityProblem& p = gp.problem;
  fs::create_directories(dir);
  std::ofstream meta(dir / "problem.txt");
  if (!meta) throw ParseError("cannot write " + (dir / "problem.txt").string());
  meta << "# tkz problem m=" << p.rows() << " l=" << p.cols() << " p=" << p.rhs_cols()
       << " n=" << p.tubes() << "\n";
  save_tensor(dir / "A.t3d", p.op());
  save_tensor(dir / "B.t3d", p.rhs());
  meta << "op = A.t3d\nrhs = B.t3d\n";
  meta << "ineq = " << detail::format_index_list(p.partition().ineq_rows()) << "\n";
  if (p.paving()) {
    meta << "ineq_blocks = " << p.paving()->ineq_block_count << "\n";
    for (const auto& block : p.paving()->blocks) {
      meta << "block = " << detail::format_index_list(block) << "\n";
    }
  }
  if (p.upper_bound()) {
    save_tensor(dir / "U.t3d", *p.upper_bound());
    meta << "upper = U.t3d\n";
  }
  if (p.lower_bound()) {
    save_tensor(dir / "L.t3d", *p.lower_bound());
    meta << "lower = L.t3d\n";
  }
  if (gp.witness) {
    save_tensor(dir / "X.t3d", *gp.witness);
    meta << "witness = X.t3d\n";
  }
  if (!meta) throw ParseError("write failed: " + (dir / "problem.txt").string());
}

GeneratedProblem load_problem(const fs::path& dir) {
  const fs::path meta_path = dir / "problem.txt";
  std::ifstream meta(meta_path);
  if (!meta) throw ParseError("cannot open '" + meta_path.string() + "'");
  std::optional<Tensor3> op, rhs, upper, lower, witness;
  std::vector<std::size_t> ineq;
  std::optional<std::size_t> ineq_blocks;
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& kv : detail::parse_key_values(meta, meta_path.string())) {
    if (kv.key == "op") op = load_tensor(dir / kv.value);
    else if (kv.key == "rhs") rhs = load_tensor(dir / kv.value);
    else if (kv.key == "upper") upper = load_tensor(dir / kv.value);
    else if (kv.key == "lower") lower = load_tensor(dir / kv.value);
    else if (kv.key == "witness") witness = load_tensor(dir / kv.value);
    else if (kv.key == "ineq") ineq = detail::parse_index_list(kv);
    else if (kv.key == "ineq_blocks") ineq_blocks = detail::parse_size(kv);
    else if (kv.key == "block") blocks.push_back(detail::parse_index_list(kv));
    else {
      throw ParseError(meta_path.string() + ":" + std::to_string(kv.line) + ": unknown key '" +
                       kv.key + "'");
    }
  }
  if (!op || !rhs) throw ParseError(meta_path.string() + ": 'op' and 'rhs' are required");
  std::vector<bool> is_ineq(op->rows(), false);
  for (std::size_t i : ineq) {
    if (i >= is_ineq.size()) {
      throw ParseError(meta_path.string() + ": inequality row " + std::to_string(i) +
                       " out of range");
    }
    is_ineq[i] = true;
  }
  std::optional<RowPaving> paving;
  if (!blocks.empty() || ineq_blocks) {
    paving = RowPaving{std::move(blocks), ineq_blocks.value_or(0)};
  }
  GeneratedProblem gp{FeasibilityProblem(std::move(*op), std::move(*rhs),
                                         ConstraintPartition(std::move(is_ineq)),
                                         std::move(paving), std::move(upper), std::move(lower)),
                      std::move(witness)};
  if (gp.witness) gp.problem.check_iterate(*gp.witness);
  return gp;
}

}  // namespace tkz
