#pragma once

#include "tkz/feasibility.hpp"
#include "tkz/generators.hpp"
#include "tkz/tensor3.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace tkz {

// TensorFile: "T3D1", dims m, l, n as u64 little endian, then m*l*n f64
// little endian in the Tensor3 storage order.
void write_tensor(std::ostream& out, const Tensor3& t);
Tensor3 read_tensor(std::istream& in);
void save_tensor(const std::filesystem::path& path, const Tensor3& t);
Tensor3 load_tensor(const std::filesystem::path& path);

/// 8-bit binary PGM (P5). Values are rounded and clamped to [0, 255].
void save_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& image);
/// Reads P5 with maxval <= 255; returns height x width intensities scaled to [0, 255].
Eigen::MatrixXd load_pgm(const std::filesystem::path& path);

/// Lateral slice `frame` of a height x frames x width stack as an image.
Eigen::MatrixXd stack_frame(const Tensor3& stack, std::size_t frame);
/// Inverse of stack_frame over all frames; images must share a size.
Tensor3 stack_from_frames(const std::vector<Eigen::MatrixXd>& frames);

/// Problem directory: problem.txt (key = value) next to TensorFiles.
///
///   op = A.t3d          rhs = B.t3d
///   ineq = 0-69         (indices or ranges of inequality rows; empty for none)
///   ineq_blocks = 7     block = 0-9 (repeated, in paving order)
///   upper = U.t3d       lower = L.t3d        witness = X.t3d
void save_problem(const std::filesystem::path& dir, const GeneratedProblem& gp);
GeneratedProblem load_problem(const std::filesystem::path& dir);

}  // namespace tkz
