#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "toi/batching.hpp"

namespace toi {

/// One byte per batch cell, row-major. A cell starting at token s maps to
/// floor(255 * s / max(1, T - 1)), so nearby data points look alike.
struct GrayscaleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t i, std::size_t j) const {
    return pixels[i * cols + j];
  }
  std::span<const std::uint8_t> row(std::size_t i) const {
    return {pixels.data() + i * cols, cols};
  }
};

std::uint8_t gray_level(std::size_t start, std::size_t t);

GrayscaleMatrix to_grayscale(const BatchMatrix& matrix, std::size_t t);

/// Binary PGM: "P5\n<cols> <rows>\n255\n" followed by the raw pixels.
void write_pgm(const GrayscaleMatrix& image, std::ostream& out);

/// Throws std::invalid_argument for an empty matrix or T == 0, and
/// std::runtime_error when the file cannot be written.
void render_pgm(const BatchMatrix& matrix, std::size_t t,
                const std::filesystem::path& path);

struct RowDiversity {
  std::size_t distinct = 0;
  double mean_abs_diff = 0.0;
};

struct DiversityReport {
  std::vector<RowDiversity> rows;
  double mean_distinct = 0.0;
  double mean_abs_diff = 0.0;
};

DiversityReport row_diversity(const BatchMatrix& matrix, std::size_t t);

/// Number of groups left after chaining sorted pixel values whose gap is
/// at most `tolerance`.
std::size_t count_pixel_clusters(std::span<const std::uint8_t> row,
                                 std::uint8_t tolerance);

/// Largest pixel spread of one data point of N tokens:
/// ceil(255 * (N - 1) / max(1, T - 1)), capped at 255.
std::uint8_t cluster_tolerance(std::size_t n, std::size_t t);

}  // namespace toi
