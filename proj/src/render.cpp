#include "toi/render.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace toi {

std::uint8_t gray_level(std::size_t start, std::size_t t) {
  const std::uint64_t denom = t > 1 ? t - 1 : 1;
  const std::uint64_t level = 255 * static_cast<std::uint64_t>(start) / denom;
  return static_cast<std::uint8_t>(std::min<std::uint64_t>(level, 255));
}

GrayscaleMatrix to_grayscale(const BatchMatrix& matrix, std::size_t t) {
  GrayscaleMatrix image{matrix.num_batches(), matrix.batch_size(), {}};
  image.pixels.reserve(matrix.cells().size());
  for (const auto& cell : matrix.cells()) {
    image.pixels.push_back(gray_level(cell.start, t));
  }
  return image;
}

void write_pgm(const GrayscaleMatrix& image, std::ostream& out) {
  out << "P5\n" << image.cols << ' ' << image.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

void render_pgm(const BatchMatrix& matrix, std::size_t t,
                const std::filesystem::path& path) {
  if (matrix.empty()) throw std::invalid_argument("cannot render empty matrix");
  if (t == 0) throw std::invalid_argument("stream length must be positive");
  const GrayscaleMatrix image = to_grayscale(matrix, t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  }
  write_pgm(image, out);
  out.flush();
  if (!out) throw std::runtime_error("write error on '" + path.string() + "'");
}

DiversityReport row_diversity(const BatchMatrix& matrix, std::size_t t) {
  DiversityReport report;
  if (matrix.empty()) return report;
  const GrayscaleMatrix image = to_grayscale(matrix, t);
  for (std::size_t i = 0; i < image.rows; ++i) {
    const auto row = image.row(i);

    std::array<bool, 256> seen{};
    RowDiversity diversity;
    for (const std::uint8_t v : row) {
      if (!seen[v]) {
        seen[v] = true;
        ++diversity.distinct;
      }
    }

    // Sum of |a - b| over pairs from the sorted row: each value v at sorted
    // index j contributes v * (2j - (K - 1)).
    std::vector<std::uint8_t> sorted(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    long double total = 0;
    const auto k = static_cast<long double>(sorted.size());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      total += sorted[j] * (2.0L * j - (k - 1));
    }
    const long double pairs = k * (k - 1) / 2;
    diversity.mean_abs_diff =
        pairs > 0 ? static_cast<double>(total / pairs) : 0.0;

    report.mean_distinct += static_cast<double>(diversity.distinct);
    report.mean_abs_diff += diversity.mean_abs_diff;
    report.rows.push_back(diversity);
  }
  report.mean_distinct /= static_cast<double>(image.rows);
  report.mean_abs_diff /= static_cast<double>(image.rows);
  return report;
}

std::size_t count_pixel_clusters(std::span<const std::uint8_t> row,
                                 std::uint8_t tolerance) {
  if (row.empty()) return 0;
  std::vector<std::uint8_t> sorted(row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t clusters = 1;
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (sorted[j] - sorted[j - 1] > tolerance) ++clusters;
  }
  return clusters;
}

std::uint8_t cluster_tolerance(std::size_t n, std::size_t t) {
  const std::uint64_t denom = t > 1 ? t - 1 : 1;
  const std::uint64_t numer = 255 * static_cast<std::uint64_t>(n > 0 ? n - 1 : 0);
  const std::uint64_t level = (numer + denom - 1) / denom;
  return static_cast<std::uint8_t>(std::min<std::uint64_t>(level, 255));
}

}  // namespace toi
