#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "toi/render.hpp"
#include "toi/strategies.hpp"

namespace fs = std::filesystem;
using namespace toi;

namespace {

BatchMatrix from_starts(std::size_t rows, std::size_t k,
                        const std::vector<std::size_t>& starts) {
  std::vector<DataPointRef> cells;
  for (const std::size_t s : starts) cells.push_back({0, 0, s, 1});
  return BatchMatrix(rows, k, BatchLayout::Distributed, 0, cells);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TokenStream synthetic(std::size_t t) {
  TokenStream stream;
  stream.tokens.assign(t, 0);
  return stream;
}

}  // namespace

TEST_CASE("gray levels") {
  CHECK(gray_level(0, 13) == 0);
  CHECK(gray_level(12, 13) == 255);
  CHECK(gray_level(0, 1) == 0);
  // floor(255 * s / 99) for s = 0, 33, 66, 99.
  CHECK(gray_level(33, 100) == 85);
  CHECK(gray_level(66, 100) == 170);
  CHECK(gray_level(99, 100) == 255);
}

TEST_CASE("PGM bytes") {
  const fs::path dir = fs::temp_directory_path() / "toi_render_tests";
  fs::create_directories(dir);

  SUBCASE("single black pixel") {
    render_pgm(from_starts(1, 1, {0}), 13, dir / "one.pgm");
    CHECK(slurp(dir / "one.pgm") == std::string("P5\n1 1\n255\n\0", 12));
  }
  SUBCASE("terminal start is white") {
    render_pgm(from_starts(1, 1, {12}), 13, dir / "white.pgm");
    CHECK(slurp(dir / "white.pgm") == "P5\n1 1\n255\n\xFF");
  }
  SUBCASE("2x2 over T=100") {
    render_pgm(from_starts(2, 2, {0, 33, 66, 99}), 100, dir / "four.pgm");
    CHECK(slurp(dir / "four.pgm") ==
          std::string("P5\n2 2\n255\n\x00\x55\xAA\xFF", 15));
  }
  SUBCASE("width is K, height is L") {
    std::ostringstream out;
    write_pgm(to_grayscale(from_starts(2, 3, {0, 1, 2, 3, 4, 5}), 6), out);
    CHECK(out.str().rfind("P5\n3 2\n255\n", 0) == 0);
    CHECK(out.str().size() == 11 + 6);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(render_pgm(BatchMatrix{}, 10, dir / "empty.pgm"),
                    std::invalid_argument);
    CHECK_THROWS_AS(render_pgm(from_starts(1, 1, {0}), 0, dir / "t0.pgm"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        render_pgm(from_starts(1, 1, {0}), 5, dir / "missing" / "x.pgm"),
        std::runtime_error);
  }
}

TEST_CASE("rendering is a pure function of the matrix") {
  const fs::path dir = fs::temp_directory_path() / "toi_render_tests";
  fs::create_directories(dir);
  const TokenStream stream = synthetic(5000);
  const BatchMatrix m =
      apply_strategy(stream, 20, 13, ToiStrategy::alleviated(4));
  render_pgm(m, stream.size(), dir / "a.pgm");
  render_pgm(m, stream.size(), dir / "b.pgm");
  CHECK(slurp(dir / "a.pgm") == slurp(dir / "b.pgm"));
}

TEST_CASE("row_diversity") {
  SUBCASE("identical starts") {
    const DiversityReport r = row_diversity(from_starts(1, 4, {7, 7, 7, 7}), 50);
    CHECK(r.rows[0].distinct == 1);
    CHECK(r.rows[0].mean_abs_diff == 0.0);
  }
  SUBCASE("evenly spread starts are all distinct") {
    std::vector<std::size_t> starts;
    for (std::size_t j = 0; j < 16; ++j) starts.push_back(j * 64);
    const DiversityReport r = row_diversity(from_starts(1, 16, starts), 1024);
    CHECK(r.rows[0].distinct == 16);
  }
  SUBCASE("mean absolute difference by hand") {
    // Pixels 0, 85, 170, 255: pair differences sum to 85 * 10 over 6 pairs.
    const DiversityReport r =
        row_diversity(from_starts(1, 4, {0, 33, 66, 99}), 100);
    CHECK(r.rows[0].mean_abs_diff == doctest::Approx(850.0 / 6));
    CHECK(r.mean_distinct == 4.0);
  }
  SUBCASE("empty matrix") {
    CHECK(row_diversity(BatchMatrix{}, 10).rows.empty());
  }
}

TEST_CASE("a non-prime batch size lowers row diversity under overlap") {
  const std::size_t n = 70;
  const TokenStream stream = synthetic(n * 400 + 63);
  const auto k20 =
      row_diversity(apply_strategy(stream, n, 20, ToiStrategy::alleviated(10)),
                    stream.size());
  const auto k19 =
      row_diversity(apply_strategy(stream, n, 19, ToiStrategy::alleviated(10)),
                    stream.size());
  CHECK(k20.mean_distinct < k19.mean_distinct);
}

TEST_CASE("rows hold at most K / gcd well-separated clusters (property)") {
  for (std::size_t p : {2u, 3u, 4u, 5u, 6u, 10u}) {
    for (std::size_t k : {6u, 8u, 10u, 12u, 15u, 19u, 20u}) {
      const std::size_t n = 60;
      const OverlapPlan plan = make_plan(n, p);
      // M points per offset sequence with P*M divisible by K and M > K.
      const std::size_t m = 4 * k;
      const std::size_t t = m * n + (p - 1) * plan.step;
      const BatchMatrix matrix = build_overlapped_batches(synthetic(t), plan, k);
      const GrayscaleMatrix image = to_grayscale(matrix, t);
      const std::size_t g = period_analysis(p, k).gcd;
      const std::uint8_t tol = cluster_tolerance(n, t);
      for (std::size_t i = 0; i < image.rows; ++i) {
        CHECK(count_pixel_clusters(image.row(i), tol) <= (k + g - 1) / g);
      }
    }
  }
}

TEST_CASE("count_pixel_clusters") {
  const std::vector<std::uint8_t> row{10, 12, 40, 41, 200};
  CHECK(count_pixel_clusters(row, 2) == 3);
  CHECK(count_pixel_clusters(row, 0) == 5);
  CHECK(count_pixel_clusters(row, 255) == 1);
  CHECK(count_pixel_clusters({}, 3) == 0);
  CHECK(cluster_tolerance(70, 28064) == 1);
  CHECK(cluster_tolerance(10, 10) == 255);
}
