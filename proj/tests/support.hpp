#pragma once

// Synthetic data and small helpers shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zeroml/dataset.hpp"
#include "zeroml/rng.hpp"
#include "zeroml/schema.hpp"

namespace zeroml::testing {

/// Two Gaussian classes in 4-D, unit within-class std, class means 6 std apart.
inline std::string blobs_csv(std::size_t rows = 200, std::int64_t seed = 42) {
    Rng rng = make_rng(seed);
    const double offset = 6.0 / std::sqrt(4.0);  // |mu1 - mu0| = 6
    std::ostringstream os;
    os << "x1,x2,x3,x4,label\n";
    for (std::size_t i = 0; i < rows; ++i) {
        const int label = static_cast<int>(i % 2);
        for (int j = 0; j < 4; ++j) os << format_number(label * offset + standard_normal(rng)) << ',';
        os << label << '\n';
    }
    return os.str();
}

/// y = 3 x1 - 2 x2 + N(0, noise_std).
inline std::string linear_csv(std::size_t rows = 200, double noise_std = 0.1, std::int64_t seed = 42) {
    Rng rng = make_rng(seed);
    std::ostringstream os;
    os << "x1,x2,y\n";
    for (std::size_t i = 0; i < rows; ++i) {
        const double x1 = standard_normal(rng);
        const double x2 = standard_normal(rng);
        const double y = 3.0 * x1 - 2.0 * x2 + noise_std * standard_normal(rng);
        os << format_number(x1) << ',' << format_number(x2) << ',' << format_number(y) << '\n';
    }
    return os.str();
}

inline Dataset dataset_from(const std::string& csv) {
    std::istringstream in(csv);
    return parse_csv(in);
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("zeroml-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Matrix matrix_of(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

}  // namespace zeroml::testing
