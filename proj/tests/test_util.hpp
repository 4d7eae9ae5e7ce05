#pragma once

#include "zener/symtensor.hpp"

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace zener::testing {

inline std::string tmp_path(const std::string& name)
{
    const char* dir = std::getenv("ZENER_TEST_TMP");
    std::filesystem::path p = dir ? dir : std::filesystem::temp_directory_path();
    std::filesystem::create_directories(p);
    return (p / name).string();
}

inline Mat3 random_sym(std::mt19937& rng, int dim)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat3 t = Mat3::Zero();
    for (int p = 0; p < dim; ++p)
        for (int q = p; q < dim; ++q)
            t(p, q) = t(q, p) = u(rng);
    return t;
}

inline Eigen::VectorXd random_vector(std::mt19937& rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = g(rng);
    return v;
}

} // namespace zener::testing
