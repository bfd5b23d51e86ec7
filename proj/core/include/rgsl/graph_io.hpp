#pragma once

#include <filesystem>

#include <Eigen/Dense>

namespace rgsl {

/// Dense matrix as headerless CSV, one row per line, round-trip precision.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Edge list with header "i,j,weight"; keeps entries with weight >= threshold,
/// diagonal excluded.
void write_edge_list_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix,
                         double threshold);

}  // namespace rgsl
