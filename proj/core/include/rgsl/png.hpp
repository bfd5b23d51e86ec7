#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace rgsl {

/// 8-bit grayscale PNG from row-major pixels.
void write_gray_png(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height,
                    const std::vector<std::uint8_t>& pixels);

/// Monochrome heatmap: 0 maps to white, the matrix maximum to black; each
/// entry becomes a `cell` x `cell` square (row = source node, column = target).
void write_heatmap_png(const std::filesystem::path& path, const Eigen::MatrixXd& matrix, std::uint32_t cell = 0);

}  // namespace rgsl
