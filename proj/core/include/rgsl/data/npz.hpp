#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rgsl::data {

/// A numeric array decoded from the NumPy .npy format, widened to double and
/// stored in C (row-major) order.
struct NpyArray {
    std::vector<std::size_t> shape;
    std::vector<double> values;
    std::string source_dtype = "<f8";

    std::size_t size() const noexcept;
};

NpyArray parse_npy(std::string_view bytes);
/// Encodes as '<f8', C order, format version 1.0.
std::string encode_npy(const NpyArray& array);

/// Reads every member of a .npz container (stored or deflated, zip64 aware).
std::map<std::string, NpyArray> read_npz(const std::filesystem::path& path);
/// Writes an uncompressed .npz; keys get the ".npy" member suffix.
void write_npz(const std::filesystem::path& path, const std::map<std::string, NpyArray>& arrays);

}  // namespace rgsl::data
