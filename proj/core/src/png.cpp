#include "rgsl/png.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include <zlib.h>

#include "rgsl/error.hpp"

namespace rgsl {

namespace {

void put_u32_be(std::string& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xffu));
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
    put_u32_be(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    put_u32_be(out, static_cast<std::uint32_t>(
                        crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
}

}  // namespace

void write_gray_png(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height,
                    const std::vector<std::uint8_t>& pixels) {
    if (pixels.size() != static_cast<std::size_t>(width) * height || width == 0 || height == 0) {
        throw Error(ErrorCode::ShapeMismatch, "pixel buffer does not match image size");
    }
    std::string raw;
    raw.reserve((static_cast<std::size_t>(width) + 1) * height);
    for (std::uint32_t y = 0; y < height; ++y) {
        raw.push_back('\0');  // filter: none
        raw.append(reinterpret_cast<const char*>(pixels.data()) + static_cast<std::size_t>(y) * width, width);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                  reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()), 9) != Z_OK) {
        throw Error(ErrorCode::IoError, "zlib compression failed");
    }
    compressed.resize(bound);

    std::string png("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    put_u32_be(ihdr, width);
    put_u32_be(ihdr, height);
    ihdr += std::string("\x08\x00\x00\x00\x00", 5);  // 8-bit, grayscale, deflate, no filter, no interlace
    put_chunk(png, "IHDR", ihdr);
    put_chunk(png, "IDAT", compressed);
    put_chunk(png, "IEND", {});

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(png.data(), static_cast<std::streamsize>(png.size()));
}

void write_heatmap_png(const std::filesystem::path& path, const Eigen::MatrixXd& matrix, std::uint32_t cell) {
    if (matrix.size() == 0) throw Error(ErrorCode::ShapeMismatch, "empty matrix");
    const auto rows = static_cast<std::uint32_t>(matrix.rows());
    const auto cols = static_cast<std::uint32_t>(matrix.cols());
    if (cell == 0) cell = std::max<std::uint32_t>(1, 512 / std::max(rows, cols));
    const double top = std::max(matrix.maxCoeff(), 0.0);
    const std::uint32_t width = cols * cell;
    const std::uint32_t height = rows * cell;
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
    for (std::uint32_t y = 0; y < height; ++y)
        for (std::uint32_t x = 0; x < width; ++x) {
            const double v = top > 0.0 ? std::clamp(matrix(y / cell, x / cell) / top, 0.0, 1.0) : 0.0;
            pixels[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint8_t>(255.0 * (1.0 - v) + 0.5);
        }
    write_gray_png(path, width, height, pixels);
}

}  // namespace rgsl
