#include "rgsl/data/npz.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

#include <zlib.h>

#include "rgsl/error.hpp"

namespace rgsl::data {

std::size_t NpyArray::size() const noexcept {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

namespace {

constexpr std::uint32_t kLocalHeader = 0x04034b50;
constexpr std::uint32_t kCentralHeader = 0x02014b50;
constexpr std::uint32_t kEndOfCentral = 0x06054b50;
constexpr std::uint32_t kZip64EndOfCentral = 0x06064b50;
constexpr std::uint32_t kZip64Locator = 0x07064b50;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadFormat, what); }

template <typename T>
T read_le(std::string_view bytes, std::size_t offset) {
    if (offset + sizeof(T) > bytes.size()) bad("truncated archive");
    T value{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<T>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    }
    return value;
}

template <typename T>
void write_le(std::string& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu));
    }
}

std::string inflate_raw(std::string_view compressed, std::size_t expected) {
    std::string out(expected, '\0');
    z_stream stream{};
    if (inflateInit2(&stream, -MAX_WBITS) != Z_OK) bad("zlib init failed");
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    stream.avail_in = static_cast<uInt>(compressed.size());
    stream.next_out = reinterpret_cast<Bytef*>(out.data());
    stream.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&stream, Z_FINISH);
    inflateEnd(&stream);
    if (rc != Z_STREAM_END || stream.total_out != expected) bad("corrupt deflate stream");
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t dtype_width(const std::string& descr) {
    if (descr.size() < 3) return 0;
    return static_cast<std::size_t>(descr[2] - '0');
}

double decode_element(const char* p, const std::string& descr) {
    const char kind = descr[1];
    const std::size_t width = dtype_width(descr);
    if (kind == 'f' && width == 8) { double v; std::memcpy(&v, p, 8); return v; }
    if (kind == 'f' && width == 4) { float v; std::memcpy(&v, p, 4); return v; }
    if (kind == 'i' && width == 8) { std::int64_t v; std::memcpy(&v, p, 8); return static_cast<double>(v); }
    if (kind == 'i' && width == 4) { std::int32_t v; std::memcpy(&v, p, 4); return v; }
    bad("unsupported dtype " + descr);
}

}  // namespace

NpyArray parse_npy(std::string_view bytes) {
    if (bytes.size() < 10 || bytes.substr(0, 6) != "\x93NUMPY") bad("missing .npy magic");
    const int major = static_cast<unsigned char>(bytes[6]);
    std::size_t header_len = 0;
    std::size_t header_start = 0;
    if (major == 1) {
        header_len = read_le<std::uint16_t>(bytes, 8);
        header_start = 10;
    } else if (major == 2 || major == 3) {
        header_len = read_le<std::uint32_t>(bytes, 8);
        header_start = 12;
    } else {
        bad("unsupported .npy version");
    }
    if (header_start + header_len > bytes.size()) bad("truncated .npy header");
    const std::string header(bytes.substr(header_start, header_len));

    std::smatch m;
    static const std::regex descr_re(R"('descr'\s*:\s*'([<>|=][a-z]\d+)')");
    static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
    static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
    if (!std::regex_search(header, m, descr_re)) bad("npy header lacks descr");
    NpyArray array;
    array.source_dtype = m[1];
    if (array.source_dtype[0] == '>') bad("big-endian arrays are not supported");
    if (array.source_dtype[0] == '|' || array.source_dtype[0] == '=') array.source_dtype[0] = '<';
    if (!std::regex_search(header, m, order_re)) bad("npy header lacks fortran_order");
    const bool fortran = m[1] == "True";
    if (!std::regex_search(header, m, shape_re)) bad("npy header lacks shape");
    std::stringstream dims(m[1].str());
    for (std::string token; std::getline(dims, token, ',');) {
        if (token.find_first_not_of(" \t") == std::string::npos) continue;
        array.shape.push_back(static_cast<std::size_t>(std::stoull(token)));
    }

    const std::size_t width = dtype_width(array.source_dtype);
    const std::size_t count = array.size();
    const std::size_t data_start = header_start + header_len;
    if (width == 0 || data_start + count * width > bytes.size()) bad("npy payload truncated");
    array.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        array.values[i] = decode_element(bytes.data() + data_start + i * width, array.source_dtype);
    }

    if (fortran && array.shape.size() > 1) {
        std::vector<double> c_order(count);
        const std::size_t rank = array.shape.size();
        std::vector<std::size_t> idx(rank, 0);
        for (std::size_t flat_f = 0; flat_f < count; ++flat_f) {
            std::size_t flat_c = 0;
            for (std::size_t d = 0; d < rank; ++d) flat_c = flat_c * array.shape[d] + idx[d];
            c_order[flat_c] = array.values[flat_f];
            for (std::size_t d = 0; d < rank; ++d) {  // first axis fastest in Fortran order
                if (++idx[d] < array.shape[d]) break;
                idx[d] = 0;
            }
        }
        array.values = std::move(c_order);
    }
    return array;
}

std::string encode_npy(const NpyArray& array) {
    std::ostringstream dict;
    dict << "{'descr': '<f8', 'fortran_order': False, 'shape': (";
    for (std::size_t i = 0; i < array.shape.size(); ++i) {
        dict << array.shape[i] << (array.shape.size() == 1 || i + 1 < array.shape.size() ? "," : "");
        if (i + 1 < array.shape.size()) dict << ' ';
    }
    dict << "), }";
    std::string header = dict.str();
    // Pad so the payload starts on a 64-byte boundary, newline-terminated.
    const std::size_t unpadded = 10 + header.size() + 1;
    header.append((64 - unpadded % 64) % 64, ' ');
    header.push_back('\n');

    std::string out("\x93NUMPY\x01\x00", 8);
    write_le<std::uint16_t>(out, static_cast<std::uint16_t>(header.size()));
    out += header;
    const std::size_t offset = out.size();
    out.resize(offset + array.values.size() * sizeof(double));
    std::memcpy(out.data() + offset, array.values.data(), array.values.size() * sizeof(double));
    return out;
}

std::map<std::string, NpyArray> read_npz(const std::filesystem::path& path) {
    const std::string file = read_file(path);
    const std::string_view bytes(file);
    if (bytes.size() < 22) bad("not a zip archive: " + path.string());

    std::size_t eocd = std::string_view::npos;
    const std::size_t scan_floor = bytes.size() > 65557 ? bytes.size() - 65557 : 0;
    for (std::size_t pos = bytes.size() - 22 + 1; pos-- > scan_floor;) {
        if (read_le<std::uint32_t>(bytes, pos) == kEndOfCentral) {
            eocd = pos;
            break;
        }
    }
    if (eocd == std::string_view::npos) bad("no end-of-central-directory record in " + path.string());

    std::uint64_t entries = read_le<std::uint16_t>(bytes, eocd + 10);
    std::uint64_t cd_offset = read_le<std::uint32_t>(bytes, eocd + 16);
    if ((entries == 0xffff || cd_offset == 0xffffffffu) && eocd >= 20 &&
        read_le<std::uint32_t>(bytes, eocd - 20) == kZip64Locator) {
        const auto z64 = read_le<std::uint64_t>(bytes, eocd - 20 + 8);
        if (read_le<std::uint32_t>(bytes, z64) != kZip64EndOfCentral) bad("bad zip64 record");
        entries = read_le<std::uint64_t>(bytes, z64 + 32);
        cd_offset = read_le<std::uint64_t>(bytes, z64 + 48);
    }

    std::map<std::string, NpyArray> arrays;
    std::size_t pos = cd_offset;
    for (std::uint64_t e = 0; e < entries; ++e) {
        if (read_le<std::uint32_t>(bytes, pos) != kCentralHeader) bad("bad central directory entry");
        const auto method = read_le<std::uint16_t>(bytes, pos + 10);
        std::uint64_t comp_size = read_le<std::uint32_t>(bytes, pos + 20);
        std::uint64_t raw_size = read_le<std::uint32_t>(bytes, pos + 24);
        const auto name_len = read_le<std::uint16_t>(bytes, pos + 28);
        const auto extra_len = read_le<std::uint16_t>(bytes, pos + 30);
        const auto comment_len = read_le<std::uint16_t>(bytes, pos + 32);
        std::uint64_t local = read_le<std::uint32_t>(bytes, pos + 42);
        std::string name(bytes.substr(pos + 46, name_len));

        // Zip64 extra field lists only the values saturated in the fixed header.
        std::size_t extra = pos + 46 + name_len;
        const std::size_t extra_end = extra + extra_len;
        while (extra + 4 <= extra_end) {
            const auto id = read_le<std::uint16_t>(bytes, extra);
            const auto size = read_le<std::uint16_t>(bytes, extra + 2);
            if (id == 0x0001) {
                std::size_t field = extra + 4;
                if (raw_size == 0xffffffffu) { raw_size = read_le<std::uint64_t>(bytes, field); field += 8; }
                if (comp_size == 0xffffffffu) { comp_size = read_le<std::uint64_t>(bytes, field); field += 8; }
                if (local == 0xffffffffu) { local = read_le<std::uint64_t>(bytes, field); }
            }
            extra += 4 + size;
        }
        pos = extra_end + comment_len;

        if (read_le<std::uint32_t>(bytes, local) != kLocalHeader) bad("bad local header for " + name);
        const std::size_t data_start = local + 30 + read_le<std::uint16_t>(bytes, local + 26) +
                                       read_le<std::uint16_t>(bytes, local + 28);
        if (data_start + comp_size > bytes.size()) bad("member " + name + " is truncated");
        const std::string_view payload = bytes.substr(data_start, comp_size);
        std::string member;
        if (method == 0) {
            member = std::string(payload);
        } else if (method == 8) {
            member = inflate_raw(payload, raw_size);
        } else {
            bad("unsupported zip compression method " + std::to_string(method));
        }
        if (name.size() > 4 && name.ends_with(".npy")) name.resize(name.size() - 4);
        arrays.emplace(std::move(name), parse_npy(member));
    }
    return arrays;
}

void write_npz(const std::filesystem::path& path, const std::map<std::string, NpyArray>& arrays) {
    std::string out;
    std::string central;
    for (const auto& [key, array] : arrays) {
        const std::string name = key + ".npy";
        const std::string payload = encode_npy(array);
        if (payload.size() >= 0xffffffffu) throw Error(ErrorCode::IoError, "array too large for zip32");
        const auto crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size())));
        const auto offset = static_cast<std::uint32_t>(out.size());
        const auto size = static_cast<std::uint32_t>(payload.size());

        write_le<std::uint32_t>(out, kLocalHeader);
        write_le<std::uint16_t>(out, 20);  // version needed
        write_le<std::uint16_t>(out, 0);   // flags
        write_le<std::uint16_t>(out, 0);   // stored
        write_le<std::uint16_t>(out, 0);   // mod time
        write_le<std::uint16_t>(out, 0x21);  // mod date 1980-01-01
        write_le<std::uint32_t>(out, crc);
        write_le<std::uint32_t>(out, size);
        write_le<std::uint32_t>(out, size);
        write_le<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
        write_le<std::uint16_t>(out, 0);
        out += name;
        out += payload;

        write_le<std::uint32_t>(central, kCentralHeader);
        write_le<std::uint16_t>(central, 20);
        write_le<std::uint16_t>(central, 20);
        write_le<std::uint16_t>(central, 0);
        write_le<std::uint16_t>(central, 0);
        write_le<std::uint16_t>(central, 0);
        write_le<std::uint16_t>(central, 0x21);
        write_le<std::uint32_t>(central, crc);
        write_le<std::uint32_t>(central, size);
        write_le<std::uint32_t>(central, size);
        write_le<std::uint16_t>(central, static_cast<std::uint16_t>(name.size()));
        write_le<std::uint16_t>(central, 0);
        write_le<std::uint16_t>(central, 0);
        write_le<std::uint16_t>(central, 0);
        write_le<std::uint16_t>(central, 0);
        write_le<std::uint32_t>(central, 0);
        write_le<std::uint32_t>(central, offset);
        central += name;
    }
    const auto cd_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    write_le<std::uint32_t>(out, kEndOfCentral);
    write_le<std::uint16_t>(out, 0);
    write_le<std::uint16_t>(out, 0);
    write_le<std::uint16_t>(out, static_cast<std::uint16_t>(arrays.size()));
    write_le<std::uint16_t>(out, static_cast<std::uint16_t>(arrays.size()));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(central.size()));
    write_le<std::uint32_t>(out, cd_offset);
    write_le<std::uint16_t>(out, 0);

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace rgsl::data
