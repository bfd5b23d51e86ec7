#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "expect_error.hpp"
#include "rgsl/data/npz.hpp"
#include "rgsl/data/series.hpp"

namespace rgsl::data {
namespace {

using rgsl::testing::error_code_of;

const std::filesystem::path kData = RGSL_TEST_DATA_DIR;

// Fixtures hold arange(40).reshape(10, 4, 1) * 0.5 written by numpy.
void expect_reference(const NpyArray& a) {
    ASSERT_EQ(a.shape, (std::vector<std::size_t>{10, 4, 1}));
    for (std::size_t i = 0; i < 40; ++i) EXPECT_DOUBLE_EQ(a.values[i], 0.5 * static_cast<double>(i));
}

TEST(Npz, ReadsStoredAndDeflatedMembers) {
    expect_reference(read_npz(kData / "stored_f8.npz").at("data"));
    expect_reference(read_npz(kData / "deflated_f8.npz").at("data"));
}

TEST(Npz, ConvertsFloat32FortranOrder) {
    const auto a = read_npz(kData / "f4_fortran.npz").at("data");
    EXPECT_EQ(a.source_dtype, "<f4");
    expect_reference(a);
}

TEST(Npz, ReadsInt64) {
    const auto arrays = read_npz(kData / "int64.npz");
    const auto& a = arrays.at("data");
    ASSERT_EQ(a.size(), 40u);
    EXPECT_EQ(a.values[7], 3.0);  // floor(7 * 0.5)
}

TEST(Npz, WriteReadRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "rgsl_npz_roundtrip.npz";
    NpyArray a;
    a.shape = {2, 3};
    a.values = {1.5, -2.0, 3.25, 0.0, 1e-300, 7.0};
    NpyArray b;
    b.shape = {4};
    b.values = {9, 8, 7, 6};
    write_npz(path, {{"first", a}, {"second", b}});
    const auto back = read_npz(path);
    EXPECT_EQ(back.at("first").shape, a.shape);
    EXPECT_EQ(back.at("first").values, a.values);
    EXPECT_EQ(back.at("second").values, b.values);
    std::filesystem::remove(path);
}

TEST(Npz, RejectsGarbage) {
    EXPECT_EQ(error_code_of([] { parse_npy("not an npy file"); }), ErrorCode::BadFormat);
}

TEST(SeriesArchive, LoadsAndValidates) {
    const auto s = load_series_archive(kData / "deflated_f8.npz");
    EXPECT_EQ(s.timestamps(), 10u);
    EXPECT_EQ(s.nodes(), 4u);
    EXPECT_EQ(s.features(), 1u);
    EXPECT_DOUBLE_EQ(s.at(3, 2, 0), 0.5 * 14);
}

TEST(SeriesArchive, Errors) {
    EXPECT_EQ(error_code_of([] { load_series_archive(kData / "nope.npz"); }), ErrorCode::FileNotFound);
    EXPECT_EQ(error_code_of([] { load_series_archive(kData / "two_d.npz"); }), ErrorCode::BadShape);
    EXPECT_EQ(error_code_of([] { load_series_archive(kData / "no_data_key.npz"); }), ErrorCode::BadFormat);
}

TEST(SeriesArchive, InterpolatesInteriorGap) {
    const auto s = load_series_archive(kData / "with_nan.npz");
    // Node 2 over time is 2, 6, 10, ... scaled by 0.5; the gap at t=5 sits between 4*4+2 and 6*4+2.
    EXPECT_DOUBLE_EQ(s.at(5, 2, 0), 0.5 * (18 + 26) / 2.0);
}

TEST(CleanMissing, LeadingTrailingUseColumnMean) {
    const double nan = std::nan("");
    // T=4, N=1, F=1
    std::vector<double> v{nan, 2.0, 4.0, nan};
    clean_missing(v, 4, 1, 1);
    EXPECT_EQ(v, (std::vector<double>{3.0, 2.0, 4.0, 3.0}));
}

TEST(CleanMissing, AllMissingColumnRejected) {
    const double nan = std::nan("");
    std::vector<double> v{1.0, nan, 2.0, nan};  // T=2, N=2: node 1 is never observed
    EXPECT_EQ(error_code_of([&] { clean_missing(v, 2, 2, 1); }), ErrorCode::AllMissingColumn);
}

}  // namespace
}  // namespace rgsl::data
