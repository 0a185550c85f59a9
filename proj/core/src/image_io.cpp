#include "codbench/image_io.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace codbench {

namespace fs = std::filesystem;

namespace {

cv::Mat read_gray8(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec))
        throw IoError("no such image file: " + path.string());

    cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (raw.empty())
        throw IoError("cannot decode image: " + path.string());
    if (raw.depth() != CV_8U)
        throw IoError("unsupported bit depth (need 8-bit) in " + path.string());

    cv::Mat gray;
    switch (raw.channels()) {
    case 1:
        gray = raw;
        break;
    case 3:
        cv::cvtColor(raw, gray, cv::COLOR_BGR2GRAY);
        break;
    case 4:
        cv::cvtColor(raw, gray, cv::COLOR_BGRA2GRAY);
        break;
    default:
        throw IoError("unsupported channel count " + std::to_string(raw.channels()) + " in " + path.string());
    }
    return gray;
}

void write_png(const fs::path& path, const cv::Mat& img) {
    std::vector<uchar> bytes;
    if (!cv::imencode(".png", img, bytes))
        throw IoError("PNG encoding failed for " + path.string());
    write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

bool is_image_extension(std::string ext) {
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

} // namespace

ProbabilityMap load_probability_map(const fs::path& path) {
    cv::Mat gray = read_gray8(path);
    std::vector<double> values(static_cast<std::size_t>(gray.rows) * static_cast<std::size_t>(gray.cols));
    for (int y = 0; y < gray.rows; ++y) {
        const uchar* row = gray.ptr<uchar>(y);
        for (int x = 0; x < gray.cols; ++x)
            values[static_cast<std::size_t>(y) * gray.cols + x] = row[x] / 255.0;
    }
    return ProbabilityMap(gray.cols, gray.rows, std::move(values));
}

BinaryMask load_binary_mask(const fs::path& path) { return binarize(load_probability_map(path), 0.5); }

void save_mask(const fs::path& path, const BinaryMask& mask) {
    cv::Mat img(mask.height(), mask.width(), CV_8UC1);
    for (int y = 0; y < mask.height(); ++y) {
        uchar* row = img.ptr<uchar>(y);
        for (int x = 0; x < mask.width(); ++x)
            row[x] = mask.at(x, y) ? 255 : 0;
    }
    write_png(path, img);
}

void save_map(const fs::path& path, const ProbabilityMap& map) {
    cv::Mat img(map.height(), map.width(), CV_8UC1);
    for (int y = 0; y < map.height(); ++y) {
        uchar* row = img.ptr<uchar>(y);
        for (int x = 0; x < map.width(); ++x)
            row[x] = static_cast<uchar>(std::lround(map.at(x, y) * 255.0));
    }
    write_png(path, img);
}

std::map<std::string, fs::path> list_images_by_stem(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw IoError("not a directory: " + dir.string());

    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || !is_image_extension(entry.path().extension().string()))
            continue;
        auto stem = entry.path().stem().string();
        auto [it, inserted] = out.emplace(stem, entry.path());
        if (!inserted)
            throw IoError("two images share the stem '" + stem + "' in " + dir.string() + ": " +
                          it->second.filename().string() + ", " + entry.path().filename().string());
    }
    return out;
}

} // namespace codbench
