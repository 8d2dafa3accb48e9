#include "copulasim/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace csim {

namespace {

std::string lower_ext(const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    return ext;
}

bool known_ext(const std::string& ext) {
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

} // namespace

Image load_image(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw FileNotFound("no such file: " + path);
    const std::string ext = lower_ext(path);
    if (!known_ext(ext))
        throw UnsupportedFormat("unsupported image format: " + path);

    cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (m.empty()) throw CorruptData("failed to decode: " + path);

    if (m.depth() == CV_16U) {
        m.convertTo(m, CV_8U, 1.0 / 257.0); // 65535 -> 255
    } else if (m.depth() != CV_8U) {
        throw UnsupportedFormat("unsupported pixel depth in " + path);
    }

    // Drop alpha, keep BGR->RGB for color.
    if (m.channels() == 4) cv::cvtColor(m, m, cv::COLOR_BGRA2BGR);
    if (m.channels() == 2) throw UnsupportedFormat("2-channel image: " + path);

    Image out(m.cols, m.rows, m.channels() == 1 ? 1 : 3);
    for (int y = 0; y < m.rows; ++y) {
        const std::uint8_t* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            if (out.channels == 1) {
                out.at(x, y) = row[x];
            } else {
                out.at(x, y, 0) = row[x * 3 + 2];
                out.at(x, y, 1) = row[x * 3 + 1];
                out.at(x, y, 2) = row[x * 3 + 0];
            }
        }
    }
    return out;
}

void save_image(const Image& img, const std::string& path) {
    const std::string ext = lower_ext(path);
    if (!known_ext(ext))
        throw UnsupportedFormat("unsupported output format: " + path);
    cv::Mat m(img.height, img.width, img.channels == 1 ? CV_8UC1 : CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width; ++x) {
            if (img.channels == 1) {
                row[x] = img.at(x, y);
            } else {
                row[x * 3 + 0] = img.at(x, y, 2);
                row[x * 3 + 1] = img.at(x, y, 1);
                row[x * 3 + 2] = img.at(x, y, 0);
            }
        }
    }
    if (!cv::imwrite(path, m))
        throw Error("failed to write image: " + path);
}

} // namespace csim
