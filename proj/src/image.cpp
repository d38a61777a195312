#include "kf/image.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "kf/rational.hpp"

namespace kf {

namespace {

// next header token, skipping whitespace and '#' comments
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw IoError("pgm: truncated header");
    return tok;
}

}  // namespace

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("pgm: cannot open '" + path + "'");
    const std::string magic = pnm_token(in);
    if (magic != "P5" && magic != "P2") throw IoError("pgm: unsupported magic '" + magic + "'");
    const int w = std::stoi(pnm_token(in));
    const int h = std::stoi(pnm_token(in));
    const int maxval = std::stoi(pnm_token(in));
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw IoError("pgm: bad dimensions or maxval");

    Image img(w, h);
    const std::size_t n = img.data.size();
    if (magic == "P2") {
        for (std::size_t i = 0; i < n; ++i)
            img.data[i] = std::stoi(pnm_token(in)) / static_cast<double>(maxval);
        return img;
    }
    if (maxval < 256) {
        std::vector<std::uint8_t> raw(n);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
        if (!in) throw IoError("pgm: truncated pixel data");
        for (std::size_t i = 0; i < n; ++i) img.data[i] = raw[i] / static_cast<double>(maxval);
    } else {
        std::vector<std::uint8_t> raw(n * 2);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!in) throw IoError("pgm: truncated pixel data");
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
            img.data[i] = v / static_cast<double>(maxval);
        }
    }
    return img;
}

void write_pgm(const Image& img, const std::string& path, int maxval) {
    if (maxval <= 0 || maxval > 65535) throw IoError("pgm: bad maxval");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("pgm: cannot write '" + path + "'");
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    const auto quantize = [maxval](double v) {
        const double c = v < 0.0 ? 0.0 : v > 1.0 ? 1.0 : v;
        return static_cast<unsigned>(std::lround(c * maxval));
    };
    if (maxval < 256) {
        std::vector<std::uint8_t> raw(img.data.size());
        for (std::size_t i = 0; i < img.data.size(); ++i)
            raw[i] = static_cast<std::uint8_t>(quantize(img.data[i]));
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    } else {
        std::vector<std::uint8_t> raw(img.data.size() * 2);
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            const unsigned v = quantize(img.data[i]);
            raw[2 * i] = static_cast<std::uint8_t>(v >> 8);  // big-endian
            raw[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    }
    if (!out) throw IoError("pgm: write failed for '" + path + "'");
}

}  // namespace kf
