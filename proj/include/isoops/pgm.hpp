#pragma once

// Netpbm grayscale (P2 ASCII, P5 binary; 8- or 16-bit) and P6 colour output.
// Pixel values map to [0, 1] by division by maxval; row 0 of the file is row 0
// of the grid.

#include "isoops/error.hpp"
#include "isoops/grid.hpp"
#include "isoops/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace isoops {

struct PgmImage
{
    GridField field;
    int maxval = 255;
};

namespace detail {

inline void skip_space_and_comments(std::istream& in)
{
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string dummy;
            std::getline(in, dummy);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

inline int read_header_int(std::istream& in, const char* what)
{
    skip_space_and_comments(in);
    long v = -1;
    if (!(in >> v) || v < 0 || v > (1L << 30)) fail(ErrorCode::Parse, std::string("PGM header: bad ") + what);
    return static_cast<int>(v);
}

} // namespace detail

inline PgmImage read_pgm(std::istream& in)
{
    char magic[2] = {0, 0};
    in.read(magic, 2);
    require(in.gcount() == 2 && magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5'), ErrorCode::Parse,
            "not a P2/P5 PGM file");
    const bool binary = magic[1] == '5';
    const int w = detail::read_header_int(in, "width");
    const int h = detail::read_header_int(in, "height");
    const int maxval = detail::read_header_int(in, "maxval");
    require(w >= 3 && h >= 3, ErrorCode::Parse, "PGM image must be at least 3x3");
    require(maxval >= 1 && maxval <= 65535, ErrorCode::Parse, "PGM maxval must be in [1, 65535]");

    PgmImage img{GridField(w, h, 1.0), maxval};
    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (binary) {
        const int c = in.get();
        require(c != EOF && std::isspace(c), ErrorCode::Parse, "PGM header must end in one whitespace byte");
        const int bytes = maxval < 256 ? 1 : 2;
        std::string buf(count * static_cast<std::size_t>(bytes), '\0');
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        require(static_cast<std::size_t>(in.gcount()) == buf.size(), ErrorCode::Parse, "PGM pixel data truncated");
        for (std::size_t k = 0; k < count; ++k) {
            int v = static_cast<unsigned char>(buf[k * static_cast<std::size_t>(bytes)]);
            if (bytes == 2) v = (v << 8) | static_cast<unsigned char>(buf[2 * k + 1]);
            require(v <= maxval, ErrorCode::Parse, "PGM pixel exceeds maxval");
            img.field.values[k] = static_cast<double>(v) / maxval;
        }
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            detail::skip_space_and_comments(in);
            long v = -1;
            if (!(in >> v)) fail(ErrorCode::Parse, "PGM pixel data truncated at sample " + std::to_string(k));
            require(v >= 0 && v <= maxval, ErrorCode::Parse, "PGM pixel outside [0, maxval]");
            img.field.values[k] = static_cast<double>(v) / maxval;
        }
    }
    return img;
}

inline PgmImage read_pgm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path);
    return read_pgm(in);
}

/// Quantizes clamp(v, 0, 1) * maxval to the nearest integer.
inline void write_pgm(std::ostream& out, const GridField& f, int maxval = 255, bool binary = true)
{
    require(maxval >= 1 && maxval <= 65535, ErrorCode::InvalidArgument, "maxval must be in [1, 65535]");
    out << (binary ? "P5" : "P2") << "\n" << f.width << " " << f.height << "\n" << maxval << "\n";
    auto quant = [maxval](double v) {
        return static_cast<int>(std::lround(std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0) * maxval));
    };
    if (binary) {
        std::string buf;
        for (double v : f.values) {
            const int q = quant(v);
            if (maxval >= 256) buf.push_back(static_cast<char>(q >> 8));
            buf.push_back(static_cast<char>(q & 0xff));
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    } else {
        for (int j = 0; j < f.height; ++j) {
            for (int i = 0; i < f.width; ++i) out << (i ? " " : "") << quant(f.at(i, j));
            out << "\n";
        }
    }
    require(static_cast<bool>(out), ErrorCode::Io, "PGM write failed");
}

inline void write_pgm(const std::string& path, const GridField& f, int maxval = 255, bool binary = true)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + path + " for writing");
    write_pgm(out, f, maxval, binary);
}

inline void write_ppm(const std::string& path, const RgbImage& img)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + path + " for writing");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    for (const auto& p : img.pixels) {
        const char rgb[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
        out.write(rgb, 3);
    }
    require(static_cast<bool>(out), ErrorCode::Io, "PPM write failed");
}

} // namespace isoops
