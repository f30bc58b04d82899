#include "fringe/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "fringe/errors.hpp"

namespace fringe {

namespace {

bool host_is_little_endian() {
    const uint16_t probe = 1;
    unsigned char b;
    std::memcpy(&b, &probe, 1);
    return b == 1;
}

void swap32(unsigned char* p, size_t count) {
    for (size_t i = 0; i < count; ++i, p += 4) {
        std::swap(p[0], p[3]);
        std::swap(p[1], p[2]);
    }
}

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c))
        tok.push_back(static_cast<char>(c));
    if (tok.empty())
        throw IoError("truncated image header");
    return tok;
}

int parse_dim(const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v <= 0)
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw IoError(std::string("bad ") + what + " in image header: " + tok);
    }
}

}  // namespace

void write_pfm(const RealField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << "Pf\n" << f.width() << " " << f.height() << "\n-1.0\n";
    // PFM scanlines run bottom-to-top
    std::vector<float> row(static_cast<size_t>(f.width()));
    for (int y = f.height() - 1; y >= 0; --y) {
        for (int x = 0; x < f.width(); ++x)
            row[static_cast<size_t>(x)] = static_cast<float>(f.at(y, x));
        if (!host_is_little_endian())
            swap32(reinterpret_cast<unsigned char*>(row.data()), row.size());
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out)
        throw IoError("short write: " + path);
}

RealField read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open: " + path);
    std::string magic = next_token(in);
    if (magic != "Pf")
        throw IoError("not a grayscale PFM file: " + path);
    int w = parse_dim(next_token(in), "width");
    int h = parse_dim(next_token(in), "height");
    double scale;
    try {
        scale = std::stod(next_token(in));
    } catch (const std::exception&) {
        throw IoError("bad scale in PFM header: " + path);
    }
    const bool file_little = scale < 0.0;
    std::vector<float> buf(static_cast<size_t>(w) * h);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
        throw IoError("truncated PFM payload: " + path);
    if (file_little != host_is_little_endian())
        swap32(reinterpret_cast<unsigned char*>(buf.data()), buf.size());
    RealField f(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            f.at(y, x) = buf[static_cast<size_t>(h - 1 - y) * w + x];
    f.validate_finite(("PFM " + path).c_str());
    return f;
}

void write_pgm(const RealField& f, const std::string& path, double lo, double hi,
               bool sixteen_bit) {
    if (!(hi > lo))
        throw ConfigError("write_pgm: hi must exceed lo");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    const int maxval = sixteen_bit ? 65535 : 255;
    out << "P5\n" << f.width() << " " << f.height() << "\n" << maxval << "\n";
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            double t = (f.at(y, x) - lo) / (hi - lo);
            if (t < 0.0) t = 0.0;
            if (t > 1.0) t = 1.0;
            unsigned v = static_cast<unsigned>(t * maxval + 0.5);
            if (sixteen_bit) {
                // 16-bit PGM payload is big-endian
                unsigned char b[2] = {static_cast<unsigned char>(v >> 8),
                                      static_cast<unsigned char>(v & 0xff)};
                out.write(reinterpret_cast<const char*>(b), 2);
            } else {
                unsigned char b = static_cast<unsigned char>(v);
                out.write(reinterpret_cast<const char*>(&b), 1);
            }
        }
    }
    if (!out)
        throw IoError("short write: " + path);
}

RealField read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open: " + path);
    if (next_token(in) != "P5")
        throw IoError("not a binary PGM file: " + path);
    int w = parse_dim(next_token(in), "width");
    int h = parse_dim(next_token(in), "height");
    int maxval = parse_dim(next_token(in), "maxval");
    const bool wide = maxval > 255;
    std::vector<unsigned char> buf(static_cast<size_t>(w) * h * (wide ? 2 : 1));
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        throw IoError("truncated PGM payload: " + path);
    RealField f(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            size_t i = static_cast<size_t>(y) * w + x;
            f.at(y, x) = wide ? double(buf[2 * i] << 8 | buf[2 * i + 1]) : double(buf[i]);
        }
    return f;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(',');
        out += cells[i];
    }
    return out;
}

std::string format_double(double v) {
    // shortest representation that parses back to the same double
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::stod(buf) == v)
            return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace fringe
