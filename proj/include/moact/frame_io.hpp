#ifndef MOACT_FRAME_IO_HPP
#define MOACT_FRAME_IO_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "moact/error.hpp"
#include "moact/frame.hpp"

namespace moact {

enum class SourceFormat { y4m, raw_yuv420, pgm_sequence };

inline const char* source_format_name(SourceFormat f) {
    switch (f) {
    case SourceFormat::y4m:          return "y4m";
    case SourceFormat::raw_yuv420:   return "yuv420";
    case SourceFormat::pgm_sequence: return "pgm";
    }
    return "?";
}

struct OpenHints {
    std::optional<int> width;
    std::optional<int> height;
    std::optional<SourceFormat> format;
};

/// Immutable handle to an opened video source. read_frame() performs
/// positioned reads through its own stream, so concurrent reads of
/// distinct indices are safe.
struct SourceDescriptor {
    SourceFormat format = SourceFormat::raw_yuv420;
    int width = 0;
    int height = 0;
    int frame_count = 0;

    std::filesystem::path path;

    // Y4M: byte offset of each FRAME marker, plane sizes parsed from the header.
    std::vector<std::uint64_t> y4m_frame_offsets;
    std::uint64_t luma_size = 0;
    std::uint64_t chroma_size = 0; // per plane; 0 for mono

    // Raw YUV 4:2:0: fixed bytes per frame.
    std::uint64_t raw_frame_size = 0;

    // PGM sequence: files in playback order.
    std::vector<std::filesystem::path> pgm_files;
};

namespace detail {

inline std::ifstream open_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::io_failure, "cannot open " + path.string());
    return in;
}

inline std::uint64_t file_size_of(const std::filesystem::path& path) {
    std::error_code ec;
    auto size = std::filesystem::file_size(path, ec);
    if (ec)
        raise(Errc::io_failure, "cannot stat " + path.string() + ": " + ec.message());
    return size;
}

// Reads bytes [offset, offset+count) or fails.
inline void read_at(std::ifstream& in, std::uint64_t offset, std::uint8_t* dst,
                    std::uint64_t count, const std::filesystem::path& path) {
    in.seekg(static_cast<std::streamoff>(offset));
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
    if (static_cast<std::uint64_t>(in.gcount()) != count)
        raise(Errc::io_failure, "short read in " + path.string());
}

// Reads one '\n'-terminated line starting at offset; returns the line
// without the terminator and advances offset past it.
inline std::string read_line_at(std::ifstream& in, std::uint64_t& offset,
                                const std::filesystem::path& path, std::size_t max_len = 4096) {
    in.seekg(static_cast<std::streamoff>(offset));
    std::string line;
    char c;
    while (line.size() < max_len && in.get(c)) {
        ++offset;
        if (c == '\n')
            return line;
        line.push_back(c);
    }
    raise(Errc::io_failure, "unterminated header line in " + path.string());
}

struct Y4mHeader {
    int width = 0;
    int height = 0;
    bool mono = false;
};

inline int parse_header_int(const std::string& value, const char* tag,
                            const std::filesystem::path& path) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos ||
        value.size() > 9)
        raise(Errc::io_failure,
              std::string("malformed ") + tag + " tag in Y4M header of " + path.string());
    return std::stoi(value);
}

inline Y4mHeader parse_y4m_header(const std::string& line, const std::filesystem::path& path) {
    // line is everything after "YUV4MPEG2" up to the newline.
    Y4mHeader hdr;
    bool have_w = false, have_h = false;
    std::size_t pos = 0;
    while (pos < line.size()) {
        if (line[pos] == ' ') {
            ++pos;
            continue;
        }
        std::size_t end = line.find(' ', pos);
        if (end == std::string::npos)
            end = line.size();
        std::string token = line.substr(pos, end - pos);
        pos = end;
        if (token.empty())
            continue;
        char tag = token[0];
        std::string value = token.substr(1);
        switch (tag) {
        case 'W':
            hdr.width = parse_header_int(value, "W", path);
            have_w = true;
            break;
        case 'H':
            hdr.height = parse_header_int(value, "H", path);
            have_h = true;
            break;
        case 'C':
            if (value == "420" || value == "420jpeg" || value == "420paldv" ||
                value == "420mpeg2") {
                hdr.mono = false;
            } else if (value == "mono") {
                hdr.mono = true;
            } else {
                raise(Errc::unsupported_colorspace,
                      "Y4M colorspace C" + value + " in " + path.string() +
                          " (only 8-bit 4:2:0 and mono are supported)");
            }
            break;
        default:
            break; // F, I, A, X tags carry no information we use
        }
    }
    if (!have_w || !have_h)
        raise(Errc::io_failure, "Y4M header missing W or H in " + path.string());
    if (hdr.width <= 0 || hdr.height <= 0)
        raise(Errc::dimension_mismatch, "non-positive Y4M dimensions in " + path.string());
    if (!hdr.mono && (hdr.width % 2 != 0 || hdr.height % 2 != 0))
        raise(Errc::dimension_mismatch,
              "4:2:0 needs even dimensions, got " + std::to_string(hdr.width) + "x" +
                  std::to_string(hdr.height) + " in " + path.string());
    return hdr;
}

inline SourceDescriptor open_y4m(const std::filesystem::path& path) {
    auto in = open_binary(path);
    std::uint64_t size = file_size_of(path);
    std::uint64_t offset = 0;
    std::string header = read_line_at(in, offset, path);
    const std::string magic = "YUV4MPEG2";
    if (header.compare(0, magic.size(), magic) != 0)
        raise(Errc::unknown_format, "missing YUV4MPEG2 magic in " + path.string());
    Y4mHeader hdr = parse_y4m_header(header.substr(magic.size()), path);

    SourceDescriptor src;
    src.format = SourceFormat::y4m;
    src.path = path;
    src.width = hdr.width;
    src.height = hdr.height;
    src.luma_size = static_cast<std::uint64_t>(hdr.width) * hdr.height;
    src.chroma_size = hdr.mono ? 0 : (static_cast<std::uint64_t>(hdr.width) / 2) * (hdr.height / 2);
    const std::uint64_t payload = src.luma_size + 2 * src.chroma_size;

    while (offset < size) {
        std::uint64_t marker = offset;
        std::string line = read_line_at(in, offset, path);
        if (line.compare(0, 5, "FRAME") != 0)
            raise(Errc::missing_frame_marker,
                  "expected FRAME marker at offset " + std::to_string(marker) + " in " +
                      path.string());
        if (offset + payload > size)
            raise(Errc::io_failure, "truncated frame payload in " + path.string());
        src.y4m_frame_offsets.push_back(marker);
        offset += payload;
    }
    src.frame_count = static_cast<int>(src.y4m_frame_offsets.size());
    return src;
}

inline SourceDescriptor open_raw_yuv420(const std::filesystem::path& path, int width,
                                        int height) {
    if (width <= 0 || height <= 0)
        raise(Errc::dimension_mismatch, "non-positive raw dimensions");
    if (width % 2 != 0 || height % 2 != 0)
        raise(Errc::dimension_mismatch, "raw 4:2:0 needs even dimensions, got " +
                                            std::to_string(width) + "x" + std::to_string(height));
    SourceDescriptor src;
    src.format = SourceFormat::raw_yuv420;
    src.path = path;
    src.width = width;
    src.height = height;
    src.luma_size = static_cast<std::uint64_t>(width) * height;
    src.chroma_size = (static_cast<std::uint64_t>(width) / 2) * (height / 2);
    src.raw_frame_size = src.luma_size + 2 * src.chroma_size;
    std::uint64_t size = file_size_of(path);
    if (size % src.raw_frame_size != 0)
        raise(Errc::dimension_mismatch,
              path.string() + " is " + std::to_string(size) + " bytes, not a multiple of the " +
                  std::to_string(src.raw_frame_size) + "-byte frame size for " +
                  std::to_string(width) + "x" + std::to_string(height));
    src.frame_count = static_cast<int>(size / src.raw_frame_size);
    return src;
}

struct PgmHeader {
    int width = 0;
    int height = 0;
    std::uint64_t data_offset = 0;
};

inline PgmHeader parse_pgm_header(std::ifstream& in, const std::filesystem::path& path) {
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P' || m1 != '5')
        raise(Errc::unknown_format, "missing P5 magic in " + path.string());

    std::uint64_t offset = 2;
    auto next_int = [&](const char* what) {
        int c;
        // skip whitespace and '#' comments
        for (;;) {
            c = in.get();
            if (c == EOF)
                raise(Errc::io_failure, std::string("truncated PGM header (") + what + ") in " +
                                            path.string());
            ++offset;
            if (c == '#') {
                while (c != '\n' && c != EOF) {
                    c = in.get();
                    ++offset;
                }
                continue;
            }
            if (!std::isspace(c))
                break;
        }
        long value = 0;
        bool any = false;
        while (c != EOF && std::isdigit(c)) {
            value = value * 10 + (c - '0');
            any = true;
            c = in.get();
            ++offset;
        }
        if (!any)
            raise(Errc::io_failure, std::string("malformed PGM header (") + what + ") in " +
                                        path.string());
        // c is the single whitespace byte terminating the token
        if (c == EOF || !std::isspace(c))
            raise(Errc::io_failure, "malformed PGM header in " + path.string());
        return value;
    };

    long width = next_int("width");
    long height = next_int("height");
    long maxval = next_int("maxval");
    if (maxval != 255)
        raise(Errc::unsupported_colorspace,
              "PGM maxval " + std::to_string(maxval) + " in " + path.string() +
                  " (only 8-bit maxval 255 is supported)");
    PgmHeader hdr;
    hdr.width = static_cast<int>(width);
    hdr.height = static_cast<int>(height);
    hdr.data_offset = offset;
    return hdr;
}

inline bool has_pgm_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm";
}

// Numeric value embedded in the filename: last run of digits in the stem,
// -1 when there is none. Ordering is (value, name).
inline long long pgm_sequence_key(const std::filesystem::path& p) {
    std::string stem = p.stem().string();
    auto last = stem.find_last_of("0123456789");
    if (last == std::string::npos)
        return -1;
    std::size_t first = last;
    while (first > 0 && std::isdigit(static_cast<unsigned char>(stem[first - 1])))
        --first;
    std::string digits = stem.substr(first, last - first + 1);
    if (digits.size() > 18)
        digits = digits.substr(digits.size() - 18);
    return std::stoll(digits);
}

inline SourceDescriptor open_pgm_sequence(const std::filesystem::path& path) {
    SourceDescriptor src;
    src.format = SourceFormat::pgm_sequence;
    src.path = path;

    if (std::filesystem::is_directory(path)) {
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (entry.is_regular_file() && has_pgm_extension(entry.path()))
                src.pgm_files.push_back(entry.path());
        }
        if (src.pgm_files.empty())
            raise(Errc::unknown_format, "no .pgm files in " + path.string());
        std::sort(src.pgm_files.begin(), src.pgm_files.end(),
                  [](const std::filesystem::path& a, const std::filesystem::path& b) {
                      auto ka = pgm_sequence_key(a), kb = pgm_sequence_key(b);
                      if (ka != kb)
                          return ka < kb;
                      return a.filename().string() < b.filename().string();
                  });
    } else {
        src.pgm_files.push_back(path);
    }

    for (std::size_t i = 0; i < src.pgm_files.size(); ++i) {
        auto in = open_binary(src.pgm_files[i]);
        PgmHeader hdr = parse_pgm_header(in, src.pgm_files[i]);
        if (i == 0) {
            src.width = hdr.width;
            src.height = hdr.height;
        } else if (hdr.width != src.width || hdr.height != src.height) {
            raise(Errc::dimension_mismatch,
                  src.pgm_files[i].string() + " is " + std::to_string(hdr.width) + "x" +
                      std::to_string(hdr.height) + ", sequence is " + std::to_string(src.width) +
                      "x" + std::to_string(src.height));
        }
    }
    src.frame_count = static_cast<int>(src.pgm_files.size());
    return src;
}

inline bool sniff_magic(const std::filesystem::path& path, const char* magic, std::size_t len) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::string buf(len, '\0');
    in.read(buf.data(), static_cast<std::streamsize>(len));
    return static_cast<std::size_t>(in.gcount()) == len && buf.compare(0, len, magic) == 0;
}

} // namespace detail

inline SourceDescriptor open_source(const std::filesystem::path& path, OpenHints hints = {}) {
    if (!std::filesystem::exists(path))
        raise(Errc::io_failure, path.string() + " does not exist");

    if (hints.format) {
        switch (*hints.format) {
        case SourceFormat::y4m:
            return detail::open_y4m(path);
        case SourceFormat::pgm_sequence:
            return detail::open_pgm_sequence(path);
        case SourceFormat::raw_yuv420:
            if (!hints.width || !hints.height)
                raise(Errc::unknown_format,
                      "raw YUV 4:2:0 needs explicit width/height for " + path.string());
            return detail::open_raw_yuv420(path, *hints.width, *hints.height);
        }
    }

    if (std::filesystem::is_directory(path))
        return detail::open_pgm_sequence(path);
    if (detail::sniff_magic(path, "YUV4MPEG2", 9))
        return detail::open_y4m(path);
    if (detail::sniff_magic(path, "P5", 2))
        return detail::open_pgm_sequence(path);
    if (hints.width && hints.height)
        return detail::open_raw_yuv420(path, *hints.width, *hints.height);

    raise(Errc::unknown_format,
          path.string() + ": no Y4M magic, no PGM magic, and no dimensions given for raw YUV");
}

inline Frame read_frame(const SourceDescriptor& source, int index) {
    if (index < 0 || index >= source.frame_count)
        raise(Errc::index_out_of_range,
              "frame " + std::to_string(index) + " of " + std::to_string(source.frame_count));

    switch (source.format) {
    case SourceFormat::y4m: {
        auto in = detail::open_binary(source.path);
        std::uint64_t offset = source.y4m_frame_offsets[static_cast<std::size_t>(index)];
        std::string marker = detail::read_line_at(in, offset, source.path);
        if (marker.compare(0, 5, "FRAME") != 0)
            raise(Errc::missing_frame_marker,
                  "expected FRAME marker for frame " + std::to_string(index) + " in " +
                      source.path.string());
        std::vector<std::uint8_t> luma(source.luma_size);
        detail::read_at(in, offset, luma.data(), source.luma_size, source.path);
        return Frame(index, source.width, source.height, std::move(luma));
    }
    case SourceFormat::raw_yuv420: {
        auto in = detail::open_binary(source.path);
        std::vector<std::uint8_t> luma(source.luma_size);
        detail::read_at(in, static_cast<std::uint64_t>(index) * source.raw_frame_size,
                        luma.data(), source.luma_size, source.path);
        return Frame(index, source.width, source.height, std::move(luma));
    }
    case SourceFormat::pgm_sequence: {
        const auto& file = source.pgm_files[static_cast<std::size_t>(index)];
        auto in = detail::open_binary(file);
        detail::PgmHeader hdr = detail::parse_pgm_header(in, file);
        if (hdr.width != source.width || hdr.height != source.height)
            raise(Errc::dimension_mismatch, file.string() + " changed dimensions");
        std::vector<std::uint8_t> luma(static_cast<std::size_t>(hdr.width) * hdr.height);
        detail::read_at(in, hdr.data_offset, luma.data(), luma.size(), file);
        return Frame(index, source.width, source.height, std::move(luma));
    }
    }
    raise(Errc::unknown_format, "corrupt source descriptor");
}

inline void write_pgm(const Frame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        raise(Errc::io_failure, "cannot create " + path.string());
    out << "P5\n" << frame.width() << " " << frame.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.luma().data()),
              static_cast<std::streamsize>(frame.luma().size()));
    if (!out)
        raise(Errc::io_failure, "write failed for " + path.string());
}

} // namespace moact

#endif // MOACT_FRAME_IO_HPP
