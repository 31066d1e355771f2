#ifndef MOACT_ERROR_HPP
#define MOACT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace moact {

enum class Errc {
    unknown_format,
    dimension_mismatch,
    unsupported_colorspace,
    index_out_of_range,
    io_failure,
    missing_frame_marker,
    frame_too_small,
    empty_field,
    negative_intensity,
    too_few_frames,
    too_few_samples,
    empty_signal,
    parse_error,
    invalid_argument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::unknown_format:         return "UnknownFormat";
    case Errc::dimension_mismatch:     return "DimensionMismatch";
    case Errc::unsupported_colorspace: return "UnsupportedColorspace";
    case Errc::index_out_of_range:     return "IndexOutOfRange";
    case Errc::io_failure:             return "IoFailure";
    case Errc::missing_frame_marker:   return "MissingFrameMarker";
    case Errc::frame_too_small:        return "FrameTooSmall";
    case Errc::empty_field:            return "EmptyField";
    case Errc::negative_intensity:     return "NegativeIntensity";
    case Errc::too_few_frames:         return "TooFewFrames";
    case Errc::too_few_samples:        return "TooFewSamples";
    case Errc::empty_signal:           return "EmptySignal";
    case Errc::parse_error:            return "ParseError";
    case Errc::invalid_argument:       return "InvalidArgument";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace moact

#endif // MOACT_ERROR_HPP
