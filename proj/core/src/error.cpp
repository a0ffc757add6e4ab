#include "maskprompt/error.hpp"

namespace maskprompt {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::FileNotFound: return "file not found";
        case ErrorKind::UnsupportedFormat: return "unsupported format";
        case ErrorKind::EmptyRaster: return "empty raster";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::InvariantViolation: return "invariant violation";
        case ErrorKind::EmptySamplingRegion: return "empty sampling region";
        case ErrorKind::NoPositiveRegion: return "no positive region";
        case ErrorKind::NoNegativeRegion: return "no negative region";
        case ErrorKind::NoSeeds: return "no seeds";
        case ErrorKind::InvalidPrompt: return "invalid prompt";
        case ErrorKind::PhantomDoesNotFit: return "phantom does not fit";
        case ErrorKind::EmptyInput: return "empty input";
        case ErrorKind::Config: return "config error";
        case ErrorKind::Schema: return "schema error";
    }
    return "unknown";
}

}  // namespace maskprompt
