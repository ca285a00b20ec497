#include "packbench/error.hpp"

namespace packbench {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kMalformedOutput: return "MalformedOutput";
    case ErrorCode::kUnknownItemIndex: return "UnknownItemIndex";
    case ErrorCode::kNonNumericCoordinate: return "NonNumericCoordinate";
    case ErrorCode::kNoBinsUsed: return "NoBinsUsed";
    case ErrorCode::kItemTooWide: return "ItemTooWide";
    case ErrorCode::kStripTooTall: return "StripTooTall";
    case ErrorCode::kItemTooLarge: return "ItemTooLarge";
    case ErrorCode::kBadParams: return "BadParams";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kNoExemplars: return "NoExemplars";
    case ErrorCode::kNoIslands: return "NoIslands";
    case ErrorCode::kNoCodeFound: return "NoCodeFound";
    case ErrorCode::kProviderError: return "ProviderError";
    case ErrorCode::kCredentialMissing: return "CredentialMissing";
    case ErrorCode::kFixtureExhausted: return "FixtureExhausted";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
    }
    return "Unknown";
}

}  // namespace packbench
