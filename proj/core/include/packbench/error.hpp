#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace packbench {

enum class ErrorCode {
    kMalformedInput,
    kMalformedOutput,
    kUnknownItemIndex,
    kNonNumericCoordinate,
    kNoBinsUsed,
    kItemTooWide,
    kStripTooTall,
    kItemTooLarge,
    kBadParams,
    kTooLarge,
    kNoExemplars,
    kNoIslands,
    kNoCodeFound,
    kProviderError,
    kCredentialMissing,
    kFixtureExhausted,
    kConfig,
    kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace packbench
