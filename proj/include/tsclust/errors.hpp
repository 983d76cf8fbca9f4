#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsclust {

// Exit-code categories used by the CLI.
enum class ErrorCategory : int {
    validation = 2,
    data = 3,
    numeric = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, std::string msg)
        : std::runtime_error(std::move(msg)), category_(cat) {}
    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

struct DataError : Error {
    explicit DataError(std::string msg) : Error(ErrorCategory::data, std::move(msg)) {}
};

struct NumericError : Error {
    explicit NumericError(std::string msg) : Error(ErrorCategory::numeric, std::move(msg)) {}
};

// Aggregates every violated constraint instead of failing on the first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(ErrorCategory::validation, join(violations)),
          violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

}  // namespace tsclust
