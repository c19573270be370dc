#pragma once

#include <stdexcept>
#include <string>

namespace skyrank {

// Bad or inconsistent input data (unreadable files, mismatched masks, missing stage outputs).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skyrank
