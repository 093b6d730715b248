#ifndef KHW_CHECK_HPP
#define KHW_CHECK_HPP

#include <stdexcept>
#include <string>

namespace khw {

// A verification check that was run and did not hold (CLI exit code 3).
struct check_failure : std::runtime_error {
    explicit check_failure(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural invariant the library relies on was violated (CLI exit code 4).
// Always on, release builds included.
inline void internal_check(bool ok, const char* msg) {
    if (!ok) throw std::logic_error(msg);
}

}  // namespace khw

#endif
