#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct invalid_field_error : error {
    using error::error;
};

struct invalid_exponent_error : error {
    using error::error;
};

struct grid_mismatch_error : error {
    using error::error;
};

struct assumption_violation_error : error {
    using error::error;
};

struct invalid_family_error : error {
    using error::error;
};

struct projection_failure_error : error {
    using error::error;
};

struct undefined_on_origin_error : error {
    using error::error;
};

struct unsupported_check_error : error {
    using error::error;
};

struct wrong_regime_error : error {
    using error::error;
};

struct stall_error : error {
    using error::error;
};

struct config_error : error {
    using error::error;
};

} // namespace nehari
