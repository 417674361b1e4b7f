#pragma once

#include <stdexcept>
#include <string>

namespace mergedyn {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DuplicateLabelError : Error {
    explicit DuplicateLabelError(const std::string& msg) : Error(msg) {}
};
struct InvalidCutError : Error {
    explicit InvalidCutError(const std::string& msg) : Error(msg) {}
};
struct InvalidHeadError : Error {
    explicit InvalidHeadError(const std::string& msg) : Error(msg) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};
struct CapExceededError : Error {
    explicit CapExceededError(const std::string& msg) : Error(msg) {}
};
struct ReducibleError : Error {
    explicit ReducibleError(const std::string& msg) : Error(msg) {}
};
struct PeriodicError : Error {
    explicit PeriodicError(const std::string& msg) : Error(msg) {}
};
struct NoConvergenceError : Error {
    explicit NoConvergenceError(const std::string& msg) : Error(msg) {}
};
struct ZeroRowError : Error {
    explicit ZeroRowError(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& msg) : Error(msg) {}
};
struct NotStronglyConnectedError : Error {
    explicit NotStronglyConnectedError(const std::string& msg) : Error(msg) {}
};
struct NegativeCycleError : Error {
    explicit NegativeCycleError(const std::string& msg) : Error(msg) {}
};
struct UnreachableError : Error {
    explicit UnreachableError(const std::string& msg) : Error(msg) {}
};
struct CostCollisionError : Error {
    explicit CostCollisionError(const std::string& msg) : Error(msg) {}
};
struct UnderflowError : Error {
    explicit UnderflowError(const std::string& msg) : Error(msg) {}
};
struct KindCollisionError : Error {
    explicit KindCollisionError(const std::string& msg) : Error(msg) {}
};
struct MismatchError : Error {
    explicit MismatchError(const std::string& msg) : Error(msg) {}
};

} // namespace mergedyn
