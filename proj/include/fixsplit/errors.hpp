#pragma once
#include <stdexcept>
#include <string>

namespace fixsplit {

/* All library errors carry a stable machine-readable code; the CLI maps
   codes to exit codes (invalid input = 1, usage = 2, retryable search
   exhaustion = 3, paper-guarantee violation = 4). */
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }
private:
    std::string code_;
};

/* Retryable: a larger SearchBudget may succeed. */
class BudgetExhausted : public Error {
public:
    explicit BudgetExhausted(const std::string& msg) : Error("BudgetExhausted", msg) {}
};

/* Fatal: an inequality the source material guarantees failed empirically.
   Signals an implementation bug; must abort loudly, never be swallowed. */
class GuaranteeViolated : public Error {
public:
    explicit GuaranteeViolated(const std::string& msg) : Error("GuaranteeViolated", msg) {}
};

inline Error err(const std::string& code, const std::string& msg) { return Error(code, msg); }

} // namespace fixsplit
