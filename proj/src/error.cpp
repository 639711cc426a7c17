#include "gcmetro/error.hpp"

#include <sstream>

namespace gcmetro {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "invalid algebra parameters:";
    for (const auto& s : v) os << " [" << s << "]";
    return os.str();
}

}  // namespace

InvalidParams::InvalidParams(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

NonPositiveLadder::NonPositiveLadder(long level)
    : Error("ladder coefficient squared is non-positive at level " + std::to_string(level)),
      level_(level) {}

InvalidEfficiency::InvalidEfficiency(double eta)
    : Error("detection efficiency must lie in (0, 1], got " + std::to_string(eta)) {}

CutoffTooSmall::CutoffTooSmall(long requested, long required)
    : Error("Fock cutoff " + std::to_string(requested) + " is below the required cutoff " +
            std::to_string(required)) {}

}  // namespace gcmetro
