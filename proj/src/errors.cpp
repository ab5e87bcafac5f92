#include "qinfer/errors.hpp"

#include <fmt/format.h>

namespace qinfer {

ConditioningOnNull::ConditioningOnNull(std::string factor, double trace)
    : std::domain_error(fmt::format("conditioning on null proposition {} (trace {:.3e})", factor, trace)),
      factor_(std::move(factor)),
      trace_(trace) {}

}  // namespace qinfer
