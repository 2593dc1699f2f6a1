#include "triallog.hpp"

#include <stdexcept>

namespace usv::log {

std::string to_string(Side side) {
  return side == Side::kPort ? "port" : "starboard";
}

Side side_from_string(const std::string& s) {
  if (s == "port") return Side::kPort;
  if (s == "starboard") return Side::kStarboard;
  throw std::invalid_argument("unknown side: " + s);
}

void TrialLog::validate() const {
  for (size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t))
      throw std::invalid_argument("TrialLog: non-increasing timestamp at sample " +
                                  std::to_string(i));
  }
  if (metadata.execute_index != -1 &&
      (metadata.execute_index < 0 ||
       metadata.execute_index >= static_cast<long>(samples.size())))
    throw std::invalid_argument("TrialLog: execute_index out of range");
}

}  // namespace usv::log
