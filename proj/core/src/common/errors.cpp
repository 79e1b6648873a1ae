#include "gibo/common/errors.hpp"

namespace gibo {

KinematicLockError::KinematicLockError(const std::string& what, double travel)
    : std::runtime_error(what), travel_(travel) {}

}  // namespace gibo
