#include "selfprompt/errors.hpp"

namespace selfprompt {

void throw_validation(const std::string& what) { throw ValidationError(what); }

}  // namespace selfprompt
