#include <algorithm>
#include <cstdlib>
#include <string>

#include "ampload/error.hpp"
#include "ampload/types.hpp"

namespace ampload {

Limits Limits::current() {
  Limits lim;
  if (const char* env = std::getenv("AMPLOAD_MAX_QUBITS"); env && *env) {
    int v = 0;
    try {
      v = std::stoi(env);
    } catch (const std::exception&) {
      fail(ErrorCode::Config, std::string("AMPLOAD_MAX_QUBITS is not an integer: ") + env);
    }
    require(v >= 1 && v <= 30, ErrorCode::Config, "AMPLOAD_MAX_QUBITS must be in [1, 30]");
    lim.max_statevector_qubits = v;
    lim.max_dense_qubits = std::min(lim.max_dense_qubits, v);
    lim.max_density_qubits = std::min(lim.max_density_qubits, v);
  }
  return lim;
}

}  // namespace ampload
