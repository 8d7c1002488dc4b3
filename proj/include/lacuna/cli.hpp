#pragma once

namespace lacuna::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInconsistent = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

int run(int argc, char** argv);

}  // namespace lacuna::cli
