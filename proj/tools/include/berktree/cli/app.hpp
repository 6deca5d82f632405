#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "berktree/errors.hpp"

namespace berktree::cli {

// 2: the computation was refused (wild ramification, no stabilization,
// precision or size limits). 3: the input could not be understood.
enum ExitCode : int { kOk = 0, kInternal = 1, kRefused = 2, kBadInput = 3 };

inline constexpr const char* kVersion = "0.1.0";

// Runs f(N) and retries with doubled precision, at most four times, while
// it reports PrecisionExhausted.
template <class F>
auto with_precision_retry(int precision, F&& f) -> decltype(f(precision)) {
  for (int attempt = 0;; ++attempt) {
    try {
      return f(precision);
    } catch (const PrecisionExhausted&) {
      if (attempt == 4) throw;
      precision *= 2;
    }
  }
}

// Precision from BERKTREE_PRECISION when set and valid, else 64.
int default_precision();

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace berktree::cli
