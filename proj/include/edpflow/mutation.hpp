#pragma once

// Test hook: deliberate faults injected into library kernels so that property suites
// can be shown to detect them. Never enabled in normal runs.

#include <string_view>

namespace edpflow::mutation {

enum class Kind {
  none,
  flux_sign,  // constitutive_fluxes returns -F, -J
};

void set(Kind kind) noexcept;
Kind current() noexcept;
/// "none" or "flux-sign"; ConfigError otherwise.
Kind parse(std::string_view name);

/// Enables a mutation for the lifetime of the guard.
class Scope {
 public:
  explicit Scope(Kind kind) noexcept : previous_(current()) { set(kind); }
  ~Scope() { set(previous_); }
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;

 private:
  Kind previous_;
};

}  // namespace edpflow::mutation
