#pragma once

#include <cstddef>

// Counts global operator new calls while armed. Linked into the test
// executables only.
namespace alloc_probe {

void arm();
void disarm();
std::size_t count();
std::size_t largest();

class Scope {
 public:
  Scope() { arm(); }
  ~Scope() { disarm(); }
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;
};

}  // namespace alloc_probe
