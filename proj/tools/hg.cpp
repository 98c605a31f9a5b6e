#include <cstdio>

int main() {
  std::puts("hg: placeholder");
  return 0;
}
