#include <cstdlib>
#include <iostream>
#include <string>

#include "sparserec/acceptance.hpp"

// Usage: acceptance_tests [id ...]
int main(int argc, char** argv) {
  sparserec::AcceptanceConfig config;
  if (const char* t = std::getenv("SPARSEREC_THREADS")) config.threads = std::max(1, std::atoi(t));
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  if (ids.empty())
    for (const auto& c : sparserec::list_criteria()) ids.push_back(c.id);

  int failed = 0;
  for (int id : ids) {
    const auto r = sparserec::run_criterion(id, config);
    std::cout << sparserec::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
