#include "renyi/parallel.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace renyi {

unsigned
default_threads()
{
  return std::max(1u, std::thread::hardware_concurrency());
}

void
parallel_for(std::size_t count,
             unsigned threads,
             const std::function<void(std::size_t)>& body)
{
  if (count == 0)
    return;
  if (threads == 0)
    threads = default_threads();
  const std::size_t workers =
    std::min<std::size_t>(threads, count);

  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }

  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> failed_at(workers, none);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);

  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(count, begin + block);
    pool.emplace_back([&, w, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          failed_at[w] = i;
          errors[w] = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool)
    t.join();

  // blocks are ordered, so the first failing worker holds the smallest index
  for (std::size_t w = 0; w < workers; ++w) {
    if (failed_at[w] != none)
      std::rethrow_exception(errors[w]);
  }
}

} // namespace renyi
