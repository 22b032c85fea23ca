#pragma once

namespace eqpl {

template <typename F>
Ptr rewrite(const Ptr& n, F&& f) {
  bool changed = false;
  std::vector<Ptr> args;
  args.reserve(n->args.size());
  for (const auto& a : n->args) {
    Ptr r = rewrite(a, f);
    changed = changed || r != a;
    args.push_back(std::move(r));
  }
  if (!changed) return f(n);
  auto copy = std::make_shared<Node>(*n);
  copy->args = std::move(args);
  return f(Ptr(std::move(copy)));
}

}  // namespace eqpl
