#include "hott/env.hpp"

#include <algorithm>

namespace hott {

const Declaration* Environment::find(const Name& n) const {
  auto it = by_name_.find(n);
  return it == by_name_.end() ? nullptr : decls_[it->second].get();
}

const Declaration& Environment::get(const Name& n) const {
  const Declaration* d = find(n);
  if (!d) throw Error(ErrorClass::Kernel, "unknown constant '" + n + "'");
  return *d;
}

std::optional<uint32_t> Environment::decl_index(const Name& n) const {
  auto it = by_name_.find(n);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

Environment Environment::extend(Declaration d) const {
  if (contains(d.name))
    throw Error(ErrorClass::Kernel, "duplicate declaration '" + d.name + "'");
  Environment e = *this;
  e.by_name_[d.name] = static_cast<uint32_t>(e.decls_.size());
  e.decls_.push_back(std::make_shared<const Declaration>(std::move(d)));
  return e;
}

bool Environment::is_instance(const Name& n) const {
  return std::find(instances_.begin(), instances_.end(), n) != instances_.end();
}

std::vector<Name> Environment::instances_newest_first() const {
  return {instances_.rbegin(), instances_.rend()};
}

Environment Environment::set_class(const Name& n) const {
  Environment e = *this;
  e.classes_[n] = 1;
  return e;
}

Environment Environment::add_instance(const Name& n) const {
  Environment e = *this;
  if (!e.is_instance(n)) e.instances_.push_back(n);
  return e;
}

Environment Environment::add_coercion(const Name& src, const Name& n) const {
  auto it = coercions_.find(src);
  if (it != coercions_.end() && it->second != n)
    throw Error(ErrorClass::Coercion,
                "coercion for source '" + src + "' already registered ('" +
                    it->second + "'); duplicate registration '" + n + "' rejected");
  Environment e = *this;
  e.coercions_[src] = n;
  return e;
}

const RecursorInfo* Environment::recursor_rule(const Name& head) const {
  auto it = rec_rules_.find(head);
  return it == rec_rules_.end() ? nullptr : it->second.get();
}

const HitRule* Environment::hit_rule(const Name& head) const {
  for (const auto& r : hit_rules_)
    if (r.elim == head) return &r;
  return nullptr;
}

Environment Environment::add_recursor_rule(std::shared_ptr<const RecursorInfo> info) const {
  Environment e = *this;
  e.rec_rules_[info->name] = std::move(info);
  return e;
}

Environment Environment::add_hit_rule(HitRule rule) const {
  Environment e = *this;
  e.hit_rules_.push_back(std::move(rule));
  return e;
}

}  // namespace hott
