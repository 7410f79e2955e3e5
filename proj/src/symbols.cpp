#include "mappop/symbols.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mappop {

int SymbolTable::intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end())
        return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
}

int SymbolTable::lookup(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

const std::string& SymbolTable::name(int id) const {
    return names_.at(static_cast<size_t>(id));
}

std::vector<int> SymbolTable::freeze_sorted() {
    std::vector<int> order(names_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return names_[a] < names_[b]; });
    std::vector<std::string> sorted(names_.size());
    std::vector<int> remap(names_.size());
    for (size_t new_id = 0; new_id < order.size(); ++new_id) {
        sorted[new_id] = names_[order[new_id]];
        remap[order[new_id]] = static_cast<int>(new_id);
    }
    names_ = std::move(sorted);
    index_.clear();
    for (size_t i = 0; i < names_.size(); ++i)
        index_.emplace(names_[i], static_cast<int>(i));
    return remap;
}

}  // namespace mappop
