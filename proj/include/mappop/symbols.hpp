#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace mappop {

// Bidirectional name <-> id table. Ids are dense and assigned in insertion
// order; freeze_sorted() reassigns them lexicographically so id comparison
// doubles as name comparison.
class SymbolTable {
public:
    int intern(const std::string& name);
    int lookup(const std::string& name) const;  // -1 if absent
    const std::string& name(int id) const;
    int size() const { return static_cast<int>(names_.size()); }

    // Sorts names and reassigns ids; returns old-id -> new-id map.
    std::vector<int> freeze_sorted();

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace mappop
