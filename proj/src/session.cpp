#include "k0calc/session.hpp"

namespace k0calc {

bool is_small_prime(long long p) {
    if (p < 2 || p > 97) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int Session::declare_var(const std::string& name) {
    if (name.empty()) fail(ErrorKind::VarError, "empty variable name");
    auto it = var_index_.find(name);
    if (it != var_index_.end()) return it->second;
    int idx = static_cast<int>(vars_.size());
    vars_.push_back(name);
    var_index_.emplace(name, idx);
    return idx;
}

int Session::find_var(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? -1 : it->second;
}

int Session::fresh_var(const std::string& base) {
    if (var_index_.find(base) == var_index_.end()) return declare_var(base);
    for (int suffix = 2;; ++suffix) {
        std::string name = base + std::to_string(suffix);
        if (var_index_.find(name) == var_index_.end()) return declare_var(name);
    }
}

const std::string& Session::var_name(int idx) const {
    if (idx < 0 || idx >= static_cast<int>(vars_.size()))
        fail(ErrorKind::VarError, "variable index " + std::to_string(idx) + " out of range");
    return vars_[static_cast<size_t>(idx)];
}

}  // namespace k0calc
