#pragma once

#include <cstddef>
#include <vector>

namespace mcflab {

/// Row-major square array over an arbitrary field type (double or an exact rational).
template <class T>
class SquareArray {
public:
    SquareArray() = default;
    explicit SquareArray(int n, const T& fill = T(0)) : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {}

    static SquareArray identity(int n)
    {
        SquareArray out(n);
        for (int i = 0; i < n; ++i) out(i, i) = T(1);
        return out;
    }

    int size() const { return n_; }
    T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    const std::vector<T>& data() const { return a_; }

private:
    int n_ = 0;
    std::vector<T> a_;
};

/// Index of the pair (i, j), i < j, in lexicographic order among n(n-1)/2 pairs.
inline int pair_index(int i, int j, int n) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

inline int pair_count(int n) { return n * (n - 1) / 2; }

}  // namespace mcflab
