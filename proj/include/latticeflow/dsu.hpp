#pragma once
#include <numeric>
#include <vector>

namespace lf {

// union-find with path halving and union by size
struct Dsu {
    std::vector<int> p, sz;
    explicit Dsu(int n = 0) { reset(n); }
    void reset(int n) {
        p.resize(n);
        sz.assign(n, 1);
        std::iota(p.begin(), p.end(), 0);
    }
    int find(int x) {
        while (p[x] != x) {
            p[x] = p[p[x]];
            x = p[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (sz[a] < sz[b]) std::swap(a, b);
        p[b] = a;
        sz[a] += sz[b];
        return true;
    }
    bool same(int a, int b) { return find(a) == find(b); }
    int count() {
        int c = 0;
        for (int i = 0; i < (int)p.size(); ++i) c += (find(i) == i);
        return c;
    }
};

}  // namespace lf
