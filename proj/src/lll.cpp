#include "sl2spec/lll.hpp"
#include "sl2spec/errors.hpp"

namespace sl2spec {

namespace {

Rat dotq(const std::vector<Rat>& a, const std::vector<Int>& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (b[i] != 0) s += a[i] * Rat(b[i]);
    return s;
}

Rat dotqq(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

Int round_rat(const Rat& q) {
    // nearest integer, ties toward even via floor(q + 1/2)
    Rat h = q + Rat(1, 2);
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), h.get_num().get_mpz_t(), h.get_den().get_mpz_t());
    return fl;
}

} // namespace

void lll_reduce(std::vector<std::vector<Int>>& b, const Rat& delta) {
    const size_t n = b.size();
    if (n <= 1) return;
    const size_t dim = b[0].size();
    for (auto& row : b)
        if (row.size() != dim) throw Error("lll: ragged basis");

    // Gram-Schmidt data, recomputed incrementally.
    std::vector<std::vector<Rat>> star(n, std::vector<Rat>(dim));
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n));
    std::vector<Rat> B(n); // squared lengths of the orthogonal vectors

    auto compute_gs_row = [&](size_t i) {
        for (size_t d = 0; d < dim; ++d) star[i][d] = Rat(b[i][d]);
        for (size_t j = 0; j < i; ++j) {
            if (B[j] == 0) throw Error("lll: dependent rows");
            mu[i][j] = dotq(star[j], b[i]) / B[j];
            if (mu[i][j] != 0)
                for (size_t d = 0; d < dim; ++d) star[i][d] -= mu[i][j] * star[j][d];
        }
        B[i] = dotqq(star[i], star[i]);
    };
    for (size_t i = 0; i < n; ++i) compute_gs_row(i);

    auto size_reduce = [&](size_t k, size_t j) {
        Int r = round_rat(mu[k][j]);
        if (r == 0) return;
        for (size_t d = 0; d < dim; ++d) b[k][d] -= r * b[j][d];
        for (size_t l = 0; l < j; ++l) mu[k][l] -= Rat(r) * mu[j][l];
        mu[k][j] -= Rat(r);
    };

    size_t k = 1;
    while (k < n) {
        for (size_t j = k; j-- > 0;) size_reduce(k, j);
        Rat lhs = B[k];
        Rat rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            // recompute the two affected GS rows and the dependent mus
            for (size_t i = k - 1; i < n; ++i) compute_gs_row(i);
            k = k > 1 ? k - 1 : 1;
        }
    }
}

} // namespace sl2spec
